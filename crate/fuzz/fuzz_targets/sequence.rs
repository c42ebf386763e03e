#![no_main]

use libfuzzer_sys::fuzz_target;
use ppnr::files::parse_sequence;
use ppnr::group::FiniteGroup;
use ppnr::mealy::MealyMachine;

fuzz_target!(|data: &[u8]| {
    let Some((&order_byte, rest)) = data.split_first() else {
        return;
    };
    let order = usize::from(order_byte % 8) + 1;
    let group = FiniteGroup::cyclic(order).expect("small cyclic group");
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    if let Ok(seq) = parse_sequence(text, &group) {
        // Parsed sequences are in range, so the identity machine copies
        // them through unchanged.
        let id = MealyMachine::identity(&group);
        assert_eq!(id.evaluate(&seq).expect("in-range input"), seq);
    }
});
