#![no_main]

use libfuzzer_sys::fuzz_target;
use ppnr::group::GroupSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = GroupSpec::parse_shorthand(text) else {
        return;
    };
    if let Ok(group) = spec.build() {
        assert!(group.order() >= 1);
        assert_eq!(group.add(0, 0), 0);
        for x in 0..group.order() {
            assert_eq!(group.add(x, group.neg(x)), 0);
        }
    }
});
