#![no_main]

use libfuzzer_sys::fuzz_target;
use ppnr::files::MachineFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = MachineFile::from_json(text) else {
        return;
    };

    // Canonical serialization round-trips byte for byte.
    let canonical = file.to_json();
    let reparsed = MachineFile::from_json(&canonical).expect("canonical form parses");
    assert_eq!(reparsed, file);
    assert_eq!(reparsed.to_json(), canonical);

    // A machine that validates must evaluate and trim without panicking.
    if let Ok(machine) = file.to_machine() {
        let _ = machine.evaluate(&[0; 4]);
        let trimmed = machine.trim();
        assert!(trimmed.state_count() <= machine.state_count());
    }
});
