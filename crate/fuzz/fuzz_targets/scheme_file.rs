#![no_main]

use libfuzzer_sys::fuzz_target;
use ppnr::embedding::{decode, encode};
use ppnr::files::SchemeFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = SchemeFile::from_json(text) else {
        return;
    };

    let canonical = file.to_json();
    let reparsed = SchemeFile::from_json(&canonical).expect("canonical form parses");
    assert_eq!(reparsed, file);

    // A scheme that validates must round-trip every element of G.
    if let Ok(scheme) = file.to_scheme() {
        for g in 0..scheme.g().order() {
            let y = encode(&scheme, g).expect("element is in range");
            assert_eq!(decode(&scheme, &y), g);
        }
    }
});
