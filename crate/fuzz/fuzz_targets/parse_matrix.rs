#![no_main]
use libfuzzer_sys::fuzz_target;
use quatrange::io::{matrix_to_json, parse_matrix_str};

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(a) = parse_matrix_str(text) {
            let again = parse_matrix_str(&matrix_to_json(&a)).expect("serialized matrix parses");
            assert_eq!(again, a);
        }
    }
});
