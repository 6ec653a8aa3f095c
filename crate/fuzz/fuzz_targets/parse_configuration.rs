//! Point-set JSON decoder: arbitrary bytes must yield a configuration or
//! an error, and accepted configurations must survive a write/read cycle.

#![no_main]

use ballpoly::io::{parse_configuration, write_configuration};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_configuration(text) {
        let again = parse_configuration(&write_configuration(&v)).expect("written configuration parses");
        assert_eq!(again, v);
    }
});
