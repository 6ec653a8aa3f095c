//! `--tolerance key=value,...` parser.

#![no_main]

use ballpoly::io::parse_tolerance_overrides;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(tol) = parse_tolerance_overrides(text) {
        assert!(tol.validate().is_ok());
    }
});
