//! Decoder followed by face-complex construction on small inputs. A
//! complex that builds must satisfy the Euler relation and validate.

#![no_main]

use ballpoly::faces::build_face_complex;
use ballpoly::io::parse_configuration;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(v) = parse_configuration(text) else { return };
    if v.len() > 8 {
        return;
    }
    if let Ok(fc) = build_face_complex(&v) {
        assert_eq!(fc.euler_characteristic(), 2);
        fc.to_abstract().validate().expect("built complex validates");
    }
});
