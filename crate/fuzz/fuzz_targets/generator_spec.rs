//! JSON generator specs; small suspended and rugby specs are also built.

#![no_main]

use ballpoly::generators::GeneratorSpec;
use ballpoly::Tolerance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(spec) = serde_json::from_slice::<GeneratorSpec>(data) else { return };
    let small = match &spec {
        GeneratorSpec::Suspended { k } => *k <= 8,
        GeneratorSpec::Rugby { n, .. } => *n <= 12,
        _ => false,
    };
    if small {
        let _ = spec.build(Tolerance::default());
    }
});
