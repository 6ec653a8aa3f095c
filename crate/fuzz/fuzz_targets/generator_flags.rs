//! Arc-count, gap-placement, edge-placement and number-list flag parsers.
//! The first byte picks the parser.

#![no_main]

use ballpoly::io::{parse_arc_counts, parse_edge_placements, parse_gap_placements, parse_number_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    match sel % 4 {
        0 => {
            if let Ok(counts) = parse_arc_counts(text) {
                assert!(counts.keys().all(|[i, j]| i < j && *j < 4));
            }
        }
        1 => {
            if let Ok(gaps) = parse_gap_placements(text) {
                assert!(gaps.iter().flatten().all(|t| t.is_finite()));
            }
        }
        2 => {
            let _ = parse_edge_placements(text);
        }
        _ => {
            if let Ok(xs) = parse_number_list(text) {
                assert!(xs.iter().all(|x| x.is_finite()));
            }
        }
    }
});
