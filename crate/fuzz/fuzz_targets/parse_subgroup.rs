#![no_main]

use cover_jacobians::report::{analyze, format_subgroup, parse_subgroup};
use cover_jacobians::DecomposeOptions;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|input: &str| {
    let Ok(gens) = parse_subgroup(input) else {
        return;
    };
    // Small degrees keep each run cheap; errors are fine, panics are not.
    for d in 1..=6u64 {
        let reduced: Vec<(u64, u64)> =
            gens.iter().map(|&(a, b)| (a.rem_euclid(d as i64) as u64, b.rem_euclid(d as i64) as u64)).collect();
        assert_eq!(parse_subgroup(&format_subgroup(&reduced)).map(|v| v.len()).ok(), Some(gens.len()));
        let _ = analyze(d, input, &DecomposeOptions::default());
    }
});
