//! Fixtures shared by the benchmarks.

use efl_core::{extremal_preferences, ExtremalInstance, HalfspaceSystem, Measure, UtilityPreferences};

pub fn extremal(r: usize) -> HalfspaceSystem {
    extremal_preferences(&ExtremalInstance::with_default_eps(r).expect("r >= 3"))
}

/// Players whose value density is `1 + k·x` for `k = 0, 1, ..`, sampled on `pieces` steps.
pub fn tilted_utilities(r: usize, pieces: usize) -> UtilityPreferences {
    let breakpoints: Vec<f64> = (0..=pieces).map(|i| i as f64 / pieces as f64).collect();
    let vals = (0..r)
        .map(|k| {
            let densities = (0..pieces)
                .map(|i| 1.0 + k as f64 * (i as f64 + 0.5) / pieces as f64)
                .collect();
            Measure::new(breakpoints.clone(), densities).expect("valid measure")
        })
        .collect();
    efl_core::utility_preferences(r, vals).expect("valid utilities")
}
