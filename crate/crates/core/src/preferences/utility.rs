use serde::{Deserialize, Serialize};

use super::{PreferenceOracle, TileSet};
use crate::error::{EflError, Result};
use crate::measure::Measure;
use crate::simplex::Cut;

/// Default value gap below which two tiles count as equally good.
pub const DEFAULT_INDIFFERENCE: f64 = 1e-9;

/// Additive utilities: each player prefers the tiles of (near-)maximal value.
///
/// With strictly positive densities no player ever prefers a zero-length tile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UtilityPreferences {
    arity: usize,
    valuations: Vec<Measure>,
    indifference: f64,
}

pub fn utility_preferences(arity: usize, valuations: Vec<Measure>) -> Result<UtilityPreferences> {
    UtilityPreferences::new(arity, valuations, DEFAULT_INDIFFERENCE)
}

impl UtilityPreferences {
    pub fn new(arity: usize, valuations: Vec<Measure>, indifference: f64) -> Result<Self> {
        if arity < 2 {
            return Err(EflError::ArityTooSmall(arity));
        }
        if valuations.is_empty() {
            return Err(EflError::InvalidMeasure("no players".into()));
        }
        if valuations.iter().any(|v| !(v.min_density() > 0.0)) {
            return Err(EflError::InvalidMeasure(
                "valuation densities must be strictly positive".into(),
            ));
        }
        // A zero-length tile is worth 0 and the best tile at least 1/r.
        if !(indifference >= 0.0 && indifference < 0.5 / arity as f64) {
            return Err(EflError::InvalidMeasure(format!("indifference {indifference} out of range")));
        }
        Ok(Self {
            arity,
            valuations,
            indifference,
        })
    }

    pub fn valuations(&self) -> &[Measure] {
        &self.valuations
    }

    pub fn tile_values(&self, cut: &Cut, player: usize) -> Vec<f64> {
        let v = &self.valuations[player];
        cut.tiles().iter().map(|t| v.mass(t.left, t.right)).collect()
    }
}

impl PreferenceOracle for UtilityPreferences {
    fn arity(&self) -> usize {
        self.arity
    }

    fn players(&self) -> usize {
        self.valuations.len()
    }

    fn is_hungry(&self) -> bool {
        true
    }

    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet {
        let values = self.tile_values(cut, player);
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // Within radius every cut point moves by at most (r-1)·radius, so each
        // tile value moves by at most 2(r-1)·radius·max_density.
        let drift = 2.0 * (self.arity - 1) as f64 * radius * self.valuations[player].max_density();
        let floor = best - self.indifference - 2.0 * drift;
        TileSet::from_indices(values.iter().enumerate().filter(|(_, &v)| v >= floor).map(|(i, _)| i))
    }
}
