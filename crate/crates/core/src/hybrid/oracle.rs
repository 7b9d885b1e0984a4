use serde::{Deserialize, Serialize};

use super::boxes::BoxAllocation;
use crate::error::{EflError, Result};
use crate::measure::Measure;
use crate::preferences::TileSet;
use crate::simplex::Cut;

/// Preferences over boxes of tiles. Implementations must depend only on box contents.
pub trait BoxPreferenceOracle: Send + Sync {
    fn players(&self) -> usize;

    /// Boxes `player` prefers at some cut within max-norm `radius` of `cut`
    /// (superset allowed for `radius > 0`, exact for `radius == 0`).
    fn preferred_boxes(&self, cut: &Cut, boxes: &BoxAllocation, player: usize, radius: f64) -> TileSet;
}

impl<T: BoxPreferenceOracle + ?Sized> BoxPreferenceOracle for Box<T> {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn preferred_boxes(&self, cut: &Cut, boxes: &BoxAllocation, player: usize, radius: f64) -> TileSet {
        (**self).preferred_boxes(cut, boxes, player, radius)
    }
}

/// Sum of `mu` over the tiles in each box.
pub fn box_masses(cut: &Cut, boxes: &BoxAllocation, mu: &Measure) -> Vec<f64> {
    let mut masses = vec![0.0; boxes.boxes()];
    for tile in cut.tiles() {
        masses[boxes.box_of(tile.index - 1)] += mu.mass(tile.left, tile.right);
    }
    masses
}

/// Upper bound on how far any box mass moves when the cut moves by `radius` (max-norm).
pub fn box_mass_drift(tiles: usize, mu: &Measure, radius: f64) -> f64 {
    // each cut point moves by at most (tiles-1)·radius and a box has at most 3 tiles
    6.0 * (tiles.saturating_sub(1)) as f64 * radius * mu.max_density()
}

/// Each player prefers the boxes of (near-)maximal mass under their own measure.
///
/// Zero-length tiles carry no mass, so they never change a preference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MassPreferences {
    measures: Vec<Measure>,
    indifference: f64,
}

impl MassPreferences {
    pub fn new(measures: Vec<Measure>, indifference: f64) -> Result<Self> {
        if measures.is_empty() {
            return Err(EflError::InvalidMeasure("no players".into()));
        }
        if !(indifference >= 0.0 && indifference.is_finite()) {
            return Err(EflError::InvalidMeasure(format!("indifference {indifference} out of range")));
        }
        Ok(Self { measures, indifference })
    }

    /// `players` copies of the same measure: everyone wants the heaviest box.
    pub fn shared(players: usize, mu: Measure, indifference: f64) -> Result<Self> {
        Self::new(vec![mu; players], indifference)
    }

    /// Player `i` maximizes the length of `[a_i, b_i]` inside their box.
    pub fn intervals(intervals: &[(f64, f64)], indifference: f64) -> Result<Self> {
        let measures = intervals
            .iter()
            .map(|&(a, b)| Measure::uniform_on(a, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(measures, indifference)
    }

    pub fn measures(&self) -> &[Measure] {
        &self.measures
    }
}

impl BoxPreferenceOracle for MassPreferences {
    fn players(&self) -> usize {
        self.measures.len()
    }

    fn preferred_boxes(&self, cut: &Cut, boxes: &BoxAllocation, player: usize, radius: f64) -> TileSet {
        let mu = &self.measures[player];
        let values = box_masses(cut, boxes, mu);
        let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let floor = best - self.indifference - 2.0 * box_mass_drift(cut.arity(), mu, radius);
        TileSet::from_indices(values.iter().enumerate().filter(|(_, &v)| v >= floor).map(|(b, _)| b))
    }
}
