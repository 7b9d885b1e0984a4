//! Preferences with exactly two envy-free divisions, both at the barycenter.
//!
//! Player 1's sets, with `S_k = x_1 + ... + x_k`:
//!
//! * tile `k` for `k <= r - 2`: `S_1 <= 1 - eps_1, ..., S_{k-1} <= 1 - eps_{k-1}, S_k >= 1 - eps_k`
//! * tile `r - 1`: `x_{r-1} >= x_r` minus the interior of the union of the above
//! * tile `r`: `x_r >= x_{r-1}` minus the same interior
//!
//! Player `j` is player 1 with every tile and coordinate index shifted by
//! `j - 1` modulo `r`.

use serde::{Deserialize, Serialize};

use super::halfspace::{HalfspaceSystem, Region};
use crate::error::{EflError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalInstance {
    r: usize,
    eps: Vec<f64>,
}

impl ExtremalInstance {
    /// Requires `r >= 3` and `1/r > eps_1 > ... > eps_{r-2} > 0`.
    pub fn new(r: usize, eps: Vec<f64>) -> Result<Self> {
        if r < 3 {
            return Err(EflError::InvalidEpsilons(format!("r must be at least 3, got {r}")));
        }
        if eps.len() != r - 2 {
            return Err(EflError::InvalidEpsilons(format!(
                "need {} epsilons for r = {r}, got {}",
                r - 2,
                eps.len()
            )));
        }
        let top = 1.0 / r as f64;
        if !(eps[0] < top) {
            return Err(EflError::InvalidEpsilons(format!("eps_1 = {} must be below 1/r = {top}", eps[0])));
        }
        if eps.windows(2).any(|w| !(w[0] > w[1])) {
            return Err(EflError::InvalidEpsilons("chain must be strictly decreasing".into()));
        }
        if !(eps[r - 3] > 0.0) {
            return Err(EflError::InvalidEpsilons("last epsilon must be positive".into()));
        }
        Ok(Self { r, eps })
    }

    /// `eps_k = 0.9 (1 - k/(r-1)) / r`.
    pub fn with_default_eps(r: usize) -> Result<Self> {
        let eps = (1..r.saturating_sub(1))
            .map(|k| 0.9 * (1.0 - k as f64 / (r - 1) as f64) / r as f64)
            .collect();
        Self::new(r, eps)
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }
}

/// Partial sum `x_1 + ... + x_k >= bound` as a half-space.
fn prefix_at_least(r: usize, k: usize, bound: f64) -> Region {
    let coeffs = (0..r).map(|i| if i < k { 1.0 } else { 0.0 }).collect();
    Region::halfspace(coeffs, bound)
}

fn prefix_at_most(r: usize, k: usize, bound: f64) -> Region {
    let coeffs = (0..r).map(|i| if i < k { -1.0 } else { 0.0 }).collect();
    Region::halfspace(coeffs, -bound)
}

fn first_player_regions(inst: &ExtremalInstance) -> Vec<Region> {
    let r = inst.r;
    let eps = &inst.eps;
    let mut regions = Vec::with_capacity(r);
    for k in 1..=r - 2 {
        let mut parts: Vec<Region> = (1..k).map(|i| prefix_at_most(r, i, 1.0 - eps[i - 1])).collect();
        parts.push(prefix_at_least(r, k, 1.0 - eps[k - 1]));
        regions.push(Region::All(parts));
    }
    // The union of the first r-2 sets is exactly {exists k: S_k >= 1 - eps_k};
    // written this way its interior is the union of the strict half-spaces.
    let head = Region::Any((1..=r - 2).map(|k| prefix_at_least(r, k, 1.0 - eps[k - 1])).collect());
    let mut last_two = vec![0.0; r];
    last_two[r - 2] = 1.0;
    last_two[r - 1] = -1.0;
    let flipped: Vec<f64> = last_two.iter().map(|c| -c).collect();
    regions.push(Region::minus_interior(Region::halfspace(last_two, 0.0), head.clone()));
    regions.push(Region::minus_interior(Region::halfspace(flipped, 0.0), head));
    regions
}

/// The cyclic extremal construction as a half-space system (hungry, `r` players).
pub fn extremal_preferences(inst: &ExtremalInstance) -> HalfspaceSystem {
    let r = inst.r;
    let first = first_player_regions(inst);
    let rows = (0..r)
        .map(|j| {
            let mut row = vec![Region::All(vec![]); r];
            for (i, reg) in first.iter().enumerate() {
                row[(i + j) % r] = reg.rotate(j);
            }
            row
        })
        .collect();
    HalfspaceSystem::new(r, rows, true).expect("extremal construction is well-formed")
}
