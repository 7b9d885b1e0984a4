use serde::{Deserialize, Serialize};

use super::{PreferenceOracle, TileSet};
use crate::error::{EflError, Result};
use crate::simplex::Cut;

/// Absolute slack applied to every inequality so closed sets survive round-off.
pub const HALFSPACE_SLACK: f64 = 1e-12;

/// A closed region of the simplex built from half-spaces `coeffs · x >= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Halfspace { coeffs: Vec<f64>, rhs: f64 },
    All(Vec<Region>),
    Any(Vec<Region>),
    /// `base` with the interior of `remove` taken out (still closed).
    MinusInterior { base: Box<Region>, remove: Box<Region> },
}

impl Region {
    pub fn halfspace(coeffs: Vec<f64>, rhs: f64) -> Self {
        Region::Halfspace { coeffs, rhs }
    }

    pub fn minus_interior(base: Region, remove: Region) -> Self {
        Region::MinusInterior {
            base: Box::new(base),
            remove: Box::new(remove),
        }
    }

    /// True when some point within max-norm `radius` of `x` may lie in the region.
    ///
    /// Exact (up to [`HALFSPACE_SLACK`]) for `radius == 0`.
    pub fn contains(&self, x: &[f64], radius: f64) -> bool {
        match self {
            Region::Halfspace { coeffs, rhs } => {
                let (dot, norm) = dot_and_norm(coeffs, x);
                dot >= rhs - HALFSPACE_SLACK - radius * norm
            }
            Region::All(parts) => parts.iter().all(|p| p.contains(x, radius)),
            Region::Any(parts) => parts.iter().any(|p| p.contains(x, radius)),
            Region::MinusInterior { base, remove } => {
                base.contains(x, radius) && !remove.interior_contains(x, radius)
            }
        }
    }

    /// True only when the whole max-norm ball of `radius` around `x` lies in the interior.
    ///
    /// Interiors are evaluated with strict inequalities; for unions this is
    /// the union of the parts' interiors.
    pub fn interior_contains(&self, x: &[f64], radius: f64) -> bool {
        match self {
            Region::Halfspace { coeffs, rhs } => {
                let (dot, norm) = dot_and_norm(coeffs, x);
                dot > rhs + HALFSPACE_SLACK + radius * norm
            }
            Region::All(parts) => parts.iter().all(|p| p.interior_contains(x, radius)),
            Region::Any(parts) => parts.iter().any(|p| p.interior_contains(x, radius)),
            Region::MinusInterior { base, remove } => {
                base.interior_contains(x, radius) && !remove.contains(x, radius)
            }
        }
    }

    fn check_dim(&self, r: usize) -> Result<()> {
        match self {
            Region::Halfspace { coeffs, rhs } => {
                if coeffs.len() != r {
                    return Err(EflError::InvalidHalfspaces(format!(
                        "half-space has {} coefficients, arity is {r}",
                        coeffs.len()
                    )));
                }
                if !rhs.is_finite() || coeffs.iter().any(|c| !c.is_finite()) {
                    return Err(EflError::InvalidHalfspaces("non-finite coefficient".into()));
                }
                Ok(())
            }
            Region::All(parts) | Region::Any(parts) => parts.iter().try_for_each(|p| p.check_dim(r)),
            Region::MinusInterior { base, remove } => {
                base.check_dim(r)?;
                remove.check_dim(r)
            }
        }
    }

    /// Relabels coordinates: coordinate `k` of the result is coordinate `k - shift` of this one.
    pub fn rotate(&self, shift: usize) -> Region {
        match self {
            Region::Halfspace { coeffs, rhs } => {
                let r = coeffs.len();
                let mut c = vec![0.0; r];
                for (k, &a) in coeffs.iter().enumerate() {
                    c[(k + shift) % r] = a;
                }
                Region::Halfspace { coeffs: c, rhs: *rhs }
            }
            Region::All(parts) => Region::All(parts.iter().map(|p| p.rotate(shift)).collect()),
            Region::Any(parts) => Region::Any(parts.iter().map(|p| p.rotate(shift)).collect()),
            Region::MinusInterior { base, remove } => {
                Region::minus_interior(base.rotate(shift), remove.rotate(shift))
            }
        }
    }
}

fn dot_and_norm(coeffs: &[f64], x: &[f64]) -> (f64, f64) {
    coeffs
        .iter()
        .zip(x)
        .fold((0.0, 0.0), |(d, n), (a, xi)| (d + a * xi, n + a.abs()))
}

/// Polyhedral preferences: one [`Region`] per (player, tile).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfspaceSystem {
    arity: usize,
    /// `regions[player][tile]`
    regions: Vec<Vec<Region>>,
    #[serde(default)]
    hungry: bool,
}

impl HalfspaceSystem {
    pub fn new(arity: usize, regions: Vec<Vec<Region>>, hungry: bool) -> Result<Self> {
        if arity < 2 {
            return Err(EflError::ArityTooSmall(arity));
        }
        if regions.is_empty() {
            return Err(EflError::InvalidHalfspaces("no players".into()));
        }
        for row in &regions {
            if row.len() != arity {
                return Err(EflError::InvalidHalfspaces(format!(
                    "player has {} tile regions, arity is {arity}",
                    row.len()
                )));
            }
            row.iter().try_for_each(|reg| reg.check_dim(arity))?;
        }
        Ok(Self {
            arity,
            regions,
            hungry,
        })
    }

    /// Re-runs the structural checks, e.g. after deserialization.
    pub fn validated(self) -> Result<Self> {
        Self::new(self.arity, self.regions, self.hungry)
    }

    pub fn region(&self, player: usize, tile: usize) -> &Region {
        &self.regions[player][tile]
    }
}

impl PreferenceOracle for HalfspaceSystem {
    fn arity(&self) -> usize {
        self.arity
    }

    fn players(&self) -> usize {
        self.regions.len()
    }

    fn is_hungry(&self) -> bool {
        self.hungry
    }

    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet {
        let x = cut.lengths();
        TileSet::from_indices(
            self.regions[player]
                .iter()
                .enumerate()
                .filter(|(_, reg)| reg.contains(x, radius))
                .map(|(i, _)| i),
        )
    }
}
