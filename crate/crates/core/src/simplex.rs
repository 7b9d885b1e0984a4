//! Cuts of the unit interval, their tiles, and divisions.
//!
//! A cut of `[0, 1]` into `r` consecutive tiles is stored by its tile lengths,
//! i.e. as a point of the standard simplex. Indices are 0-based in memory;
//! anything user-facing goes through the `one_based` helpers.

use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};

/// Absolute tolerance on the coordinate sum of a cut.
pub const SIMPLEX_TOL: f64 = 1e-12;

/// Default clustering radius for cut equality.
pub const DEFAULT_CUT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cut {
    lengths: Vec<f64>,
}

impl Cut {
    pub fn new(lengths: Vec<f64>) -> Result<Self> {
        if lengths.len() < 2 {
            return Err(EflError::ArityTooSmall(lengths.len()));
        }
        let sum: f64 = lengths.iter().sum();
        let min = lengths.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min >= 0.0) || !((sum - 1.0).abs() <= SIMPLEX_TOL) {
            return Err(EflError::NotOnSimplex { sum, min });
        }
        Ok(Self { lengths })
    }

    pub fn barycenter(r: usize) -> Result<Self> {
        if r < 2 {
            return Err(EflError::ArityTooSmall(r));
        }
        Ok(Self {
            lengths: vec![1.0 / r as f64; r],
        })
    }

    /// Builds a cut from its `r - 1` interior cut points.
    pub fn from_points(points: &[f64]) -> Result<Self> {
        if points.is_empty() {
            return Err(EflError::ArityTooSmall(1));
        }
        let in_range = points.iter().all(|p| (0.0..=1.0).contains(p));
        let sorted = points.windows(2).all(|w| w[0] <= w[1]);
        if !in_range || !sorted {
            return Err(EflError::BadCutPoints);
        }
        let mut lengths = Vec::with_capacity(points.len() + 1);
        let mut prev = 0.0;
        for &p in points {
            lengths.push(p - prev);
            prev = p;
        }
        lengths.push(1.0 - prev);
        Self::new(lengths)
    }

    /// Clamps negative coordinates to zero and rescales onto the simplex.
    pub fn project(mut coords: Vec<f64>) -> Result<Self> {
        for c in coords.iter_mut() {
            if !(*c > 0.0) {
                *c = 0.0;
            }
        }
        let sum: f64 = coords.iter().sum();
        if !(sum > 0.0) {
            return Err(EflError::NotOnSimplex { sum, min: 0.0 });
        }
        coords.iter_mut().for_each(|c| *c /= sum);
        Self::new(coords)
    }

    pub fn arity(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn length(&self, tile: usize) -> f64 {
        self.lengths[tile]
    }

    /// Interior cut points, `r - 1` of them.
    pub fn points(&self) -> Vec<f64> {
        let mut acc = 0.0;
        self.lengths[..self.arity() - 1]
            .iter()
            .map(|l| {
                acc += l;
                acc.min(1.0)
            })
            .collect()
    }

    pub fn tiles(&self) -> Vec<Tile> {
        let mut left = 0.0;
        let r = self.arity();
        self.lengths
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                let right = if i + 1 == r { 1.0 } else { (left + len).min(1.0) };
                let tile = Tile {
                    index: i + 1,
                    left,
                    right,
                };
                left = right;
                tile
            })
            .collect()
    }

    /// Cyclic shift: the result's coordinate `i + shift` equals this cut's coordinate `i`.
    pub fn rotate(&self, shift: usize) -> Cut {
        let r = self.arity();
        let mut lengths = vec![0.0; r];
        for (i, &x) in self.lengths.iter().enumerate() {
            lengths[(i + shift) % r] = x;
        }
        Cut { lengths }
    }

    pub fn max_distance(&self, other: &Cut) -> Result<f64> {
        if self.arity() != other.arity() {
            return Err(EflError::ArityMismatch {
                expected: self.arity(),
                actual: other.arity(),
            });
        }
        Ok(self
            .lengths
            .iter()
            .zip(&other.lengths)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

/// A closed subinterval produced by a cut. `index` is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub index: usize,
    pub left: f64,
    pub right: f64,
}

impl Tile {
    pub fn is_degenerate(&self) -> bool {
        self.right == self.left
    }

    pub fn len(&self) -> f64 {
        self.right - self.left
    }
}

/// Bijection from players to tiles, 0-based in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Allocation {
    tile_of: Vec<usize>,
}

impl Allocation {
    pub fn new(tile_of: Vec<usize>) -> Result<Self> {
        let r = tile_of.len();
        let mut seen = vec![false; r];
        for &t in &tile_of {
            if t >= r || seen[t] {
                return Err(EflError::NotBijection(r));
            }
            seen[t] = true;
        }
        Ok(Self { tile_of })
    }

    pub fn from_one_based(tile_of: &[usize]) -> Result<Self> {
        if tile_of.contains(&0) {
            return Err(EflError::NotBijection(tile_of.len()));
        }
        Self::new(tile_of.iter().map(|t| t - 1).collect())
    }

    pub fn arity(&self) -> usize {
        self.tile_of.len()
    }

    pub fn tile_of(&self, player: usize) -> usize {
        self.tile_of[player]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.tile_of
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.tile_of.iter().map(|t| t + 1).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.tile_of.iter().copied().enumerate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Division {
    pub cut: Cut,
    pub allocation: Allocation,
}

impl Division {
    pub fn new(cut: Cut, allocation: Allocation) -> Result<Self> {
        if cut.arity() != allocation.arity() {
            return Err(EflError::ArityMismatch {
                expected: cut.arity(),
                actual: allocation.arity(),
            });
        }
        Ok(Self { cut, allocation })
    }
}

pub fn cuts_equal(a: &Cut, b: &Cut, tol: f64) -> Result<bool> {
    Ok(a.max_distance(b)? <= tol)
}

pub fn divisions_equal(a: &Division, b: &Division, tol: f64) -> Result<bool> {
    if a.allocation.arity() != b.allocation.arity() {
        return Err(EflError::ArityMismatch {
            expected: a.allocation.arity(),
            actual: b.allocation.arity(),
        });
    }
    Ok(cuts_equal(&a.cut, &b.cut, tol)? && a.allocation == b.allocation)
}
