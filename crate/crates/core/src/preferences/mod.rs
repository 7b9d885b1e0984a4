//! Player preferences over the tiles of a cut.
//!
//! A preference model answers, for a cut and a player, which tiles that
//! player prefers. Every model also answers the relaxed question "which
//! tiles could this player prefer at some cut within `radius` (max-norm)
//! of this one"; the search uses that superset to refine safely.

mod extremal;
mod halfspace;
mod utility;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};
use crate::simplex::Cut;

pub use extremal::{extremal_preferences, ExtremalInstance};
pub use halfspace::{HalfspaceSystem, Region, HALFSPACE_SLACK};
pub use utility::{utility_preferences, UtilityPreferences, DEFAULT_INDIFFERENCE};

/// A set of 0-based tile (or box) indices, at most 64 of them.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileSet(u64);

impl TileSet {
    pub const fn empty() -> Self {
        Self(0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 64);
        if n == 64 {
            Self(u64::MAX)
        } else {
            Self((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        let mut s = Self::empty();
        for i in it {
            s.insert(i);
        }
        s
    }

    pub fn from_one_based(indices: &[usize]) -> Self {
        Self::from_indices(indices.iter().map(|i| i - 1))
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1 << i);
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn union(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits & (1 << i) != 0)
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }
}

impl fmt::Debug for TileSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// The matrix of preference sets, evaluated on demand.
pub trait PreferenceOracle: Send + Sync {
    /// Number of tiles `r`.
    fn arity(&self) -> usize;

    /// Number of players; differs from `arity` in the secretive and expelled settings.
    fn players(&self) -> usize;

    /// Declared hungriness (never prefers a zero-length tile). Checked by tests, not trusted.
    fn is_hungry(&self) -> bool;

    /// Tiles `player` prefers at some cut within max-norm distance `radius` of `cut`.
    ///
    /// May return a superset for `radius > 0`; must be exact for `radius == 0`.
    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet;
}

impl<T: PreferenceOracle + ?Sized> PreferenceOracle for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn players(&self) -> usize {
        (**self).players()
    }
    fn is_hungry(&self) -> bool {
        (**self).is_hungry()
    }
    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet {
        (**self).preferred_within(cut, player, radius)
    }
}

impl<T: PreferenceOracle + ?Sized> PreferenceOracle for Box<T> {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn players(&self) -> usize {
        (**self).players()
    }
    fn is_hungry(&self) -> bool {
        (**self).is_hungry()
    }
    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet {
        (**self).preferred_within(cut, player, radius)
    }
}

/// Checked exact evaluation; `player` is 0-based.
pub fn preferred_tiles<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut, player: usize) -> Result<TileSet> {
    if cut.arity() != oracle.arity() {
        return Err(EflError::ArityMismatch {
            expected: oracle.arity(),
            actual: cut.arity(),
        });
    }
    if player >= oracle.players() {
        return Err(EflError::IndexOutOfRange {
            index: player + 1,
            bound: oracle.players(),
        });
    }
    Ok(oracle.preferred_within(cut, player, 0.0))
}

/// Every player's preferred set at `cut`, relaxed by `radius`.
pub fn preference_profile<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut, radius: f64) -> Vec<TileSet> {
    (0..oracle.players())
        .map(|j| oracle.preferred_within(cut, j, radius))
        .collect()
}

/// Wraps an oracle and keeps only a subset of its players, in the given order.
pub struct PlayerSubset<O> {
    inner: O,
    keep: Vec<usize>,
}

impl<O: PreferenceOracle> PlayerSubset<O> {
    pub fn new(inner: O, keep: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = keep.iter().find(|&&j| j >= inner.players()) {
            return Err(EflError::IndexOutOfRange {
                index: bad + 1,
                bound: inner.players(),
            });
        }
        Ok(Self { inner, keep })
    }

    /// All players except `player`.
    pub fn without(inner: O, player: usize) -> Result<Self> {
        let keep = (0..inner.players()).filter(|&j| j != player).collect();
        Self::new(inner, keep)
    }
}

impl<O: PreferenceOracle> PreferenceOracle for PlayerSubset<O> {
    fn arity(&self) -> usize {
        self.inner.arity()
    }
    fn players(&self) -> usize {
        self.keep.len()
    }
    fn is_hungry(&self) -> bool {
        self.inner.is_hungry()
    }
    fn preferred_within(&self, cut: &Cut, player: usize, radius: f64) -> TileSet {
        self.inner.preferred_within(cut, self.keep[player], radius)
    }
}

/// A fixed preferred set per player, independent of the cut.
///
/// Not KKM in general; useful for exercising matching logic.
#[derive(Debug, Clone)]
pub struct ConstantPreferences {
    arity: usize,
    sets: Vec<TileSet>,
}

impl ConstantPreferences {
    pub fn new(arity: usize, sets: Vec<TileSet>) -> Result<Self> {
        if arity < 2 {
            return Err(EflError::ArityTooSmall(arity));
        }
        if sets.iter().any(|s| !s.is_subset(TileSet::full(arity))) {
            return Err(EflError::IndexOutOfRange {
                index: arity + 1,
                bound: arity,
            });
        }
        Ok(Self { arity, sets })
    }
}

impl PreferenceOracle for ConstantPreferences {
    fn arity(&self) -> usize {
        self.arity
    }
    fn players(&self) -> usize {
        self.sets.len()
    }
    fn is_hungry(&self) -> bool {
        false
    }
    fn preferred_within(&self, _cut: &Cut, player: usize, _radius: f64) -> TileSet {
        self.sets[player]
    }
}
