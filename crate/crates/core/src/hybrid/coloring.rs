use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use super::boxes::BoxAllocation;
use crate::error::{EflError, Result};
use crate::preferences::TileSet;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn require_prime(p: usize) -> Result<()> {
    if is_prime(p as u64) {
        Ok(())
    } else {
        Err(EflError::NotPrime(p as u64))
    }
}

/// Split of the `2p-1` tiles into `p-1` red, `p-1` blue and one white tile (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub red: TileSet,
    pub blue: TileSet,
    pub white: usize,
}

impl Coloring {
    pub fn new(p: usize, red: TileSet, blue: TileSet, white: usize) -> Result<Self> {
        let n = 2 * p - 1;
        let all = red.union(blue).union(TileSet::from_indices([white]));
        let ok = p >= 2
            && red.len() == p - 1
            && blue.len() == p - 1
            && red.bits() & blue.bits() == 0
            && !red.contains(white)
            && !blue.contains(white)
            && all == TileSet::full(n);
        if !ok {
            return Err(EflError::InvalidParams(format!(
                "not a coloring of {n} tiles: red {red:?}, blue {blue:?}, white {white}"
            )));
        }
        Ok(Self { red, blue, white })
    }

    /// 0 red, 1 blue, 2 white.
    pub fn color_of(&self, tile: usize) -> u8 {
        if self.red.contains(tile) {
            0
        } else if self.blue.contains(tile) {
            1
        } else {
            2
        }
    }

    /// No box holds two tiles of the same color.
    pub fn is_rainbow_for(&self, boxes: &BoxAllocation) -> bool {
        boxes.contents().iter().all(|content| {
            let mut seen = [false; 3];
            content.iter().all(|t| {
                let c = self.color_of(t) as usize;
                !std::mem::replace(&mut seen[c], true)
            })
        })
    }
}

/// All colorings of `2p-1` tiles, red set lexicographic first, then white.
pub fn enumerate_colorings(p: usize) -> Vec<Coloring> {
    if p < 2 {
        return Vec::new();
    }
    let n = 2 * p - 1;
    let mut out = Vec::new();
    for red in (0..n).combinations(p - 1) {
        let red = TileSet::from_indices(red);
        for white in (0..n).filter(|&t| !red.contains(t)) {
            let mut blue = TileSet::full(n);
            for t in red.iter() {
                blue.remove(t);
            }
            blue.remove(white);
            out.push(Coloring { red, blue, white });
        }
    }
    out
}

/// Exhaustive count of colorings that are rainbow on every box.
/// `boxes` must hold `2p-1` tiles in `p` boxes.
pub fn coloring_count(boxes: &BoxAllocation) -> Result<u64> {
    let p = boxes.boxes();
    if p < 2 || boxes.tiles() != 2 * p - 1 {
        return Err(EflError::InvalidBoxes(format!(
            "{} tiles in {p} boxes, expected 2p-1",
            boxes.tiles()
        )));
    }
    Ok(enumerate_colorings(p)
        .iter()
        .filter(|c| c.is_rainbow_for(boxes))
        .count() as u64)
}

/// Closed form by box-size profile: `3·2^(p-1)` with a 3-tile box, else `p·2^(p-1)`.
pub fn closed_form_coloring_count(profile: &[usize]) -> u64 {
    let p = profile.len() as u64;
    let pow = 1u64 << (p.saturating_sub(1));
    if profile.contains(&3) {
        3 * pow
    } else {
        p * pow
    }
}

fn binom(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `binom(2p-1, p-1) · 2^(2-p)`, exact.
pub fn lower_bound(p: usize) -> Result<BigRational> {
    require_prime(p)?;
    let b = binom(2 * p as u64 - 1, p as u64 - 1);
    let two = BigRational::from_integer(BigInt::from(2));
    let scale: BigRational = Pow::pow(two, 2 - p as i64);
    Ok(BigRational::from_integer(b) * scale)
}

/// `binom(2p-1, p-1) · p`: ways to pick the red tiles and the white one.
pub fn total_colorings(p: usize) -> Result<BigInt> {
    require_prime(p)?;
    Ok(binom(2 * p as u64 - 1, p as u64 - 1) * BigInt::from(p))
}
