use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};
use crate::preferences::TileSet;

/// Assignment of tiles to `boxes` labelled boxes, 0-based (`assignment[tile] = box`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoxAllocation {
    assignment: Vec<usize>,
    boxes: usize,
}

/// A broken box-allocation constraint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum BoxViolation {
    EmptyBox { r#box: usize },
    TooManyTiles { r#box: usize, tiles: usize },
    SeveralTripleBoxes { count: usize },
}

impl BoxAllocation {
    /// Every box gets 1 to 3 tiles and at most one box gets 3.
    pub fn new(assignment: Vec<usize>, boxes: usize) -> Result<Self> {
        let alloc = Self::unchecked(assignment, boxes)?;
        let v = alloc.violations();
        if !v.is_empty() {
            return Err(EflError::InvalidBoxes(format!("{v:?}")));
        }
        Ok(alloc)
    }

    /// Only checks that box labels are in range; size constraints may be broken.
    pub fn unchecked(assignment: Vec<usize>, boxes: usize) -> Result<Self> {
        if boxes == 0 || assignment.len() > 64 {
            return Err(EflError::InvalidBoxes("need 1..=64 tiles and at least one box".into()));
        }
        if let Some(&b) = assignment.iter().find(|&&b| b >= boxes) {
            return Err(EflError::IndexOutOfRange { index: b + 1, bound: boxes });
        }
        Ok(Self { assignment, boxes })
    }

    pub fn tiles(&self) -> usize {
        self.assignment.len()
    }

    pub fn boxes(&self) -> usize {
        self.boxes
    }

    pub fn box_of(&self, tile: usize) -> usize {
        self.assignment[tile]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Tiles in each box.
    pub fn contents(&self) -> Vec<TileSet> {
        let mut c = vec![TileSet::empty(); self.boxes];
        for (t, &b) in self.assignment.iter().enumerate() {
            c[b].insert(t);
        }
        c
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.contents().iter().map(|s| s.len()).collect()
    }

    /// Box sizes in decreasing order.
    pub fn profile(&self) -> Vec<usize> {
        let mut s = self.sizes();
        s.sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    pub fn violations(&self) -> Vec<BoxViolation> {
        let sizes = self.sizes();
        let mut out = Vec::new();
        for (b, &n) in sizes.iter().enumerate() {
            if n == 0 {
                out.push(BoxViolation::EmptyBox { r#box: b });
            }
            if n > 3 {
                out.push(BoxViolation::TooManyTiles { r#box: b, tiles: n });
            }
        }
        let triples = sizes.iter().filter(|&&n| n == 3).count();
        if triples > 1 {
            out.push(BoxViolation::SeveralTripleBoxes { count: triples });
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// Moves the content of box `b` to box `perm[b]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        Self {
            assignment: self.assignment.iter().map(|&b| perm[b]).collect(),
            boxes: self.boxes,
        }
    }

    /// The tile partition with box labels forgotten, as sorted tile bitsets.
    pub fn partition_key(&self) -> Vec<u64> {
        let mut k: Vec<u64> = self.contents().iter().map(|s| s.bits()).collect();
        k.sort_unstable();
        k
    }
}

fn size_ok(counts: &[usize]) -> bool {
    counts.iter().all(|&c| c <= 3) && counts.iter().filter(|&&c| c == 3).count() <= 1
}

/// Valid allocations of `tiles` tiles to `boxes` boxes, one per tile partition.
///
/// Boxes are labelled in order of their smallest tile. Output is lexicographic
/// in the assignment vector.
pub fn canonical_allocations(tiles: usize, boxes: usize) -> Vec<BoxAllocation> {
    let mut out = Vec::new();
    let mut assignment = Vec::with_capacity(tiles);
    let mut counts = vec![0usize; boxes];
    canonical_fill(tiles, boxes, 0, &mut assignment, &mut counts, &mut out);
    out
}

fn canonical_fill(
    tiles: usize,
    boxes: usize,
    opened: usize,
    assignment: &mut Vec<usize>,
    counts: &mut Vec<usize>,
    out: &mut Vec<BoxAllocation>,
) {
    let t = assignment.len();
    if t == tiles {
        if opened == boxes && size_ok(counts) {
            out.push(BoxAllocation {
                assignment: assignment.clone(),
                boxes,
            });
        }
        return;
    }
    // not enough tiles left to open the remaining boxes
    if boxes - opened > tiles - t {
        return;
    }
    let limit = (opened + 1).min(boxes);
    for b in 0..limit {
        counts[b] += 1;
        if size_ok(counts) {
            assignment.push(b);
            canonical_fill(tiles, boxes, opened.max(b + 1), assignment, counts, out);
            assignment.pop();
        }
        counts[b] -= 1;
    }
}

/// Every valid labelled allocation, lexicographic in the assignment vector.
pub fn labelled_allocations(tiles: usize, boxes: usize) -> Vec<BoxAllocation> {
    let mut out = Vec::new();
    let mut assignment = vec![0usize; tiles];
    loop {
        let alloc = BoxAllocation {
            assignment: assignment.clone(),
            boxes,
        };
        if alloc.is_valid() {
            out.push(alloc);
        }
        // odometer, last digit fastest
        let mut i = tiles;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < boxes {
                break;
            }
            assignment[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn validation() {
        assert!(BoxAllocation::new(vec![0, 0, 1], 2).is_ok());
        assert!(BoxAllocation::new(vec![0, 0, 0, 0, 1], 2).is_err());
        assert!(BoxAllocation::new(vec![0, 0, 0, 1, 1, 1], 2).is_err());
        assert!(BoxAllocation::new(vec![0, 0, 0], 2).is_err());
        assert!(BoxAllocation::unchecked(vec![0, 2], 2).is_err());
        let bad = BoxAllocation::unchecked(vec![0, 0, 0, 0, 1], 2).unwrap();
        assert_eq!(
            bad.violations(),
            vec![BoxViolation::TooManyTiles { r#box: 0, tiles: 4 }]
        );
    }

    #[test]
    fn canonical_is_labelled_modulo_relabeling() {
        for (n, p) in [(3, 2), (4, 3), (5, 3), (7, 4)] {
            let canon = canonical_allocations(n, p);
            let labelled = labelled_allocations(n, p);
            let keys: BTreeSet<Vec<u64>> = labelled.iter().map(|a| a.partition_key()).collect();
            assert_eq!(canon.len(), keys.len(), "n={n} p={p}");
            // labels are distinct across the p boxes, so each partition appears p! times
            let fact: usize = (1..=p).product();
            assert_eq!(labelled.len(), canon.len() * fact);
            assert!(canon.iter().all(|a| a.is_valid()));
        }
    }

    #[test]
    fn p3_counts() {
        assert_eq!(labelled_allocations(5, 3).len(), 150);
        assert_eq!(canonical_allocations(5, 3).len(), 25);
        assert_eq!(canonical_allocations(3, 2).len(), 3);
        assert_eq!(canonical_allocations(4, 3).len(), 6);
    }

    #[test]
    fn relabel_keeps_partition() {
        let a = BoxAllocation::new(vec![0, 1, 1, 2, 0], 3).unwrap();
        let b = a.relabel(&[2, 0, 1]);
        assert_eq!(b.assignment(), &[2, 0, 0, 1, 2]);
        assert_eq!(a.partition_key(), b.partition_key());
        assert_eq!(a.profile(), vec![2, 2, 1]);
    }
}
