//! Barycentric lattice sweeps with coarse-to-fine refinement.
//!
//! Level 0 visits every point of the lattice `{n / q : n_i >= 0, sum n_i = q}`
//! in lexicographic order of `n`. Each later level multiplies the denominator
//! by [`REFINE_FACTOR`] and re-grids a box of radius `(1 + 1/5) / q_level`
//! around the seeds of the previous level, enough to reach the finer lattice
//! point nearest to any solution within `1 / q_level` of a seed.
//!
//! A predicate is evaluated twice per point: exactly (`radius = 0`) and
//! relaxed (`radius = 1 / q_level`, which bounds the max-norm distance from
//! any cut to its nearest lattice point). Because relaxed answers are
//! supersets of what holds anywhere within the radius, a solution that lies
//! between lattice points always makes its nearest lattice point a relaxed
//! hit.
//!
//! Seeds for the next level are
//! - exact hits with no other hit of the same level within `1.5 / q_level`, and
//! - relaxed-only points farther than `2 / q` (base spacing) from every exact hit so far,
//!   ranked by how small a radius still satisfies the predicate.
//!
//! So refinement looks for solutions the coarser lattices missed, and resolves
//! isolated hits, without tracing the boundary of regions already found.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};
use crate::simplex::Cut;

pub const REFINE_FACTOR: u64 = 5;

/// Seeds kept per refinement level; the rest are dropped and reported.
pub const MAX_SEEDS_PER_LEVEL: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    /// Lattice denominator `q`.
    pub grid: u64,
    /// Cut clustering radius (max-norm).
    pub dedup_tol: f64,
    pub refine_levels: u32,
}

impl SearchParams {
    /// `dedup_tol = 3 / q`, no refinement.
    pub fn with_grid(grid: u64) -> Self {
        Self {
            grid,
            dedup_tol: 3.0 / grid.max(1) as f64,
            refine_levels: 0,
        }
    }

    pub fn dedup_tol(mut self, tol: f64) -> Self {
        self.dedup_tol = tol;
        self
    }

    pub fn refine(mut self, levels: u32) -> Self {
        self.refine_levels = levels;
        self
    }

    pub fn validate(&self, r: usize) -> Result<()> {
        if self.grid < r as u64 {
            return Err(EflError::InvalidParams(format!("grid {} must be at least r = {r}", self.grid)));
        }
        if !(self.dedup_tol > 0.0) {
            return Err(EflError::InvalidParams("dedup_tol must be positive".into()));
        }
        let mut q = self.grid;
        for _ in 0..self.refine_levels {
            q = q
                .checked_mul(REFINE_FACTOR)
                .filter(|&q| q < 1 << 52)
                .ok_or_else(|| EflError::InvalidParams("too many refinement levels".into()))?;
        }
        Ok(())
    }
}

/// A lattice point `counts / denom` of the simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub denom: u64,
    pub counts: Vec<u64>,
}

impl LatticePoint {
    pub fn cut(&self) -> Cut {
        let d = self.denom as f64;
        Cut::new(self.counts.iter().map(|&c| c as f64 / d).collect()).expect("lattice point lies on the simplex")
    }
}

/// All compositions of `q` into `r` nonnegative parts, lexicographically ordered.
pub fn compositions(q: u64, r: usize) -> Vec<Vec<u64>> {
    let lo = vec![0; r];
    let hi = vec![q; r];
    boxed_compositions(q, &lo, &hi)
}

/// Compositions of `q` with `lo[i] <= n_i <= hi[i]`, lexicographically ordered.
fn boxed_compositions(q: u64, lo: &[u64], hi: &[u64]) -> Vec<Vec<u64>> {
    let r = lo.len();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(r);
    // suffix sums of bounds for pruning
    let mut lo_tail = vec![0u64; r + 1];
    let mut hi_tail = vec![0u64; r + 1];
    for i in (0..r).rev() {
        lo_tail[i] = lo_tail[i + 1] + lo[i];
        hi_tail[i] = hi_tail[i + 1].saturating_add(hi[i]);
    }
    fill(q, 0, lo, hi, &lo_tail, &hi_tail, &mut current, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    remaining: u64,
    i: usize,
    lo: &[u64],
    hi: &[u64],
    lo_tail: &[u64],
    hi_tail: &[u64],
    current: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    let r = lo.len();
    if i + 1 == r {
        if remaining >= lo[i] && remaining <= hi[i] {
            current.push(remaining);
            out.push(current.clone());
            current.pop();
        }
        return;
    }
    let start = lo[i].max(remaining.saturating_sub(hi_tail[i + 1]));
    let end = hi[i].min(remaining.saturating_sub(lo_tail[i + 1]));
    if remaining < lo_tail[i + 1] {
        return;
    }
    for n in start..=end {
        current.push(n);
        fill(remaining - n, i + 1, lo, hi, lo_tail, hi_tail, current, out);
        current.pop();
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepStats {
    pub evaluations: usize,
    pub levels: u32,
    pub seeds_dropped: usize,
    pub finest_denominator: u64,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Exact hits, level by level, each level in lexicographic order.
    pub hits: Vec<LatticePoint>,
    pub stats: SweepStats,
}

impl SweepOutcome {
    pub fn hit_cuts(&self) -> Vec<Cut> {
        self.hits.iter().map(LatticePoint::cut).collect()
    }
}

struct Evaluated {
    point: LatticePoint,
    exact: bool,
    relaxed: bool,
    /// For relaxed-only points: how many halvings of the radius the predicate survives.
    tightness: u32,
}

/// Halvings tried when ranking relaxed-only seeds.
const TIGHTNESS_STEPS: u32 = 6;

fn evaluate<F>(points: Vec<LatticePoint>, relax: bool, predicate: &F) -> Vec<Evaluated>
where
    F: Fn(&Cut, f64) -> bool + Sync,
{
    points
        .into_par_iter()
        .map(|point| {
            let cut = point.cut();
            let exact = predicate(&cut, 0.0);
            let radius = 1.0 / point.denom as f64;
            let relaxed = exact || (relax && predicate(&cut, radius));
            let mut tightness = 0;
            if relaxed && !exact {
                while tightness < TIGHTNESS_STEPS && predicate(&cut, radius / f64::from(2u32 << tightness)) {
                    tightness += 1;
                }
            }
            Evaluated {
                point,
                exact,
                relaxed,
                tightness,
            }
        })
        .collect()
}

fn max_dist(a: &LatticePoint, b: &LatticePoint) -> f64 {
    let (da, db) = (a.denom as f64, b.denom as f64);
    a.counts
        .iter()
        .zip(&b.counts)
        .map(|(&x, &y)| (x as f64 / da - y as f64 / db).abs())
        .fold(0.0, f64::max)
}

/// Sweeps the lattice of `params.grid` for points where `predicate(cut, 0.0)` holds.
///
/// `predicate(cut, radius)` must be monotone in `radius` and, for
/// `radius > 0`, hold whenever the exact predicate holds at some cut within
/// max-norm `radius`. The output is independent of the rayon pool size.
pub fn sweep<F>(r: usize, params: &SearchParams, predicate: F) -> Result<SweepOutcome>
where
    F: Fn(&Cut, f64) -> bool + Sync,
{
    params.validate(r)?;
    let mut stats = SweepStats::default();
    let mut denom = params.grid;
    let mut points: Vec<LatticePoint> = compositions(denom, r)
        .into_iter()
        .map(|counts| LatticePoint { denom, counts })
        .collect();
    let mut hits: Vec<LatticePoint> = Vec::new();

    for level in 0..=params.refine_levels {
        let relax = level < params.refine_levels;
        stats.evaluations += points.len();
        stats.levels = level + 1;
        stats.finest_denominator = denom;
        let evaluated = evaluate(points, relax, &predicate);
        let level_hits: Vec<LatticePoint> = evaluated.iter().filter(|e| e.exact).map(|e| e.point.clone()).collect();
        hits.extend(level_hits.iter().cloned());
        if !relax {
            break;
        }

        // relaxed points next to a known solution only trace the boundary of its region
        let near = 2.0 / params.grid as f64;
        let isolated = 1.5 / denom as f64;
        let all_hits = CellIndex::new(&hits, near);
        let same_level = CellIndex::new(&level_hits, isolated);
        let mut lonely: Vec<&LatticePoint> = Vec::new();
        let mut candidates: Vec<(u32, &LatticePoint)> = Vec::new();
        for e in &evaluated {
            if e.exact {
                if !same_level.any_within(&level_hits, &e.point, isolated, true) {
                    lonely.push(&e.point);
                }
            } else if e.relaxed && !all_hits.any_within(&hits, &e.point, near, false) {
                candidates.push((e.tightness, &e.point));
            }
        }
        // tightest first; the sort is stable so ties keep lexicographic order
        candidates.sort_by_key(|c| std::cmp::Reverse(c.0));
        let mut seeds = lonely;
        seeds.extend(candidates.into_iter().map(|(_, p)| p));
        if seeds.len() > MAX_SEEDS_PER_LEVEL {
            stats.seeds_dropped += seeds.len() - MAX_SEEDS_PER_LEVEL;
            seeds.truncate(MAX_SEEDS_PER_LEVEL);
        }
        if seeds.is_empty() {
            break;
        }

        let next = denom * REFINE_FACTOR;
        let reach = REFINE_FACTOR + 1;
        let mut box_points: BTreeSet<Vec<u64>> = BTreeSet::new();
        for s in seeds {
            let center: Vec<u64> = s.counts.iter().map(|&c| c * REFINE_FACTOR).collect();
            let lo: Vec<u64> = center.iter().map(|&c| c.saturating_sub(reach)).collect();
            let hi: Vec<u64> = center.iter().map(|&c| (c + reach).min(next)).collect();
            box_points.extend(boxed_compositions(next, &lo, &hi));
        }
        denom = next;
        points = box_points
            .into_iter()
            .map(|counts| LatticePoint { denom, counts })
            .collect();
    }
    Ok(SweepOutcome { hits, stats })
}

/// Buckets points into cubes of side `cell` on their first `r - 1` coordinates.
struct CellIndex {
    cell: f64,
    buckets: HashMap<Vec<i64>, Vec<usize>>,
}

impl CellIndex {
    fn new(points: &[LatticePoint], cell: f64) -> Self {
        let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(p, cell)).or_default().push(i);
        }
        Self { cell, buckets }
    }

    fn key(p: &LatticePoint, cell: f64) -> Vec<i64> {
        let d = p.denom as f64;
        p.counts[..p.counts.len() - 1]
            .iter()
            .map(|&c| (c as f64 / d / cell).floor() as i64)
            .collect()
    }

    /// Whether some indexed point other than `p` itself lies within `tol <= cell` of `p`.
    fn any_within(&self, points: &[LatticePoint], p: &LatticePoint, tol: f64, skip_self: bool) -> bool {
        let base = Self::key(p, self.cell);
        let dims = base.len();
        let mut offset = vec![-1i64; dims];
        loop {
            let key: Vec<i64> = base.iter().zip(&offset).map(|(b, o)| b + o).collect();
            if let Some(bucket) = self.buckets.get(&key) {
                for &i in bucket {
                    let h = &points[i];
                    if !(skip_self && h == p) && max_dist(h, p) <= tol {
                        return true;
                    }
                }
            }
            let mut k = 0;
            loop {
                if k == dims {
                    return false;
                }
                offset[k] += 1;
                if offset[k] <= 1 {
                    break;
                }
                offset[k] = -1;
                k += 1;
            }
        }
    }
}

/// Greedy leader clustering: each cut joins the first cluster whose leader is within `tol`.
pub fn cluster(cuts: &[Cut], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, c) in cuts.iter().enumerate() {
        let home = clusters
            .iter_mut()
            .find(|members| c.max_distance(&cuts[members[0]]).is_ok_and(|d| d <= tol));
        match home {
            Some(members) => members.push(i),
            None => clusters.push(vec![i]),
        }
    }
    clusters
}

/// Coordinate-wise mean of the members, re-projected onto the simplex.
pub fn mean_cut(cuts: &[&Cut]) -> Cut {
    let r = cuts[0].arity();
    let mut acc = vec![0.0; r];
    for c in cuts {
        for (a, x) in acc.iter_mut().zip(c.lengths()) {
            *a += x;
        }
    }
    let n = cuts.len() as f64;
    Cut::project(acc.into_iter().map(|a| a / n).collect()).expect("mean of simplex points")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn composition_counts() {
        for (q, r) in [(10u64, 2usize), (60, 3), (20, 4), (15, 5)] {
            let c = compositions(q, r);
            assert_eq!(c.len() as u64, binom(q + r as u64 - 1, r as u64 - 1));
            assert!(c.windows(2).all(|w| w[0] < w[1]));
            assert!(c.iter().all(|v| v.iter().sum::<u64>() == q));
        }
    }

    #[test]
    fn boxed_compositions_respect_bounds() {
        let got = boxed_compositions(10, &[2, 0, 3], &[4, 10, 5]);
        assert!(!got.is_empty());
        for v in &got {
            assert!(v[0] >= 2 && v[0] <= 4 && v[2] >= 3 && v[2] <= 5);
            assert_eq!(v.iter().sum::<u64>(), 10);
        }
        let brute = compositions(10, 3)
            .into_iter()
            .filter(|v| v[0] >= 2 && v[0] <= 4 && v[2] >= 3 && v[2] <= 5)
            .count();
        assert_eq!(got.len(), brute);
    }

    #[test]
    fn params_validation() {
        assert!(SearchParams::with_grid(2).validate(3).is_err());
        assert!(SearchParams::with_grid(10).dedup_tol(0.0).validate(3).is_err());
        assert!(SearchParams::with_grid(10).refine(40).validate(3).is_err());
        assert!(SearchParams::with_grid(10).refine(3).validate(3).is_ok());
    }

    #[test]
    fn sweep_finds_on_grid_point() {
        let target = [0.3, 0.7];
        let out = sweep(2, &SearchParams::with_grid(10), |c, rad| {
            (c.length(0) - target[0]).abs() <= rad + 1e-12
        })
        .unwrap();
        assert_eq!(out.hits.len(), 1);
        assert_eq!(out.hits[0].counts, vec![3, 7]);
    }

    #[test]
    fn refinement_reaches_off_grid_point() {
        let target = 0.123_456_789;
        let pred = |c: &Cut, rad: f64| (c.length(0) - target).abs() <= rad + 1e-6;
        let coarse = sweep(2, &SearchParams::with_grid(10), pred).unwrap();
        assert!(coarse.hits.is_empty());
        let fine = sweep(2, &SearchParams::with_grid(10).refine(8), pred).unwrap();
        assert!(!fine.hits.is_empty());
        for h in fine.hits {
            assert!((h.cut().length(0) - target).abs() <= 1e-6 + 1e-15);
        }
    }

    #[test]
    fn clustering_is_greedy() {
        let cuts: Vec<Cut> = [0.1, 0.12, 0.5, 0.13, 0.52]
            .iter()
            .map(|&x| Cut::new(vec![x, 1.0 - x]).unwrap())
            .collect();
        assert_eq!(cluster(&cuts, 0.05), vec![vec![0, 1, 3], vec![2, 4]]);
        let m = mean_cut(&[&cuts[0], &cuts[1]]);
        assert!((m.length(0) - 0.11).abs() < 1e-12);
    }
}
