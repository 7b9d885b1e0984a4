use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::boxes::{canonical_allocations, BoxAllocation, BoxViolation};
use super::coloring::is_prime;
use super::oracle::{box_mass_drift, box_masses, BoxPreferenceOracle};
use crate::error::{EflError, Result};
use crate::grid::{self, SearchParams, SweepStats};
use crate::matching::{enumerate_perfect, saturating_matching};
use crate::measure::Measure;
use crate::preferences::TileSet;
use crate::simplex::Cut;

/// `p` players, a box-preference oracle and the measure to be split evenly.
pub struct HybridInstance<O> {
    p: usize,
    oracle: O,
    mu: Measure,
    equi_tol: f64,
}

impl<O: BoxPreferenceOracle> HybridInstance<O> {
    /// Requires `p` prime.
    pub fn new(p: usize, oracle: O, mu: Measure, equi_tol: f64) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(EflError::NotPrime(p as u64));
        }
        Self::any_p(p, oracle, mu, equi_tol)
    }

    /// Any `p >= 2`; the counting bound only applies to primes.
    pub fn any_p(p: usize, oracle: O, mu: Measure, equi_tol: f64) -> Result<Self> {
        if p < 2 {
            return Err(EflError::ArityTooSmall(p));
        }
        if oracle.players() != p {
            return Err(EflError::ArityMismatch {
                expected: p,
                actual: oracle.players(),
            });
        }
        if !(equi_tol > 0.0) {
            return Err(EflError::InvalidParams("equi_tol must be positive".into()));
        }
        Ok(Self { p, oracle, mu, equi_tol })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn mu(&self) -> &Measure {
        &self.mu
    }

    pub fn equi_tol(&self) -> f64 {
        self.equi_tol
    }
}

/// `1 / (10 p q)`.
pub fn default_equi_tol(p: usize, grid: u64) -> f64 {
    1.0 / (10.0 * p as f64 * grid as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FavourableDivision {
    pub cut: Cut,
    pub boxes: BoxAllocation,
    /// `matching[player] = box`, 0-based.
    pub matching: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FavourableViolation {
    Shape { detail: String },
    NotEnvyFree { player: usize, r#box: usize },
    NotEquipartitioned { r#box: usize, mass: f64 },
    Boxes { violation: BoxViolation },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FavourableCheck {
    pub favourable: bool,
    pub violations: Vec<FavourableViolation>,
}

pub fn measure_of_box(cut: &Cut, boxes: &BoxAllocation, r#box: usize, mu: &Measure) -> Result<f64> {
    if r#box >= boxes.boxes() {
        return Err(EflError::IndexOutOfRange {
            index: r#box + 1,
            bound: boxes.boxes(),
        });
    }
    if cut.arity() != boxes.tiles() {
        return Err(EflError::ArityMismatch {
            expected: boxes.tiles(),
            actual: cut.arity(),
        });
    }
    Ok(box_masses(cut, boxes, mu)[r#box])
}

pub fn is_favourable<O: BoxPreferenceOracle>(div: &FavourableDivision, inst: &HybridInstance<O>) -> FavourableCheck {
    let mut violations = Vec::new();
    let p = inst.p;
    let shape_ok = div.cut.arity() == div.boxes.tiles() && div.boxes.boxes() == p && div.matching.len() == p;
    if !shape_ok {
        violations.push(FavourableViolation::Shape {
            detail: format!(
                "{} tiles, {} box labels, {} boxes, {} matched players for p = {p}",
                div.cut.arity(),
                div.boxes.tiles(),
                div.boxes.boxes(),
                div.matching.len()
            ),
        });
        return FavourableCheck {
            favourable: false,
            violations,
        };
    }
    let distinct = TileSet::from_indices(div.matching.iter().copied());
    if distinct.len() != p || div.matching.iter().any(|&b| b >= p) {
        violations.push(FavourableViolation::Shape {
            detail: "matching is not a bijection onto the boxes".into(),
        });
    }
    for (player, &b) in div.matching.iter().enumerate() {
        if b < p && !inst.oracle.preferred_boxes(&div.cut, &div.boxes, player, 0.0).contains(b) {
            violations.push(FavourableViolation::NotEnvyFree { player, r#box: b });
        }
    }
    let target = 1.0 / p as f64;
    for (b, mass) in box_masses(&div.cut, &div.boxes, &inst.mu).into_iter().enumerate() {
        if (mass - target).abs() > inst.equi_tol {
            violations.push(FavourableViolation::NotEquipartitioned { r#box: b, mass });
        }
    }
    violations.extend(
        div.boxes
            .violations()
            .into_iter()
            .map(|violation| FavourableViolation::Boxes { violation }),
    );
    FavourableCheck {
        favourable: violations.is_empty(),
        violations,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FavourableSearch {
    pub tiles: usize,
    pub divisions: Vec<FavourableDivision>,
    /// Lattice cuts that carried at least one favourable division.
    pub hit_cuts: usize,
    pub stats: SweepStats,
}

fn equipartitioned(masses: &[f64], tol: f64) -> bool {
    let target = 1.0 / masses.len() as f64;
    masses.iter().all(|m| (m - target).abs() <= tol)
}

fn box_profile<O: BoxPreferenceOracle>(inst: &HybridInstance<O>, cut: &Cut, boxes: &BoxAllocation, radius: f64) -> Vec<TileSet> {
    (0..inst.p)
        .map(|j| inst.oracle.preferred_boxes(cut, boxes, j, radius))
        .collect()
}

fn favourable_at<O: BoxPreferenceOracle>(inst: &HybridInstance<O>, allocs: &[BoxAllocation], cut: &Cut, radius: f64) -> bool {
    let tol = inst.equi_tol + box_mass_drift(cut.arity(), &inst.mu, radius);
    allocs.iter().any(|boxes| {
        equipartitioned(&box_masses(cut, boxes, &inst.mu), tol)
            && saturating_matching(&box_profile(inst, cut, boxes, radius), inst.p).is_some()
    })
}

/// Every exactly favourable `(boxes, matching)` at a cut.
fn favourable_triples<O: BoxPreferenceOracle>(
    inst: &HybridInstance<O>,
    allocs: &[BoxAllocation],
    cut: &Cut,
) -> Vec<(BoxAllocation, Vec<usize>)> {
    let mut out = Vec::new();
    for boxes in allocs {
        if !equipartitioned(&box_masses(cut, boxes, &inst.mu), inst.equi_tol) {
            continue;
        }
        for m in enumerate_perfect(&box_profile(inst, cut, boxes, 0.0), inst.p) {
            out.push((boxes.clone(), m));
        }
    }
    out
}

/// Label-free identity of a division up to its cut: the tile partition and
/// which box content each player receives.
type ContentKey = (Vec<u64>, Vec<u64>);

fn content_key(boxes: &BoxAllocation, matching: &[usize]) -> ContentKey {
    let contents = boxes.contents();
    (boxes.partition_key(), matching.iter().map(|&b| contents[b].bits()).collect())
}

/// Sweeps cuts with `tiles` tiles and collects favourable divisions,
/// deduplicated by (cut cluster, tile partition, player-to-content matching).
pub fn search_favourable<O: BoxPreferenceOracle>(
    inst: &HybridInstance<O>,
    params: &SearchParams,
    tiles: usize,
) -> Result<FavourableSearch> {
    let p = inst.p;
    if tiles != 2 * p - 1 && tiles != 2 * p - 2 {
        return Err(EflError::InvalidParams(format!(
            "tiles must be {} or {}, got {tiles}",
            2 * p - 2,
            2 * p - 1
        )));
    }
    let allocs = canonical_allocations(tiles, p);
    let outcome = grid::sweep(tiles, params, |cut, radius| favourable_at(inst, &allocs, cut, radius))?;
    let mut cuts = outcome.hit_cuts();
    cuts.sort_by(|a, b| a.lengths().partial_cmp(b.lengths()).expect("finite coordinates"));

    // key -> (alloc, matching, member cuts)
    let mut groups: BTreeMap<ContentKey, (BoxAllocation, Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, cut) in cuts.iter().enumerate() {
        for (boxes, matching) in favourable_triples(inst, &allocs, cut) {
            let key = content_key(&boxes, &matching);
            groups.entry(key).or_insert_with(|| (boxes, matching, Vec::new())).2.push(i);
        }
    }

    let mut divisions = Vec::new();
    for (boxes, matching, members) in groups.into_values() {
        let member_cuts: Vec<Cut> = members.iter().map(|&i| cuts[i].clone()).collect();
        for cluster in grid::cluster(&member_cuts, params.dedup_tol) {
            let refs: Vec<&Cut> = cluster.iter().map(|&i| &member_cuts[i]).collect();
            let mean = grid::mean_cut(&refs);
            let candidate = FavourableDivision {
                cut: mean,
                boxes: boxes.clone(),
                matching: matching.clone(),
            };
            let div = if is_favourable(&candidate, inst).favourable {
                candidate
            } else {
                let mean = candidate.cut;
                let nearest = refs
                    .iter()
                    .min_by(|a, b| {
                        let da = a.max_distance(&mean).unwrap_or(f64::INFINITY);
                        let db = b.max_distance(&mean).unwrap_or(f64::INFINITY);
                        da.partial_cmp(&db).unwrap()
                    })
                    .expect("clusters are nonempty");
                FavourableDivision {
                    cut: (*nearest).clone(),
                    boxes: boxes.clone(),
                    matching: matching.clone(),
                }
            };
            divisions.push(div);
        }
    }
    Ok(FavourableSearch {
        tiles,
        divisions,
        hit_cuts: cuts.len(),
        stats: outcome.stats,
    })
}
