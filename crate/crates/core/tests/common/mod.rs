#![allow(dead_code)]

use efl_core::grid::compositions;
use efl_core::preferences::preference_profile;
use efl_core::{
    decompose_union, enumerate_perfect_matchings, preferred_tiles, utility_preferences, BijectionFamily,
    CertifyMode, Cut, Division, ExtremalInstance, HalfspaceSystem, Measure, PreferenceGraph, PreferenceOracle,
    SearchParams, TileSet, UtilityPreferences,
};
use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Four-piece density with breakpoints in (0.05, 0.95) and densities in [0.2, 5).
pub fn random_measure(rng: &mut ChaCha8Rng) -> Measure {
    let mut inner: Vec<f64> = (0..3).map(|_| rng.gen_range(0.05..0.95)).collect();
    inner.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut breakpoints = vec![0.0];
    breakpoints.extend(inner);
    breakpoints.push(1.0);
    let densities = (0..4).map(|_| rng.gen_range(0.2..5.0)).collect();
    Measure::new(breakpoints, densities).unwrap()
}

pub fn random_utilities(rng: &mut ChaCha8Rng, players: usize, r: usize) -> UtilityPreferences {
    utility_preferences(r, (0..players).map(|_| random_measure(rng)).collect()).unwrap()
}

/// A valid eps chain for arity `r`.
pub fn random_extremal(rng: &mut ChaCha8Rng, r: usize) -> ExtremalInstance {
    loop {
        let mut eps: Vec<f64> = (0..r - 2).map(|_| rng.gen_range(0.001..1.0 / r as f64)).collect();
        eps.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if let Ok(inst) = ExtremalInstance::new(r, eps) {
            return inst;
        }
    }
}

pub fn random_graph(rng: &mut ChaCha8Rng, r: usize, density: f64) -> PreferenceGraph {
    let adj = (0..r)
        .map(|_| TileSet::from_indices((0..r).filter(|_| rng.gen_bool(density))))
        .collect();
    PreferenceGraph::new(r, adj).unwrap()
}

pub fn lattice(q: u64, r: usize) -> impl Iterator<Item = Cut> {
    compositions(q, r)
        .into_iter()
        .map(move |n| Cut::new(n.iter().map(|&c| c as f64 / q as f64).collect()).unwrap())
}

/// Every player prefers something, and nobody prefers an empty tile.
/// Returns the number of grid points checked.
pub fn check_covering_and_hunger<O: PreferenceOracle>(oracle: &O, q: u64) -> Result<usize, String> {
    let mut n = 0;
    for cut in lattice(q, oracle.arity()) {
        for (j, set) in preference_profile(oracle, &cut, 0.0).iter().enumerate() {
            if set.is_empty() {
                return Err(format!("player {} prefers nothing at {:?}", j + 1, cut.lengths()));
            }
            if let Some(t) = set.iter().find(|&t| cut.length(t) == 0.0) {
                return Err(format!("player {} prefers empty tile {} at {:?}", j + 1, t + 1, cut.lengths()));
            }
        }
        n += 1;
    }
    Ok(n)
}

/// Player `j` at `rotate(x, j)` is player 0 at `x` with tiles shifted by `j`.
pub fn check_equivariance(oracle: &HalfspaceSystem, cut: &Cut) -> Result<(), String> {
    let r = oracle.arity();
    let base = preferred_tiles(oracle, cut, 0).unwrap();
    for j in 1..r {
        let moved = preferred_tiles(oracle, &cut.rotate(j), j).unwrap();
        for i in 0..r {
            if base.contains(i) != moved.contains((i + j) % r) {
                return Err(format!(
                    "tile {} / player {} at {:?}: {:?} vs {:?}",
                    i + 1,
                    j + 1,
                    cut.lengths(),
                    base,
                    moved
                ));
            }
        }
    }
    Ok(())
}

pub fn check_divisions_sound<O: PreferenceOracle>(oracle: &O, divisions: &[Division]) -> Result<usize, String> {
    for d in divisions {
        for (player, tile) in d.allocation.pairs() {
            if !preferred_tiles(oracle, &d.cut, player).unwrap().contains(tile) {
                return Err(format!(
                    "player {} does not prefer tile {} at {:?}",
                    player + 1,
                    tile + 1,
                    d.cut.lengths()
                ));
            }
        }
    }
    Ok(divisions.len())
}

/// Checks every map of the family and that brute force over all bijections finds each one.
pub fn brute_force_family<O: PreferenceOracle>(oracle: &O, cut: &Cut, family: &BijectionFamily) -> Result<(), String> {
    let r = oracle.arity();
    let profile = preference_profile(oracle, cut, 0.0);
    match family.mode {
        CertifyMode::Secretive => {
            if family.maps.len() != r {
                return Err(format!("{} maps for {r} tiles", family.maps.len()));
            }
            for (i, map) in family.maps.iter().enumerate() {
                let valid: Vec<Vec<usize>> = (0..r)
                    .filter(|&t| t != i)
                    .permutations(r - 1)
                    .filter(|m| m.iter().enumerate().all(|(p, &t)| profile[p].contains(t)))
                    .collect();
                if !valid.contains(map) {
                    return Err(format!("map {:?} without tile {} not found by brute force", map, i + 1));
                }
            }
        }
        CertifyMode::Expelled => {
            if family.maps.len() != r + 1 {
                return Err(format!("{} maps for {} players", family.maps.len(), r + 1));
            }
            for (j, map) in family.maps.iter().enumerate() {
                let valid: Vec<Vec<usize>> = (0..r + 1)
                    .filter(|&p| p != j)
                    .permutations(r)
                    .filter(|m| m.iter().enumerate().all(|(t, &p)| profile[p].contains(t)))
                    .collect();
                if !valid.contains(map) {
                    return Err(format!("map {:?} without player {} not found by brute force", map, j + 1));
                }
            }
        }
    }
    Ok(())
}

/// Partition property of the union of two matchings, plus the two-matchings-one-cycle rule.
pub fn check_decomposition(g: &PreferenceGraph) -> Result<bool, String> {
    let ms = enumerate_perfect_matchings(g);
    let (m1, m2) = match ms.as_slice() {
        [] => return Ok(false),
        [m] => (m, m),
        [a, b, ..] => (a, b),
    };
    let dec = decompose_union(g, m1, m2).map_err(|e| e.to_string())?;
    let union: std::collections::BTreeSet<(usize, usize)> = m1.pairs().chain(m2.pairs()).collect();
    let cycle_edges: usize = dec.alternating_cycles.iter().map(Vec::len).sum();
    if dec.shared_edges.len() + cycle_edges != union.len() {
        return Err(format!(
            "{} shared + {} cycle edges != {} union edges",
            dec.shared_edges.len(),
            cycle_edges,
            union.len()
        ));
    }
    if dec.uncolored_edges.len() + union.len() != g.edges().len() {
        return Err("uncolored edges do not complete the graph".into());
    }
    if ms.len() == 2 && dec.alternating_cycles.len() != 1 {
        return Err(format!("exactly two matchings but {} cycles", dec.alternating_cycles.len()));
    }
    Ok(true)
}

/// Same search on pools of 1, 2 and 4 threads.
pub fn check_thread_determinism<O: PreferenceOracle>(oracle: &O, params: &SearchParams) -> Result<(), String> {
    let runs: Vec<_> = [1, 2, 4]
        .iter()
        .map(|&n| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .unwrap()
                .install(|| efl_core::solver::search_envy_free(oracle, params).unwrap())
        })
        .collect();
    if runs.windows(2).all(|w| w[0] == w[1]) {
        Ok(())
    } else {
        Err("results differ across thread counts".into())
    }
}
