mod common;

use common::*;
use efl_core::hybrid::{
    box_masses, canonical_allocations, closed_form_coloring_count, coloring_count, default_equi_tol, is_favourable,
    measure_of_box, search_favourable, BoxAllocation, HybridInstance, MassPreferences,
};
use efl_core::preferences::PlayerSubset;
use efl_core::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn covering_and_hunger_extremal() {
    for (r, q) in [(3, 60), (4, 20), (5, 20)] {
        let o = extremal_preferences(&ExtremalInstance::with_default_eps(r).unwrap());
        check_covering_and_hunger(&o, q).unwrap();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for r in [3, 4, 5] {
        for _ in 0..5 {
            let o = extremal_preferences(&random_extremal(&mut rng, r));
            check_covering_and_hunger(&o, 20).unwrap();
        }
    }
}

#[test]
fn covering_and_hunger_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (r, q) in [(2, 60), (3, 60), (4, 20), (5, 20)] {
        for _ in 0..5 {
            check_covering_and_hunger(&random_utilities(&mut rng, r, r), q).unwrap();
        }
    }
}

#[test]
fn extremal_cyclic_equivariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for r in 3..=6 {
        let o = extremal_preferences(&random_extremal(&mut rng, r));
        let q = if r == 3 { 60 } else { 12 };
        for cut in lattice(q, r) {
            check_equivariance(&o, &cut).unwrap();
        }
    }
}

#[test]
fn case_one_player_two_takes_first_tile() {
    for (r, q) in [(3, 60), (4, 20), (5, 20)] {
        let o = extremal_preferences(&ExtremalInstance::with_default_eps(r).unwrap());
        let mut checked = 0;
        for cut in lattice(q, r) {
            let x = cut.lengths();
            let max = x.iter().copied().fold(0.0, f64::max);
            if x[0] == max && x[0] > x[1] && x[r - 1] < x[0] {
                let set = preferred_tiles(&o, &cut, 1).unwrap();
                assert_eq!(set, TileSet::from_indices([0]), "r={r} at {x:?}");
                checked += 1;
            }
        }
        assert!(checked > 0);
    }
}

#[test]
fn extremal_barycenter_degrees() {
    for r in 3..=8 {
        let o = extremal_preferences(&ExtremalInstance::with_default_eps(r).unwrap());
        let g = build_graph(&o, &Cut::barycenter(r).unwrap()).unwrap();
        assert_eq!(g.player_degrees(), vec![2; r]);
        assert_eq!(g.tile_degrees(), vec![2; r]);
    }
}

#[test]
fn cycle_graphs_have_two_matchings() {
    for r in 2..=8 {
        assert_eq!(enumerate_perfect_matchings(&PreferenceGraph::cycle(r)).len(), 2, "r={r}");
    }
}

#[test]
fn random_decompositions() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut with_matchings = 0;
    for _ in 0..400 {
        let r = rng.gen_range(2..=7);
        let density = rng.gen_range(0.3..0.9);
        let g = random_graph(&mut rng, r, density);
        if check_decomposition(&g).unwrap() {
            with_matchings += 1;
        }
    }
    assert!(with_matchings > 100);
}

#[test]
fn returned_divisions_are_envy_free() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for i in 0..30 {
        let r = 2 + i % 3;
        let o = random_utilities(&mut rng, r, r);
        let divs = find_envy_free_divisions(&o, &SearchParams::with_grid(16).refine(3)).unwrap();
        assert!(!divs.is_empty());
        check_divisions_sound(&o, &divs).unwrap();
    }
    for r in 3..=5 {
        let o = extremal_preferences(&ExtremalInstance::with_default_eps(r).unwrap());
        let divs = find_envy_free_divisions(&o, &SearchParams::with_grid(15 * (6 - r as u64))).unwrap();
        check_divisions_sound(&o, &divs).unwrap();
    }
}

#[test]
fn at_least_two_divisions_for_random_utilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for i in 0..12 {
        let r = 2 + i % 3;
        let q = if r == 4 { 20 } else { 40 };
        let o = random_utilities(&mut rng, r, r);
        let divs = find_envy_free_divisions(&o, &SearchParams::with_grid(q).dedup_tol(1e-4).refine(16)).unwrap();
        assert!(count_distinct_divisions(&divs, 1e-6) >= 2, "instance {i}, r={r}");
    }
}

#[test]
fn same_result_on_any_pool_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for i in 0..6 {
        let r = 2 + i % 3;
        let o = random_utilities(&mut rng, r, r);
        check_thread_determinism(&o, &SearchParams::with_grid(12).refine(4)).unwrap();
    }
    let o = extremal_preferences(&ExtremalInstance::with_default_eps(4).unwrap());
    check_thread_determinism(&o, &SearchParams::with_grid(24)).unwrap();
}

/// Cut point where `F(x) = 1/2`, by bisection on the cdf.
fn median(m: &Measure) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if m.cdf(mid) < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn two_players_agree_with_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let q = 40u64;
    let slack = 2.0 / q as f64;
    for _ in 0..20 {
        let o = random_utilities(&mut rng, 2, 2);
        let (a, b) = (median(&o.valuations()[0]), median(&o.valuations()[1]));
        let (lo, hi) = (a.min(b), a.max(b));
        let divs = find_envy_free_divisions(&o, &SearchParams::with_grid(q).dedup_tol(0.5 / q as f64).refine(8)).unwrap();
        assert!(!divs.is_empty());
        for d in &divs {
            let x = d.cut.length(0);
            assert!(x >= lo - slack && x <= hi + slack, "{x} outside [{lo}, {hi}]");
        }
        for end in [lo, hi] {
            assert!(
                divs.iter().any(|d| (d.cut.length(0) - end).abs() <= slack),
                "no division near {end}"
            );
        }
    }
}

#[test]
fn secretive_implies_two_divisions() {
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut certified = 0;
    for i in 0..10 {
        let r = 2 + i % 2;
        let full = random_utilities(&mut rng, r, r);
        let rest = PlayerSubset::without(&full, 0).unwrap();
        let params = SearchParams::with_grid(30).refine(16);
        if find_certified_cut(&rest, CertifyMode::Secretive, &params).unwrap().is_some() {
            certified += 1;
            let divs = find_envy_free_divisions(&full, &params.dedup_tol(1e-4)).unwrap();
            assert!(count_distinct_divisions(&divs, 1e-6) >= 2, "instance {i}");
        }
    }
    assert_eq!(certified, 10);
}

#[test]
fn certified_families_survive_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for (mode, extra) in [(CertifyMode::Secretive, -1i64), (CertifyMode::Expelled, 1)] {
        for r in [2usize, 3] {
            for _ in 0..4 {
                let players = (r as i64 + extra) as usize;
                let o = random_utilities(&mut rng, players, r);
                let (cut, family) = find_certified_cut(&o, mode, &SearchParams::with_grid(30).refine(16))
                    .unwrap()
                    .expect("certificate");
                brute_force_family(&o, &cut, &family).unwrap();
            }
        }
    }
}

fn demo(p: usize, equi_tol: f64) -> HybridInstance<MassPreferences> {
    let o = MassPreferences::shared(p, Measure::uniform(), 1e-9).unwrap();
    HybridInstance::new(p, o, Measure::uniform(), equi_tol).unwrap()
}

#[test]
fn favourable_results_are_sound_and_colorable() {
    let inst = demo(3, 0.05);
    let found = search_favourable(&inst, &SearchParams::with_grid(12), 5).unwrap();
    assert!(found.divisions.len() >= 5);
    for d in &found.divisions {
        assert!(is_favourable(d, &inst).favourable);
        // only the one-triple profile has a closed form that matches enumeration
        if d.boxes.profile().contains(&3) {
            assert_eq!(coloring_count(&d.boxes).unwrap(), closed_form_coloring_count(&d.boxes.profile()));
        }
    }
}

/// Oracle that sees boxes through a fixed relabeling.
struct Relabeled {
    inner: MassPreferences,
    perm: Vec<usize>,
}

impl efl_core::BoxPreferenceOracle for Relabeled {
    fn players(&self) -> usize {
        self.inner.players()
    }
    fn preferred_boxes(&self, cut: &Cut, boxes: &BoxAllocation, player: usize, radius: f64) -> TileSet {
        let moved = boxes.relabel(&self.perm);
        let seen = self.inner.preferred_boxes(cut, &moved, player, radius);
        TileSet::from_indices((0..boxes.boxes()).filter(|&b| seen.contains(self.perm[b])))
    }
}

#[test]
fn favourable_search_ignores_box_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let intervals = [(0.0, 0.4), (0.3, 0.7), (0.6, 1.0)];
    let base = MassPreferences::intervals(&intervals, 1e-9).unwrap();
    let mu = Measure::uniform();
    let params = SearchParams::with_grid(12);
    let reference = {
        let inst = HybridInstance::new(3, base.clone(), mu.clone(), 0.05).unwrap();
        search_favourable(&inst, &params, 5).unwrap()
    };
    assert!(!reference.divisions.is_empty());
    for _ in 0..5 {
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut rng);
        let o = Relabeled {
            inner: base.clone(),
            perm,
        };
        let inst = HybridInstance::new(3, o, mu.clone(), 0.05).unwrap();
        let found = search_favourable(&inst, &params, 5).unwrap();
        assert_eq!(found.divisions, reference.divisions);
    }
    // a relabeled division is favourable exactly when the original is
    let inst = HybridInstance::new(3, base, mu, 0.05).unwrap();
    for d in &reference.divisions {
        let mut perm: Vec<usize> = (0..3).collect();
        perm.shuffle(&mut rng);
        let moved = efl_core::FavourableDivision {
            cut: d.cut.clone(),
            boxes: d.boxes.relabel(&perm),
            matching: d.matching.iter().map(|&b| perm[b]).collect(),
        };
        assert!(is_favourable(&moved, &inst).favourable);
    }
}

#[test]
fn impossibility_with_too_few_tiles() {
    let o = MassPreferences::intervals(&[(0.0, 0.1), (0.2, 0.3), (0.4, 0.5)], 1e-9).unwrap();
    let inst = HybridInstance::new(3, o, Measure::uniform_on(0.8, 1.0).unwrap(), 0.05).unwrap();
    for q in [8, 12, 16] {
        assert!(search_favourable(&inst, &SearchParams::with_grid(q), 4).unwrap().divisions.is_empty());
    }
}

#[test]
fn default_equipartition_tolerance() {
    assert!((default_equi_tol(2, 24) - 1.0 / 480.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn box_masses_add_up(
        raw in proptest::collection::vec(0.0f64..1.0, 5),
        alloc in 0usize..25,
        bp in 0.05f64..0.95,
        d in proptest::collection::vec(0.1f64..10.0, 2),
    ) {
        let cut = Cut::project(raw).unwrap_or_else(|_| Cut::barycenter(5).unwrap());
        let boxes = &canonical_allocations(5, 3)[alloc];
        let mu = Measure::new(vec![0.0, bp, 1.0], d).unwrap();
        let total: f64 = (0..3).map(|b| measure_of_box(&cut, boxes, b, &mu).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        prop_assert_eq!(box_masses(&cut, boxes, &mu).len(), 3);
    }
}
