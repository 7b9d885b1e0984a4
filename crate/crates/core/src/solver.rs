//! Envy-free cut search, division counting, and secretive/expelled certification.

use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};
use crate::grid::{self, SearchParams, SweepStats};
use crate::matching::{enumerate_perfect, saturates_within, saturating_matching};
use crate::preferences::{preference_profile, PreferenceOracle, TileSet};
use crate::simplex::{divisions_equal, Allocation, Cut, Division};

/// Whether the players can be given distinct tiles they (relaxed-)prefer.
pub fn admits_envy_free<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut, radius: f64) -> bool {
    let profile = preference_profile(oracle, cut, radius);
    saturating_matching(&profile, oracle.arity()).is_some()
}

/// All envy-free allocations at a fixed cut, lexicographically ordered.
pub fn envy_free_allocations<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut) -> Vec<Allocation> {
    let profile = preference_profile(oracle, cut, 0.0);
    enumerate_perfect(&profile, oracle.arity())
        .into_iter()
        .map(|m| Allocation::new(m).expect("perfect matching is a bijection"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutCluster {
    /// Representative cut.
    pub cut: Cut,
    /// Number of lattice hits merged into this cluster.
    pub hits: usize,
    pub allocations: Vec<Allocation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvyFreeSearch {
    pub clusters: Vec<CutCluster>,
    pub divisions: Vec<Division>,
    pub stats: SweepStats,
}

fn check_square<O: PreferenceOracle + ?Sized>(oracle: &O) -> Result<()> {
    if oracle.players() != oracle.arity() {
        return Err(EflError::ArityMismatch {
            expected: oracle.arity(),
            actual: oracle.players(),
        });
    }
    Ok(())
}

/// Sweeps the lattice, clusters envy-free hits, and enumerates allocations at each representative.
pub fn search_envy_free<O: PreferenceOracle + ?Sized>(oracle: &O, params: &SearchParams) -> Result<EnvyFreeSearch> {
    check_square(oracle)?;
    let r = oracle.arity();
    let outcome = grid::sweep(r, params, |cut, radius| admits_envy_free(oracle, cut, radius))?;
    let mut cuts = outcome.hit_cuts();
    cuts.sort_by(|a, b| a.lengths().partial_cmp(b.lengths()).expect("finite coordinates"));

    let mut clusters = Vec::new();
    for members in grid::cluster(&cuts, params.dedup_tol) {
        let member_cuts: Vec<&Cut> = members.iter().map(|&i| &cuts[i]).collect();
        let mean = grid::mean_cut(&member_cuts);
        let mut allocations = envy_free_allocations(oracle, &mean);
        let cut = if allocations.is_empty() {
            let nearest = member_cuts
                .iter()
                .min_by(|a, b| {
                    let da = a.max_distance(&mean).unwrap_or(f64::INFINITY);
                    let db = b.max_distance(&mean).unwrap_or(f64::INFINITY);
                    da.partial_cmp(&db).unwrap()
                })
                .expect("clusters are nonempty");
            allocations = envy_free_allocations(oracle, nearest);
            (*nearest).clone()
        } else {
            mean
        };
        clusters.push(CutCluster {
            cut,
            hits: members.len(),
            allocations,
        });
    }
    let divisions = clusters
        .iter()
        .flat_map(|c| {
            c.allocations
                .iter()
                .map(move |a| Division::new(c.cut.clone(), a.clone()).expect("arity checked"))
        })
        .collect();
    Ok(EnvyFreeSearch {
        clusters,
        divisions,
        stats: outcome.stats,
    })
}

pub fn find_envy_free_divisions<O: PreferenceOracle + ?Sized>(oracle: &O, params: &SearchParams) -> Result<Vec<Division>> {
    Ok(search_envy_free(oracle, params)?.divisions)
}

/// Size of the quotient under `divisions_equal(.., tol)`, counted greedily in list order.
pub fn count_distinct_divisions(divisions: &[Division], tol: f64) -> usize {
    let mut kept: Vec<&Division> = Vec::new();
    for d in divisions {
        let seen = kept
            .iter()
            .any(|k| divisions_equal(k, d, tol).unwrap_or(false));
        if !seen {
            kept.push(d);
        }
    }
    kept.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertifyMode {
    /// `r - 1` players, `r` tiles: any tile may be taken away first.
    Secretive,
    /// `r + 1` players, `r` tiles: any player may be sent away.
    Expelled,
}

/// A family of bijections witnessing a secretive or expelled certificate.
///
/// Secretive: `maps[i][player] = tile`, a bijection onto all tiles but `i`.
/// Expelled: `maps[j][tile] = player`, a bijection onto all players but `j`.
/// All indices 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionFamily {
    pub mode: CertifyMode,
    pub maps: Vec<Vec<usize>>,
}

impl BijectionFamily {
    pub fn one_based(&self) -> Vec<Vec<usize>> {
        self.maps
            .iter()
            .map(|m| m.iter().map(|x| x + 1).collect())
            .collect()
    }

    /// Re-checks every member against exact preferences at `cut`.
    pub fn holds_at<O: PreferenceOracle + ?Sized>(&self, oracle: &O, cut: &Cut) -> bool {
        let profile = preference_profile(oracle, cut, 0.0);
        let r = oracle.arity();
        match self.mode {
            CertifyMode::Secretive => {
                self.maps.len() == r
                    && self.maps.iter().enumerate().all(|(i, m)| {
                        let tiles = TileSet::from_indices(m.iter().copied());
                        m.len() == r - 1
                            && tiles.len() == r - 1
                            && !tiles.contains(i)
                            && m.iter().enumerate().all(|(j, &t)| profile[j].contains(t))
                    })
            }
            CertifyMode::Expelled => {
                self.maps.len() == r + 1
                    && self.maps.iter().enumerate().all(|(j, m)| {
                        let players = TileSet::from_indices(m.iter().copied());
                        m.len() == r
                            && players.len() == r
                            && !players.contains(j)
                            && m.iter().enumerate().all(|(t, &p)| p < r + 1 && profile[p].contains(t))
                    })
            }
        }
    }
}

fn expected_players(mode: CertifyMode, r: usize) -> usize {
    match mode {
        CertifyMode::Secretive => r - 1,
        CertifyMode::Expelled => r + 1,
    }
}

fn family_at<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut, radius: f64, mode: CertifyMode) -> Option<BijectionFamily> {
    let r = oracle.arity();
    let profile = preference_profile(oracle, cut, radius);
    let maps = match mode {
        CertifyMode::Secretive => (0..r)
            .map(|i| {
                let mut allowed = TileSet::full(r);
                allowed.remove(i);
                saturates_within(&profile, allowed, r)
            })
            .collect::<Option<Vec<_>>>()?,
        CertifyMode::Expelled => (0..r + 1)
            .map(|j| {
                let rest: Vec<TileSet> = profile
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != j)
                    .map(|(_, s)| *s)
                    .collect();
                let tile_of = saturating_matching(&rest, r)?;
                let mut player_of = vec![0; r];
                for (k, &t) in tile_of.iter().enumerate() {
                    player_of[t] = if k < j { k } else { k + 1 };
                }
                Some(player_of)
            })
            .collect::<Option<Vec<_>>>()?,
    };
    Some(BijectionFamily { mode, maps })
}

fn verify<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut, mode: CertifyMode) -> Result<Option<BijectionFamily>> {
    let r = oracle.arity();
    if cut.arity() != r {
        return Err(EflError::ArityMismatch {
            expected: r,
            actual: cut.arity(),
        });
    }
    let want = expected_players(mode, r);
    if oracle.players() != want {
        return Err(EflError::ArityMismatch {
            expected: want,
            actual: oracle.players(),
        });
    }
    Ok(family_at(oracle, cut, 0.0, mode))
}

/// Secretive-player certificate at a cut: `r - 1` players, `r` tiles.
pub fn verify_secretive<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut) -> Result<Option<BijectionFamily>> {
    verify(oracle, cut, CertifyMode::Secretive)
}

/// Expelled-player certificate at a cut: `r + 1` players, `r` tiles.
pub fn verify_expelled<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut) -> Result<Option<BijectionFamily>> {
    verify(oracle, cut, CertifyMode::Expelled)
}

/// First lattice cut (coarsest level first, lexicographic within a level) carrying a certificate.
pub fn find_certified_cut<O: PreferenceOracle + ?Sized>(
    oracle: &O,
    mode: CertifyMode,
    params: &SearchParams,
) -> Result<Option<(Cut, BijectionFamily)>> {
    let r = oracle.arity();
    let want = expected_players(mode, r);
    if oracle.players() != want {
        return Err(EflError::ArityMismatch {
            expected: want,
            actual: oracle.players(),
        });
    }
    let outcome = grid::sweep(r, params, |cut, radius| family_at(oracle, cut, radius, mode).is_some())?;
    Ok(outcome.hits.first().map(|p| {
        let cut = p.cut();
        let family = family_at(oracle, &cut, 0.0, mode).expect("exact hit carries a family");
        (cut, family)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Measure;
    use crate::preferences::{extremal_preferences, utility_preferences, ConstantPreferences, ExtremalInstance};

    fn uniform(players: usize, r: usize) -> impl PreferenceOracle {
        utility_preferences(r, vec![Measure::uniform(); players]).unwrap()
    }

    #[test]
    fn extremal_r3_two_divisions_at_barycenter() {
        let o = extremal_preferences(&ExtremalInstance::new(3, vec![0.2]).unwrap());
        let params = SearchParams::with_grid(60).dedup_tol(0.05);
        let divs = find_envy_free_divisions(&o, &params).unwrap();
        assert_eq!(divs.len(), 2);
        let b = Cut::barycenter(3).unwrap();
        for d in &divs {
            assert!(d.cut.max_distance(&b).unwrap() <= 1.0 / 60.0);
        }
        assert_eq!(divs[0].allocation.one_based(), vec![2, 3, 1]);
        assert_eq!(divs[1].allocation.one_based(), vec![3, 1, 2]);
        assert_eq!(count_distinct_divisions(&divs, 1e-6), 2);
    }

    #[test]
    fn extremal_r4_two_divisions() {
        let o = extremal_preferences(&ExtremalInstance::new(4, vec![0.2, 0.1]).unwrap());
        let search = search_envy_free(&o, &SearchParams::with_grid(20)).unwrap();
        assert_eq!(search.clusters.len(), 1);
        assert_eq!(search.divisions.len(), 2);
        assert!(search.clusters[0].cut.max_distance(&Cut::barycenter(4).unwrap()).unwrap() <= 1e-12);
    }

    #[test]
    fn uniform_two_players() {
        let o = uniform(2, 2);
        let search = search_envy_free(&o, &SearchParams::with_grid(10)).unwrap();
        assert_eq!(search.clusters.len(), 1);
        assert_eq!(search.clusters[0].hits, 1);
        assert_eq!(search.clusters[0].cut.lengths(), &[0.5, 0.5]);
        assert_eq!(search.divisions.len(), 2);
    }

    #[test]
    fn counting_examples() {
        let o = extremal_preferences(&ExtremalInstance::new(3, vec![0.2]).unwrap());
        let divs = find_envy_free_divisions(&o, &SearchParams::with_grid(60)).unwrap();
        assert_eq!(count_distinct_divisions(&divs, 1e-6), 2);
        let dup = vec![divs[0].clone(), divs[0].clone()];
        assert_eq!(count_distinct_divisions(&dup, 1e-6), 1);
        assert_eq!(count_distinct_divisions(&[], 1e-6), 0);
    }

    #[test]
    fn non_square_oracle_rejected() {
        let o = uniform(2, 3);
        assert!(find_envy_free_divisions(&o, &SearchParams::with_grid(10)).is_err());
    }

    #[test]
    fn secretive_examples() {
        let half = Cut::new(vec![0.5, 0.5]).unwrap();
        let fam = verify_secretive(&uniform(1, 2), &half).unwrap().unwrap();
        assert_eq!(fam.one_based(), vec![vec![2], vec![1]]);

        let all = ConstantPreferences::new(3, vec![TileSet::full(3); 2]).unwrap();
        let b = Cut::barycenter(3).unwrap();
        let fam = verify_secretive(&all, &b).unwrap().unwrap();
        assert!(fam.holds_at(&all, &b));

        let greedy = ConstantPreferences::new(3, vec![TileSet::from_one_based(&[1]); 2]).unwrap();
        assert_eq!(verify_secretive(&greedy, &b).unwrap(), None);

        assert!(verify_secretive(&all, &half).is_err());
        assert!(verify_expelled(&all, &b).is_err());
    }

    #[test]
    fn expelled_examples() {
        let half = Cut::new(vec![0.5, 0.5]).unwrap();
        let all = ConstantPreferences::new(2, vec![TileSet::full(2); 3]).unwrap();
        let fam = verify_expelled(&all, &half).unwrap().unwrap();
        assert!(fam.holds_at(&all, &half));
        assert_eq!(fam.maps.len(), 3);

        let first = ConstantPreferences::new(2, vec![TileSet::from_one_based(&[1]); 3]).unwrap();
        assert_eq!(verify_expelled(&first, &half).unwrap(), None);
    }

    #[test]
    fn expelled_matches_brute_force() {
        use itertools::Itertools;
        // singles {1}, {2}, {3} plus a duplicate {1}
        let sets = vec![
            TileSet::from_one_based(&[1]),
            TileSet::from_one_based(&[2]),
            TileSet::from_one_based(&[3]),
            TileSet::from_one_based(&[1]),
        ];
        let o = ConstantPreferences::new(3, sets.clone()).unwrap();
        let b = Cut::barycenter(3).unwrap();
        let brute = (0..4).all(|j| {
            let rest: Vec<usize> = (0..4).filter(|&p| p != j).collect();
            (0..3)
                .permutations(3)
                .any(|perm| rest.iter().zip(&perm).all(|(&p, &t)| sets[p].contains(t)))
        });
        // expelling player 2 or 3 leaves a tile nobody wants
        assert!(!brute);
        assert_eq!(verify_expelled(&o, &b).unwrap(), None);

        let sets2 = vec![
            TileSet::from_one_based(&[1, 2]),
            TileSet::from_one_based(&[2, 3]),
            TileSet::from_one_based(&[3, 1]),
            TileSet::from_one_based(&[1, 2, 3]),
        ];
        let o2 = ConstantPreferences::new(3, sets2).unwrap();
        let fam = verify_expelled(&o2, &b).unwrap().unwrap();
        assert!(fam.holds_at(&o2, &b));
    }

    #[test]
    fn certified_cut_examples() {
        let params = SearchParams::with_grid(30).refine(4);
        let (cut, fam) = find_certified_cut(&uniform(2, 3), CertifyMode::Secretive, &params).unwrap().unwrap();
        assert!(cut.max_distance(&Cut::barycenter(3).unwrap()).unwrap() <= 1.0 / 30.0);
        assert!(fam.holds_at(&uniform(2, 3), &cut));

        let greedy = ConstantPreferences::new(3, vec![TileSet::from_one_based(&[1]); 2]).unwrap();
        assert!(find_certified_cut(&greedy, CertifyMode::Secretive, &params).unwrap().is_none());

        let (cut, _) = find_certified_cut(&uniform(3, 2), CertifyMode::Expelled, &SearchParams::with_grid(10))
            .unwrap()
            .unwrap();
        assert_eq!(cut.lengths(), &[0.5, 0.5]);
        assert!(find_certified_cut(&uniform(3, 2), CertifyMode::Secretive, &params).is_err());
    }
}
