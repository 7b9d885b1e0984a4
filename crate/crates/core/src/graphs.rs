//! The bipartite players/tiles preference graph at a fixed cut.

use serde::{Deserialize, Serialize};

use crate::error::{EflError, Result};
use crate::grid::SearchParams;
use crate::matching::enumerate_perfect;
use crate::preferences::{preference_profile, PreferenceOracle, TileSet};
use crate::simplex::{Allocation, Cut};
use crate::solver::search_envy_free;

/// Edge `(player, tile)`, 0-based.
pub type Edge = (usize, usize);

/// Players on one side, tiles on the other; `adj[player]` holds the preferred tiles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreferenceGraph {
    r: usize,
    adj: Vec<TileSet>,
}

impl PreferenceGraph {
    pub fn new(r: usize, adj: Vec<TileSet>) -> Result<Self> {
        if adj.len() != r {
            return Err(EflError::ArityMismatch {
                expected: r,
                actual: adj.len(),
            });
        }
        if adj.iter().any(|s| !s.is_subset(TileSet::full(r))) {
            return Err(EflError::IndexOutOfRange { index: r + 1, bound: r });
        }
        Ok(Self { r, adj })
    }

    pub fn from_edges(r: usize, edges: &[Edge]) -> Result<Self> {
        let mut adj = vec![TileSet::empty(); r];
        for &(p, t) in edges {
            if p >= r || t >= r {
                return Err(EflError::IndexOutOfRange {
                    index: p.max(t) + 1,
                    bound: r,
                });
            }
            adj[p].insert(t);
        }
        Self::new(r, adj)
    }

    /// The cycle `player j -- tile j -- player j+1 -- ...` of length `2r`.
    pub fn cycle(r: usize) -> Self {
        let adj = (0..r).map(|j| TileSet::from_indices([j, (j + 1) % r])).collect();
        Self { r, adj }
    }

    pub fn complete(r: usize) -> Self {
        Self {
            r,
            adj: vec![TileSet::full(r); r],
        }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn adjacency(&self) -> &[TileSet] {
        &self.adj
    }

    pub fn has_edge(&self, player: usize, tile: usize) -> bool {
        player < self.r && self.adj[player].contains(tile)
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(p, s)| s.iter().map(move |t| (p, t)))
            .collect()
    }

    pub fn player_degrees(&self) -> Vec<usize> {
        self.adj.iter().map(|s| s.len()).collect()
    }

    pub fn tile_degrees(&self) -> Vec<usize> {
        (0..self.r)
            .map(|t| self.adj.iter().filter(|s| s.contains(t)).count())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        // vertices 0..r are players, r..2r tiles
        let n = 2 * self.r;
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            let next: Vec<usize> = if v < self.r {
                self.adj[v].iter().map(|t| t + self.r).collect()
            } else {
                let t = v - self.r;
                (0..self.r).filter(|&p| self.adj[p].contains(t)).collect()
            };
            for w in next {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Connected with every vertex of degree exactly 2, i.e. one cycle through all `2r` vertices.
    pub fn is_hamiltonian_cycle(&self) -> bool {
        self.player_degrees().iter().all(|&d| d == 2)
            && self.tile_degrees().iter().all(|&d| d == 2)
            && self.is_connected()
    }
}

pub fn build_graph<O: PreferenceOracle + ?Sized>(oracle: &O, cut: &Cut) -> Result<PreferenceGraph> {
    let r = oracle.arity();
    if oracle.players() != r {
        return Err(EflError::ArityMismatch {
            expected: r,
            actual: oracle.players(),
        });
    }
    if cut.arity() != r {
        return Err(EflError::ArityMismatch {
            expected: r,
            actual: cut.arity(),
        });
    }
    PreferenceGraph::new(r, preference_profile(oracle, cut, 0.0))
}

/// All perfect matchings, lexicographically ordered by the player-to-tile sequence.
pub fn enumerate_perfect_matchings(g: &PreferenceGraph) -> Vec<Allocation> {
    enumerate_perfect(&g.adj, g.r)
        .into_iter()
        .map(|m| Allocation::new(m).expect("perfect matching is a bijection"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingUnionDecomposition {
    /// Edges used by both matchings.
    pub shared_edges: Vec<Edge>,
    /// Each cycle lists its edges in order, alternating first/second matching.
    pub alternating_cycles: Vec<Vec<Edge>>,
    /// Graph edges used by neither matching.
    pub uncolored_edges: Vec<Edge>,
}

pub fn decompose_union(g: &PreferenceGraph, m1: &Allocation, m2: &Allocation) -> Result<MatchingUnionDecomposition> {
    for m in [m1, m2] {
        if m.arity() != g.r || m.pairs().any(|(p, t)| !g.has_edge(p, t)) {
            return Err(EflError::NotAMatching);
        }
    }
    let r = g.r;
    let mut player_on_tile2 = vec![0; r];
    for (p, t) in m2.pairs() {
        player_on_tile2[t] = p;
    }
    let shared_edges: Vec<Edge> = m1.pairs().filter(|&(p, t)| m2.tile_of(p) == t).collect();
    let mut visited = vec![false; r];
    let mut alternating_cycles = Vec::new();
    for start in 0..r {
        if visited[start] || m1.tile_of(start) == m2.tile_of(start) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut p = start;
        loop {
            visited[p] = true;
            let t = m1.tile_of(p);
            cycle.push((p, t));
            let q = player_on_tile2[t];
            cycle.push((q, t));
            p = q;
            if p == start {
                break;
            }
        }
        alternating_cycles.push(cycle);
    }
    let uncolored_edges = g
        .edges()
        .into_iter()
        .filter(|&(p, t)| m1.tile_of(p) != t && m2.tile_of(p) != t)
        .collect();
    Ok(MatchingUnionDecomposition {
        shared_edges,
        alternating_cycles,
        uncolored_edges,
    })
}

/// Findings of the two-division structure check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub r: usize,
    pub cut_clusters: usize,
    pub allocations_per_cluster: Vec<usize>,
    /// The cluster cut, when there is exactly one.
    pub cut: Option<Cut>,
    pub player_degrees: Vec<usize>,
    pub tile_degrees: Vec<usize>,
    pub players_prefer_at_least_two: bool,
    pub tiles_preferred_by_at_least_two: bool,
    pub graph_is_cycle: bool,
    pub cycle_length: Option<usize>,
    /// Alternating cycles in the union of the two matchings, when there are exactly two.
    pub alternating_cycles: Option<usize>,
    pub conforms: bool,
}

/// Searches for envy-free divisions and checks the single-cut, two-allocation, `2r`-cycle structure.
pub fn certify_extremal_structure<O: PreferenceOracle + ?Sized>(oracle: &O, params: &SearchParams) -> Result<ExtremalReport> {
    let search = search_envy_free(oracle, params)?;
    let r = oracle.arity();
    let allocations_per_cluster: Vec<usize> = search.clusters.iter().map(|c| c.allocations.len()).collect();
    let mut report = ExtremalReport {
        r,
        cut_clusters: search.clusters.len(),
        allocations_per_cluster,
        cut: None,
        player_degrees: vec![],
        tile_degrees: vec![],
        players_prefer_at_least_two: false,
        tiles_preferred_by_at_least_two: false,
        graph_is_cycle: false,
        cycle_length: None,
        alternating_cycles: None,
        conforms: false,
    };
    if let [cluster] = search.clusters.as_slice() {
        let g = build_graph(oracle, &cluster.cut)?;
        report.cut = Some(cluster.cut.clone());
        report.player_degrees = g.player_degrees();
        report.tile_degrees = g.tile_degrees();
        report.players_prefer_at_least_two = report.player_degrees.iter().all(|&d| d >= 2);
        report.tiles_preferred_by_at_least_two = report.tile_degrees.iter().all(|&d| d >= 2);
        report.graph_is_cycle = g.is_hamiltonian_cycle();
        if report.graph_is_cycle {
            report.cycle_length = Some(2 * r);
        }
        if let [m1, m2] = cluster.allocations.as_slice() {
            let dec = decompose_union(&g, m1, m2)?;
            report.alternating_cycles = Some(dec.alternating_cycles.len());
        }
        report.conforms = cluster.allocations.len() == 2 && report.graph_is_cycle;
    }
    Ok(report)
}
