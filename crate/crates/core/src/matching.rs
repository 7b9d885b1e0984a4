//! Bipartite matching on small graphs given as left-vertex adjacency bitsets.

use crate::preferences::TileSet;

/// Maximum matching by augmenting paths. Returns `right_of[left]`.
pub fn max_matching(adj: &[TileSet], n_right: usize) -> Vec<Option<usize>> {
    let mut left_of: Vec<Option<usize>> = vec![None; n_right];
    for v in 0..adj.len() {
        let mut seen = vec![false; n_right];
        augment(v, adj, &mut left_of, &mut seen);
    }
    let mut right_of = vec![None; adj.len()];
    for (w, l) in left_of.iter().enumerate() {
        if let Some(v) = l {
            right_of[*v] = Some(w);
        }
    }
    right_of
}

fn augment(v: usize, adj: &[TileSet], left_of: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for w in adj[v].iter() {
        if w >= seen.len() || seen[w] {
            continue;
        }
        seen[w] = true;
        if left_of[w].is_none() || augment(left_of[w].unwrap(), adj, left_of, seen) {
            left_of[w] = Some(v);
            return true;
        }
    }
    false
}

/// A matching that saturates every left vertex, if one exists.
pub fn saturating_matching(adj: &[TileSet], n_right: usize) -> Option<Vec<usize>> {
    max_matching(adj, n_right).into_iter().collect()
}

/// Whether every left vertex can be matched into `allowed` right vertices.
pub fn saturates_within(adj: &[TileSet], allowed: TileSet, n_right: usize) -> Option<Vec<usize>> {
    let restricted: Vec<TileSet> = adj
        .iter()
        .map(|s| TileSet::from_indices(s.iter().filter(|&w| allowed.contains(w))))
        .collect();
    saturating_matching(&restricted, n_right)
}

/// All perfect matchings of a square bipartite graph, lexicographically ordered by `right_of`.
pub fn enumerate_perfect(adj: &[TileSet], n_right: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if adj.len() != n_right {
        return out;
    }
    let mut current = Vec::with_capacity(adj.len());
    extend(adj, 0, TileSet::empty(), &mut current, &mut out);
    out
}

fn extend(adj: &[TileSet], v: usize, used: TileSet, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if v == adj.len() {
        out.push(current.clone());
        return;
    }
    for w in adj[v].iter() {
        if used.contains(w) {
            continue;
        }
        let mut next = used;
        next.insert(w);
        current.push(w);
        extend(adj, v + 1, next, current, out);
        current.pop();
    }
}
