use serde::{Deserialize, Serialize};

use super::coloring::is_prime;
use crate::error::{EflError, Result};

/// Rook placement with one rook per column: `rows[column]`, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Facet {
    pub rows: Vec<usize>,
}

/// Facets of the chessboard complex on an `m`×`n` board: `n` non-attacking rooks,
/// lexicographic in `rows`.
pub fn chessboard_complex_facets(m: usize, n: usize) -> Result<Vec<Facet>> {
    if n > m {
        return Err(EflError::InvalidParams(format!("need n <= m, got m={m}, n={n}")));
    }
    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(n);
    let mut used = vec![false; m];
    place(m, n, &mut rows, &mut used, &mut out);
    Ok(out)
}

fn place(m: usize, n: usize, rows: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Facet>) {
    if rows.len() == n {
        out.push(Facet { rows: rows.clone() });
        return;
    }
    for r in 0..m {
        if !used[r] {
            used[r] = true;
            rows.push(r);
            place(m, n, rows, used, out);
            rows.pop();
            used[r] = false;
        }
    }
}

/// `m! / (m-n)!`.
pub fn chessboard_facet_count(m: usize, n: usize) -> Result<u128> {
    if n > m {
        return Err(EflError::InvalidParams(format!("need n <= m, got m={m}, n={n}")));
    }
    Ok(((m - n + 1)..=m).map(|k| k as u128).product())
}

/// The three column blocks of the `p`×`(2p-1)` board: `p-1`, `p-1` and `1` columns.
fn block_of(p: usize, column: usize) -> usize {
    if column < p - 1 {
        0
    } else if column < 2 * p - 2 {
        1
    } else {
        2
    }
}

/// Facets of the join of two `p`×`(p-1)` chessboard complexes and one `p`×`1`,
/// counted by enumerating every partial placement on the `p`×`(2p-1)` board
/// (at most one rook per column, distinct rows within a block) and keeping the maximal ones.
pub fn configuration_space_facets(p: usize) -> Result<u128> {
    if !is_prime(p as u64) {
        return Err(EflError::NotPrime(p as u64));
    }
    let cols = 2 * p - 1;
    // digit p means "no rook in this column"
    let mut digits = vec![0usize; cols];
    let mut count = 0u128;
    loop {
        if admissible(p, &digits) && maximal(p, &mut digits) {
            count += 1;
        }
        let mut i = cols;
        loop {
            if i == 0 {
                return Ok(count);
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] <= p {
                break;
            }
            digits[i] = 0;
        }
    }
}

fn admissible(p: usize, digits: &[usize]) -> bool {
    for (a, &ra) in digits.iter().enumerate() {
        if ra == p {
            continue;
        }
        for (b, &rb) in digits.iter().enumerate().skip(a + 1) {
            if rb == ra && block_of(p, a) == block_of(p, b) {
                return false;
            }
        }
    }
    true
}

fn maximal(p: usize, digits: &mut [usize]) -> bool {
    for c in 0..digits.len() {
        if digits[c] != p {
            continue;
        }
        for r in 0..p {
            digits[c] = r;
            let extendable = admissible(p, digits);
            digits[c] = p;
            if extendable {
                return false;
            }
        }
    }
    true
}

/// `(p!)² · p`, the product of the block facet counts.
pub fn configuration_space_formula(p: usize) -> Result<u128> {
    if !is_prime(p as u64) {
        return Err(EflError::NotPrime(p as u64));
    }
    let half = chessboard_facet_count(p, p - 1)?;
    Ok(half * half * chessboard_facet_count(p, 1)?)
}
