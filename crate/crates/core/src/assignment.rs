//! Minimum-cost rectangular assignment (Hungarian algorithm).
//!
//! Shortest-augmenting-path formulation with row/column potentials,
//! O(n^2*m) for an n-by-m matrix. Used for online per-frame matching and
//! for box matching inside the tracking metrics.

use alloc::vec;
use alloc::vec::Vec;

/// Solves min-cost assignment on a row-major `rows x cols` matrix of
/// finite costs. Returns `min(rows, cols)` pairs `(row, col)`, sorted by
/// row; every row (or column, if columns are scarcer) is matched. Ties are
/// broken toward the lowest row, then the lowest column.
///
/// Pairs that must never be chosen should carry a large finite sentinel
/// cost, not infinity, and be filtered by the caller afterwards.
pub fn hungarian(costs: &[f64], rows: usize, cols: usize) -> Vec<(usize, usize)> {
    assert_eq!(costs.len(), rows * cols, "cost matrix shape mismatch");
    debug_assert!(costs.iter().all(|c| c.is_finite()), "costs must be finite");
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    if rows > cols {
        // Solve the transpose so the augmenting loop always assigns the
        // smaller side completely.
        let mut t = vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                t[c * rows + r] = costs[r * cols + c];
            }
        }
        let mut pairs: Vec<(usize, usize)> = hungarian(&t, cols, rows)
            .into_iter()
            .map(|(r, c)| (c, r))
            .collect();
        pairs.sort_unstable();
        return pairs;
    }

    let n = rows;
    let m = cols;
    let at = |i: usize, j: usize| costs[(i - 1) * m + (j - 1)];

    // 1-indexed potentials and matching; p[j] is the row matched to
    // column j, with row 0 as the virtual unmatched marker.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = at(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // Augment along the stored alternating path.
        while j0 != 0 {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=m)
        .filter(|&j| p[j] != 0)
        .map(|j| (p[j] - 1, j - 1))
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Total cost of an assignment on the same matrix.
pub fn assignment_cost(costs: &[f64], cols: usize, pairs: &[(usize, usize)]) -> f64 {
    pairs.iter().map(|&(r, c)| costs[r * cols + c]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    /// Minimum assignment cost by enumerating all injective row->column
    /// maps (small sizes only).
    fn brute_force_min(costs: &[f64], rows: usize, cols: usize) -> f64 {
        fn recurse(
            costs: &[f64],
            cols: usize,
            row: usize,
            rows: usize,
            used: &mut Vec<bool>,
            acc: f64,
            best: &mut f64,
        ) {
            if row == rows {
                if acc < *best {
                    *best = acc;
                }
                return;
            }
            for c in 0..cols {
                if !used[c] {
                    used[c] = true;
                    recurse(costs, cols, row + 1, rows, used, acc + costs[row * cols + c], best);
                    used[c] = false;
                }
            }
        }
        // Work on the transpose when rows outnumber columns so the full
        // smaller side is assigned, mirroring the solver's contract.
        if rows > cols {
            let mut t = vec![0.0; rows * cols];
            for r in 0..rows {
                for c in 0..cols {
                    t[c * rows + r] = costs[r * cols + c];
                }
            }
            return brute_force_min(&t, cols, rows);
        }
        let mut best = f64::INFINITY;
        recurse(costs, cols, 0, rows, &mut vec![false; cols], 0.0, &mut best);
        best
    }

    #[test]
    fn two_by_two_picks_diagonal() {
        let pairs = hungarian(&[1.0, 10.0, 10.0, 1.0], 2, 2);
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn single_cell() {
        assert_eq!(hungarian(&[5.0], 1, 1), vec![(0, 0)]);
    }

    #[test]
    fn ties_break_to_lowest_row_then_column() {
        let pairs = hungarian(&[7.0; 9], 3, 3);
        assert_eq!(pairs, vec![(0, 0), (1, 1), (2, 2)]);
    }

    #[test]
    fn wide_matrix_assigns_every_row() {
        // 2x3: best is row0->col2 (0), row1->col0 (1).
        let costs = [9.0, 4.0, 0.0, 1.0, 9.0, 9.0];
        let pairs = hungarian(&costs, 2, 3);
        assert_eq!(pairs, vec![(0, 2), (1, 0)]);
    }

    #[test]
    fn tall_matrix_assigns_every_column() {
        // 3x2: only two rows can be matched.
        let costs = [9.0, 1.0, 2.0, 9.0, 9.0, 9.0];
        let pairs = hungarian(&costs, 3, 2);
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn empty_matrices_yield_no_pairs() {
        assert!(hungarian(&[], 0, 5).is_empty());
        assert!(hungarian(&[], 5, 0).is_empty());
    }

    #[test]
    fn random_matrices_match_brute_force() {
        let mut rng = ChaCha20Rng::seed_from_u64(99);
        for round in 0..200 {
            let rows = rng.random_range(1..=6);
            let cols = rng.random_range(1..=6);
            let costs: Vec<f64> = (0..rows * cols)
                .map(|_| (rng.random::<f64>() * 20.0) - 5.0)
                .collect();
            let pairs = hungarian(&costs, rows, cols);
            assert_eq!(pairs.len(), rows.min(cols), "round {round}");
            // A perfect matching on the smaller side, no duplicates.
            let mut rs: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let mut cs: Vec<usize> = pairs.iter().map(|p| p.1).collect();
            rs.dedup();
            cs.sort_unstable();
            cs.dedup();
            assert_eq!(rs.len(), pairs.len());
            assert_eq!(cs.len(), pairs.len());

            let got = assignment_cost(&costs, cols, &pairs);
            let want = brute_force_min(&costs, rows, cols);
            assert!(
                (got - want).abs() < 1e-9,
                "round {round}: got {got}, brute force {want}"
            );
        }
    }
}
