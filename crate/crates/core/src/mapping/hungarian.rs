//! Maximum-weight bipartite assignment with a reproducible tie-break.

use alloc::vec;
use alloc::vec::Vec;

use super::MappingError;

/// Result of [`hungarian_assign`]: an injective map from rows to columns
/// covering `min(rows, cols)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// `row_to_col[r]` is the column matched to row `r`, if any.
    pub row_to_col: Vec<Option<usize>>,
    /// Sum of the matched weights, accumulated in row order.
    pub total_weight: f64,
}

impl Assignment {
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.row_to_col
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| (r, c)))
    }
}

/// Entry cap for the exact subset-DP route (table of `(rows+1) << cols`
/// doubles, 16 MiB worst case). Everything this crate produces fits; wider
/// matrices fall back to the augmenting-path solver.
const DP_MAX_ENTRIES: u128 = 1 << 21;

/// Finds a maximum-weight assignment of `min(n, m)` row/column pairs for an
/// `n x m` matrix of finite, non-negative weights.
///
/// Ties between optimal assignments break toward the lexicographically
/// smallest row-to-column vector (unassigned ranks after any column), so
/// results are stable across platforms.
pub fn hungarian_assign(weights: &[Vec<f64>]) -> Result<Assignment, MappingError> {
    let rows = weights.len();
    if rows == 0 || weights[0].is_empty() {
        return Err(MappingError::MalformedMatrix);
    }
    let cols = weights[0].len();
    for (r, row) in weights.iter().enumerate() {
        if row.len() != cols {
            return Err(MappingError::MalformedMatrix);
        }
        for (c, &w) in row.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(MappingError::InvalidMatrixEntry { row: r, col: c });
            }
        }
    }

    let row_to_col = if cols < 64 && ((rows as u128 + 1) << cols) <= DP_MAX_ENTRIES {
        subset_dp(weights, rows, cols)
    } else {
        augmenting_path(weights, rows, cols)
    };

    let mut total_weight = 0.0;
    for (r, c) in row_to_col.iter().enumerate() {
        if let Some(c) = c {
            total_weight += weights[r][*c];
        }
    }
    Ok(Assignment {
        row_to_col,
        total_weight,
    })
}

/// Exact route: `best[r][mask]` is the optimal weight assigning rows `r..`
/// using only the columns in `mask`, allowing rows to stay unassigned. The
/// forward backtrack re-evaluates the exact float expressions that produced
/// the table, so the first column (in ascending order) that reproduces the
/// optimum is provably part of an optimal assignment — no epsilon needed.
/// With non-negative weights the lexicographically smallest optimum always
/// assigns `min(n, m)` pairs.
fn subset_dp(weights: &[Vec<f64>], rows: usize, cols: usize) -> Vec<Option<usize>> {
    let masks = 1usize << cols;
    let mut best = vec![0.0f64; (rows + 1) * masks];
    for r in (0..rows).rev() {
        for mask in 0..masks {
            let skip = best[(r + 1) * masks + mask];
            let mut value = skip;
            let mut avail = mask;
            while avail != 0 {
                let c = avail.trailing_zeros() as usize;
                avail &= avail - 1;
                let take = weights[r][c] + best[(r + 1) * masks + (mask & !(1 << c))];
                if take > value {
                    value = take;
                }
            }
            best[r * masks + mask] = value;
        }
    }

    let mut row_to_col = vec![None; rows];
    let mut mask = masks - 1;
    for r in 0..rows {
        let target = best[r * masks + mask];
        let mut chosen = None;
        for c in 0..cols {
            if mask & (1 << c) != 0
                && weights[r][c] + best[(r + 1) * masks + (mask & !(1 << c))] == target
            {
                chosen = Some(c);
                break;
            }
        }
        if let Some(c) = chosen {
            row_to_col[r] = Some(c);
            mask &= !(1 << c);
        }
        // no column reproduces the optimum => skipping this row does
    }
    row_to_col
}

/// Fallback for wide matrices: classic O(n^2 m) shortest-augmenting-path
/// assignment on negated weights. Deterministic scan order; optimal value,
/// but the tie-break is not the lexicographic one.
fn augmenting_path(weights: &[Vec<f64>], rows: usize, cols: usize) -> Vec<Option<usize>> {
    // orient so we assign every row of the smaller side
    let transpose = rows > cols;
    let (n, m) = if transpose { (cols, rows) } else { (rows, cols) };
    let cost = |i: usize, j: usize| -> f64 {
        if transpose {
            -weights[j][i]
        } else {
            -weights[i][j]
        }
    };

    // column m is a virtual start column
    let mut row_potential = vec![0.0f64; n + 1];
    let mut col_potential = vec![0.0f64; m + 1];
    let mut col_to_row = vec![usize::MAX; m + 1];

    for i in 0..n {
        let mut j_cur = m;
        col_to_row[m] = i;
        let mut min_to = vec![f64::INFINITY; m + 1];
        let mut prev = vec![usize::MAX; m + 1];
        let mut used = vec![false; m + 1];

        while col_to_row[j_cur] != usize::MAX {
            used[j_cur] = true;
            let i_cur = col_to_row[j_cur];
            let mut delta = f64::INFINITY;
            let mut j_next = m;
            for j in 0..m {
                if !used[j] {
                    let reduced = cost(i_cur, j) - row_potential[i_cur] - col_potential[j];
                    if reduced < min_to[j] {
                        min_to[j] = reduced;
                        prev[j] = j_cur;
                    }
                    if min_to[j] < delta {
                        delta = min_to[j];
                        j_next = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    row_potential[col_to_row[j]] += delta;
                    col_potential[j] -= delta;
                } else {
                    min_to[j] -= delta;
                }
            }
            j_cur = j_next;
        }
        while j_cur != m {
            let j_prev = prev[j_cur];
            col_to_row[j_cur] = col_to_row[j_prev];
            j_cur = j_prev;
        }
    }

    let mut row_to_col = vec![None; rows];
    for j in 0..m {
        let i = col_to_row[j];
        if i != usize::MAX {
            if transpose {
                row_to_col[j] = Some(i);
            } else {
                row_to_col[i] = Some(j);
            }
        }
    }
    row_to_col
}
