use crate::rational::RationalScalar;

/// Rank of a rational matrix by exact Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<RationalScalar>>) -> usize {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    for row in rows.iter_mut() {
        row.resize(cols, RationalScalar::zero());
    }
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in (rank + 1)..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let factor = &rows[r][col] / &pivot_row[col];
            for c in col..cols {
                rows[r][c] = &rows[r][c] - &(&factor * &pivot_row[c]);
            }
        }
        rank += 1;
    }
    rank
}
