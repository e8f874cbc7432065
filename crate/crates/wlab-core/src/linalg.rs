//! Exact Gaussian elimination over a field.

use crate::scalar::Scalar;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<S: Scalar>(rows: &mut Vec<Vec<S>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let (pivot_row, other) = if i < r {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (o, p) in other.iter_mut().zip(pivot_row) {
                    if !p.is_zero() {
                        *o = o.clone() - f.clone() * p.clone();
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{w : A w = 0}` for the matrix given by its rows.
///
/// Each basis vector has a 1 in one free column and zeros in the others.
pub fn nullspace<S: Scalar>(mut rows: Vec<Vec<S>>, ncols: usize) -> Vec<Vec<S>> {
    rows.retain(|r| r.iter().any(|v| !v.is_zero()));
    let pivots = rref(&mut rows, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut w = vec![S::zero(); ncols];
            w[free] = S::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                w[p] = -row[free].clone();
            }
            w
        })
        .collect()
}
