use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Tolerance for accepting a list of vectors as orthonormal.
pub const FRAME_TOL: f64 = 1e-12;

/// An orthonormal k-frame in R^n, stored as the columns of an n×k matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    m: DMatrix<f64>,
}

impl Frame {
    /// Validates orthonormality within [`FRAME_TOL`].
    pub fn from_matrix(m: DMatrix<f64>) -> Result<Self> {
        let defect = orthonormality_defect(&m);
        if defect > FRAME_TOL {
            return Err(Error::NonOrthonormal { defect });
        }
        Ok(Frame { m })
    }

    pub fn from_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        let k = vectors.len();
        let n = vectors.first().map_or(0, Vec::len);
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::Dimension("frame vectors differ in length".into()));
        }
        Self::from_matrix(DMatrix::from_fn(n, k, |i, j| vectors[j][i]))
    }

    /// Coordinate frame `(e_{i_1}, …, e_{i_k})`, 1-based.
    pub fn coordinate(n: usize, idx: &[usize]) -> Result<Self> {
        if idx.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::Index {
                idx: idx.to_vec(),
                n,
            });
        }
        Self::from_matrix(DMatrix::from_fn(n, idx.len(), |r, c| {
            if r + 1 == idx[c] {
                1.0
            } else {
                0.0
            }
        }))
    }

    /// Wraps a matrix known to be orthonormal to working precision (the
    /// optimizers' retractions). Callers inside the crate only.
    pub(crate) fn trusted(m: DMatrix<f64>) -> Self {
        debug_assert!(orthonormality_defect(&m) < 1e-9);
        Frame { m }
    }

    pub fn empty(n: usize) -> Self {
        Frame {
            m: DMatrix::zeros(n, 0),
        }
    }

    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    pub fn k(&self) -> usize {
        self.m.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        (0..self.k())
            .map(|j| self.m.column(j).iter().copied().collect())
            .collect()
    }
}

/// max |VᵀV − I| entrywise.
pub fn orthonormality_defect(m: &DMatrix<f64>) -> f64 {
    let g = m.transpose() * m;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Determinant of a small dense matrix given row-major in `a` (k ≤ 8),
/// by Gaussian elimination with partial pivoting.
pub(crate) fn det_small(a: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        let mut best = a[col * k + col].abs();
        for r in col + 1..k {
            let v = a[r * k + col].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for c in 0..k {
                a.swap(col * k + c, piv * k + c);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let f = a[r * k + col] / p;
            if f != 0.0 {
                for c in col..k {
                    a[r * k + c] -= f * a[col * k + c];
                }
            }
        }
    }
    det
}
