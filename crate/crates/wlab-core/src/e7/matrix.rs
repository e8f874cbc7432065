use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DIM: usize = 8;

/// Dense 8×8 matrix over a scalar field, row-major.
#[derive(Clone, PartialEq)]
pub struct Mat8<S> {
    m: Vec<S>,
}

impl<S: Scalar> Mat8<S> {
    pub fn zero() -> Self {
        Mat8 {
            m: vec![S::zero(); DIM * DIM],
        }
    }

    pub fn identity() -> Self {
        Self::from_fn(|i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut m = Vec::with_capacity(DIM * DIM);
        for i in 0..DIM {
            for j in 0..DIM {
                m.push(f(i, j));
            }
        }
        Mat8 { m }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
            return Err(Error::Dimension("expected an 8×8 matrix".into()));
        }
        Ok(Mat8 {
            m: rows.into_iter().flatten().collect(),
        })
    }

    /// `E_ij = e_i ⊗ e_j*` with 1-based indices: maps `e_j` to `e_i`.
    pub fn elementary(i: usize, j: usize) -> Self {
        Self::from_fn(|r, c| if r + 1 == i && c + 1 == j { S::one() } else { S::zero() })
    }

    pub fn diagonal(d: &[S]) -> Self {
        Self::from_fn(|i, j| if i == j { d[i].clone() } else { S::zero() })
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.m[i * DIM + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.m[i * DIM + j] = v;
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: S) {
        let e = &mut self.m[i * DIM + j];
        *e = e.clone() + v;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.m.chunks(DIM).map(|r| r.to_vec()).collect()
    }

    pub fn trace(&self) -> S {
        (0..DIM).fold(S::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        Mat8 {
            m: self.m.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat8 {
            m: self.m.iter().zip(&o.m).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat8 {
            m: self.m.iter().zip(&o.m).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..DIM {
            for l in 0..DIM {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..DIM {
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        out.add_to(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// `trace(self · o)`.
    pub fn trace_product(&self, o: &Self) -> S {
        let mut acc = S::zero();
        for i in 0..DIM {
            for j in 0..DIM {
                let (a, b) = (self.get(i, j), o.get(j, i));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc + a.clone() * b.clone();
                }
            }
        }
        acc
    }

    pub fn skew_part(&self) -> Self {
        self.sub(&self.transpose()).scale(&S::from_ratio(1, 2))
    }

    pub fn sym_part(&self) -> Self {
        self.add(&self.transpose()).scale(&S::from_ratio(1, 2))
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().all(|v| v.is_zero())
    }

    /// Frobenius norm, as a float.
    pub fn frobenius(&self) -> f64 {
        self.m.iter().map(|v| v.to_f64().powi(2)).sum::<f64>().sqrt()
    }

    pub fn to_float(&self) -> Mat8<f64> {
        Mat8 {
            m: self.m.iter().map(|v| v.to_f64()).collect(),
        }
    }

    /// Removes the trace: `self − (tr/8)·I`.
    pub fn traceless_part(&self) -> Self {
        let t = self.trace() * S::from_ratio(1, DIM as i64);
        let mut out = self.clone();
        for i in 0..DIM {
            out.add_to(i, i, -t.clone());
        }
        out
    }
}

impl<S: Scalar> fmt::Debug for Mat8<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_literal()).collect())
            .collect();
        write!(f, "{rows:?}")
    }
}
