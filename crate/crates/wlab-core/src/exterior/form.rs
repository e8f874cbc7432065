use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::frame::{det_small, Frame};
use super::index::{full_mask, shuffle_sign, MultiIndex, MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// A constant-coefficient exterior k-form on R^n.
///
/// Coefficients are stored against the orthonormal monomial basis
/// `dx_I = dx_{i_1} ∧ … ∧ dx_{i_k}`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct KForm<S> {
    n: usize,
    k: usize,
    coeffs: BTreeMap<MultiIndex, S>,
}

pub type ExactForm = KForm<Rational>;
pub type FloatForm = KForm<f64>;

impl<S: Scalar> KForm<S> {
    pub fn zero(n: usize, k: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(Error::Dimension(format!("n = {n} exceeds {MAX_DIM}")));
        }
        if k > n {
            return Err(Error::Degree(format!("degree {k} exceeds dimension {n}")));
        }
        Ok(KForm {
            n,
            k,
            coeffs: BTreeMap::new(),
        })
    }

    /// `c · dx_{idx}`; `idx` may be unsorted, the permutation sign is absorbed.
    pub fn monomial(n: usize, idx: &[usize], c: S) -> Result<Self> {
        let mut f = Self::zero(n, idx.len())?;
        let (m, sign) = MultiIndex::from_unsorted(idx, n)?;
        f.insert(m, if sign < 0 { -c } else { c });
        Ok(f)
    }

    /// `dx_I + *dx_I`, the self-dual pair on a middle-degree monomial.
    pub fn self_dual_pair(n: usize, idx: &[usize]) -> Result<Self> {
        let m = Self::monomial(n, idx, S::one())?;
        if 2 * m.k != n {
            return Err(Error::Degree(format!(
                "self-dual pair needs degree n/2, got {} on R^{n}",
                m.k
            )));
        }
        let star = m.hodge_star();
        Ok(&m + &star)
    }

    /// The volume form `dx_1 ∧ … ∧ dx_n`.
    pub fn volume(n: usize) -> Result<Self> {
        let mut f = Self::zero(n, n)?;
        f.insert(MultiIndex::from_mask(full_mask(n)), S::one());
        Ok(f)
    }

    pub fn from_terms<I>(n: usize, k: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, S)>,
    {
        let mut f = Self::zero(n, k)?;
        for (idx, c) in terms {
            if idx.len() != k {
                return Err(Error::Degree(format!(
                    "term {idx:?} has length {} in a {k}-form",
                    idx.len()
                )));
            }
            let (m, sign) = MultiIndex::from_unsorted(&idx, n)?;
            f.add_term(m, if sign < 0 { -c } else { c });
        }
        Ok(f)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in lexicographic index order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &S)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, m: MultiIndex) -> S {
        self.coeffs.get(&m).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeff_of(&self, idx: &[usize]) -> Result<S> {
        let (m, sign) = MultiIndex::from_unsorted(idx, self.n)?;
        let c = self.coeff(m);
        Ok(if sign < 0 { -c } else { c })
    }

    fn insert(&mut self, m: MultiIndex, c: S) {
        if c.is_zero() {
            self.coeffs.remove(&m);
        } else {
            self.coeffs.insert(m, c);
        }
    }

    pub(crate) fn add_term(&mut self, m: MultiIndex, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.remove(&m) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(m, sum);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = KForm {
            n: self.n,
            k: self.k,
            coeffs: BTreeMap::new(),
        };
        for (m, v) in &self.coeffs {
            out.insert(*m, v.clone() * c.clone());
        }
        out
    }

    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(MultiIndex, &S) -> T) -> KForm<T> {
        let mut out = KForm {
            n: self.n,
            k: self.k,
            coeffs: BTreeMap::new(),
        };
        for (m, v) in &self.coeffs {
            out.insert(*m, f(*m, v));
        }
        out
    }

    /// Explicit, lossy conversion to floating point.
    pub fn to_float(&self) -> FloatForm {
        self.map_coeffs(|_, c| c.to_f64())
    }

    fn check_same_space(&self, other: &Self, what: &str) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Dimension(format!(
                "{what}: R^{} vs R^{}",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "sum")?;
        if self.k != other.k {
            return Err(Error::Degree(format!(
                "cannot add a {}-form and a {}-form",
                self.k, other.k
            )));
        }
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same_space(other, "wedge")?;
        if self.k + other.k > self.n {
            return Err(Error::Degree(format!(
                "wedge of degrees {} and {} exceeds dimension {}",
                self.k, other.k, self.n
            )));
        }
        let mut out = Self::zero(self.n, self.k + other.k)?;
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let s = shuffle_sign(*a, *b);
                if s == 0 {
                    continue;
                }
                let v = ca.clone() * cb.clone();
                out.add_term(a.union(*b), if s < 0 { -v } else { v });
            }
        }
        Ok(out)
    }

    /// `self ∧ self ∧ …` (`p` factors); `p = 0` gives the constant 1.
    pub fn wedge_power(&self, p: usize) -> Result<Self> {
        if self.k * p > self.n {
            return Err(Error::Degree(format!(
                "power {p} of a {}-form exceeds dimension {}",
                self.k, self.n
            )));
        }
        let mut acc = Self::zero(self.n, 0)?;
        acc.insert(MultiIndex::EMPTY, S::one());
        for _ in 0..p {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    /// Hodge star for the Euclidean metric and orientation `dx_1 ∧ … ∧ dx_n`.
    pub fn hodge_star(&self) -> Self {
        let mut out = KForm {
            n: self.n,
            k: self.n - self.k,
            coeffs: BTreeMap::new(),
        };
        for (m, c) in &self.coeffs {
            let comp = m.complement(self.n);
            let s = shuffle_sign(*m, comp);
            out.insert(comp, if s < 0 { -c.clone() } else { c.clone() });
        }
        out
    }

    /// Pull-back under the reflection `x_n ↦ −x_n`; reverses orientation,
    /// so it exchanges self-dual and anti-self-dual middle forms.
    pub fn flip_orientation(&self) -> Self {
        let n = self.n;
        self.map_coeffs(|m, c| if m.contains(n) { -c.clone() } else { c.clone() })
    }

    /// Euclidean inner product in the orthonormal monomial basis.
    pub fn dot(&self, other: &Self) -> Result<S> {
        self.check_same_space(other, "inner product")?;
        if self.k != other.k {
            return Err(Error::Degree("inner product of different degrees".into()));
        }
        let mut acc = S::zero();
        for (m, c) in &self.coeffs {
            if let Some(d) = other.coeffs.get(m) {
                acc = acc + c.clone() * d.clone();
            }
        }
        Ok(acc)
    }

    pub fn euclidean_norm_sq(&self) -> S {
        self.coeffs
            .values()
            .fold(S::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn euclidean_norm(&self) -> f64 {
        self.euclidean_norm_sq().to_f64().sqrt()
    }

    /// Coefficient of `dx_1 ∧ … ∧ dx_n` in a top-degree form.
    pub fn top_coefficient(&self) -> Result<S> {
        if self.k != self.n {
            return Err(Error::Degree(format!(
                "{}-form is not top-degree on R^{}",
                self.k, self.n
            )));
        }
        Ok(self.coeff(MultiIndex::from_mask(full_mask(self.n))))
    }

    /// Splits a middle-degree form into `(self-dual, anti-self-dual)` parts.
    /// Requires `n = 2k` with `k` even, where the star is an involution.
    pub fn selfdual_split(&self) -> Result<(Self, Self)> {
        self.require_involutive_middle()?;
        let star = self.hodge_star();
        let plus = (self + &star).scale(&S::from_ratio(1, 2));
        let minus = (self - &star).scale(&S::from_ratio(1, 2));
        Ok((plus, minus))
    }

    pub(crate) fn require_involutive_middle(&self) -> Result<()> {
        if 2 * self.k != self.n || !self.k.is_multiple_of(2) {
            return Err(Error::Degree(format!(
                "self-dual splitting needs a middle form of even degree, got a {}-form on R^{}",
                self.k, self.n
            )));
        }
        Ok(())
    }

    /// `⟨v_1 ∧ … ∧ v_k, self⟩`.
    pub fn evaluate(&self, frame: &Frame) -> Result<f64> {
        if frame.n() != self.n || frame.k() != self.k {
            return Err(Error::Dimension(format!(
                "{}-frame in R^{} for a {}-form on R^{}",
                frame.k(),
                frame.n(),
                self.k,
                self.n
            )));
        }
        let v = frame.matrix();
        let k = self.k;
        let mut buf = [0.0f64; MAX_DIM * MAX_DIM];
        let mut total = 0.0;
        for (m, c) in &self.coeffs {
            for (r, row) in m.rows().enumerate() {
                for col in 0..k {
                    buf[r * k + col] = v[(row, col)];
                }
            }
            total += c.to_f64() * det_small(&mut buf[..k * k], k);
        }
        Ok(total)
    }

    /// Coefficients on `subsets(n, k)` order, as a dense vector.
    pub fn to_dense(&self, basis: &[MultiIndex]) -> Vec<S> {
        basis.iter().map(|m| self.coeff(*m)).collect()
    }

    pub fn from_dense(n: usize, k: usize, basis: &[MultiIndex], values: &[S]) -> Result<Self> {
        let mut f = Self::zero(n, k)?;
        for (m, v) in basis.iter().zip(values) {
            f.insert(*m, v.clone());
        }
        Ok(f)
    }
}

impl FloatForm {
    /// Entrywise comparison within an absolute tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.n != other.n || self.k != other.k {
            return false;
        }
        let diff = self - other;
        diff.coeffs.values().all(|c| c.abs() <= tol)
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.retain(|_, c| c.abs() > tol);
        out
    }
}

impl<S: Scalar> Neg for &KForm<S> {
    type Output = KForm<S>;
    fn neg(self) -> KForm<S> {
        self.map_coeffs(|_, c| -c.clone())
    }
}

/// Panics on mismatched spaces; use [`KForm::try_add`] for fallible input.
impl<S: Scalar> Add for &KForm<S> {
    type Output = KForm<S>;
    fn add(self, rhs: &KForm<S>) -> KForm<S> {
        self.try_add(rhs).expect("adding forms of different shape")
    }
}

impl<S: Scalar> Sub for &KForm<S> {
    type Output = KForm<S>;
    fn sub(self, rhs: &KForm<S>) -> KForm<S> {
        self.try_sub(rhs).expect("subtracting forms of different shape")
    }
}

impl<S: Scalar> Mul<&KForm<S>> for &KForm<S> {
    type Output = KForm<S>;
    fn mul(self, rhs: &KForm<S>) -> KForm<S> {
        self.wedge(rhs).expect("wedge of incompatible forms")
    }
}

/// `Σ c_i f_i` over forms of one shape.
pub fn linear_combination<S: Scalar>(terms: &[(S, &KForm<S>)]) -> Result<KForm<S>> {
    let first = terms
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty linear combination".into()))?;
    let mut acc = KForm::zero(first.1.n, first.1.k)?;
    for (c, f) in terms {
        acc = acc.try_add(&f.scale(c))?;
    }
    Ok(acc)
}
