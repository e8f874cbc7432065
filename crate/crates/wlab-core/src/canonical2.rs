//! Normal form of a real 2-form: an orthonormal frame `e_1, …, e_n` and
//! numbers `λ_1 ≥ … ≥ λ_μ ≥ 0` with `A = Σ λ_j e^{2j-1} ∧ e^{2j}`.
//!
//! The comass of a 2-form is `max_j λ_j`, which makes this the one place
//! where comass is available in closed form.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::comass::{comass_estimate, OptimizerConfig};
use crate::error::{Error, Result};
use crate::exterior::{FloatForm, Frame, KForm};
use crate::scalar::{factorial, Scalar};

/// Eigenvalues of `AᵀA` below this are treated as kernel.
const KERNEL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Canonical2Form {
    /// `⌊n/2⌋` block coefficients, descending, nonnegative.
    pub lambdas: Vec<f64>,
    /// Columns `e_1, …, e_n`; block `j` is spanned by columns `2j`, `2j+1`.
    #[serde(serialize_with = "serialize_frame")]
    pub frame: Frame,
    /// Euclidean norm of `A − Σ λ_j e^{2j-1} ∧ e^{2j}`.
    pub residual: f64,
}

fn serialize_frame<S: serde::Serializer>(f: &Frame, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.vectors().serialize(s)
}

/// The skew matrix `M_pq = A(e_p, e_q)`.
pub fn skew_matrix<S: Scalar>(a: &KForm<S>) -> Result<DMatrix<f64>> {
    if a.k() != 2 {
        return Err(Error::Degree(format!("expected a 2-form, got a {}-form", a.k())));
    }
    let n = a.n();
    let mut m = DMatrix::zeros(n, n);
    for (idx, c) in a.terms() {
        let ij = idx.rows().collect::<Vec<_>>();
        let v = c.to_f64();
        m[(ij[0], ij[1])] = v;
        m[(ij[1], ij[0])] = -v;
    }
    Ok(m)
}

/// 2-form with the given skew matrix (upper triangle is read).
pub fn form_from_skew(m: &DMatrix<f64>) -> Result<FloatForm> {
    let n = m.nrows();
    let mut terms = Vec::new();
    for p in 0..n {
        for q in p + 1..n {
            if m[(p, q)] != 0.0 {
                terms.push((vec![p + 1, q + 1], m[(p, q)]));
            }
        }
    }
    KForm::from_terms(n, 2, terms)
}

fn orient(v: &mut DVector<f64>) {
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.neg_mut();
        }
    }
}

fn orthogonalize_against(v: &mut DVector<f64>, chosen: &[DVector<f64>]) {
    // two passes of classical Gram–Schmidt
    for _ in 0..2 {
        for u in chosen {
            let d = u.dot(v);
            v.axpy(-d, u, 1.0);
        }
    }
}

pub fn canonicalize(a: &FloatForm) -> Result<Canonical2Form> {
    let m = skew_matrix(a)?;
    let n = m.nrows();
    let mu = n / 2;
    let ata = m.transpose() * &m;
    let eig = SymmetricEigen::new(ata);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]).then(i.cmp(&j)));

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(mu);
    for &i in &order {
        if lambdas.len() == mu || chosen.len() >= n {
            break;
        }
        if eig.eigenvalues[i] < KERNEL_TOL {
            break;
        }
        let mut v: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        orthogonalize_against(&mut v, &chosen);
        let norm = v.norm();
        if norm < 0.5 {
            // already covered as the partner of an earlier vector
            continue;
        }
        v /= norm;
        orient(&mut v);
        let mut w = m.transpose() * &v;
        orthogonalize_against(&mut w, &chosen);
        orthogonalize_against(&mut w, std::slice::from_ref(&v));
        let wn = w.norm();
        if wn < KERNEL_TOL {
            break;
        }
        w /= wn;
        let lambda = v.dot(&(&m * &w));
        chosen.push(v);
        chosen.push(w);
        lambdas.push(lambda.max(0.0));
    }
    let blocks = lambdas.len();
    // kernel: orthonormal completion
    for &i in order.iter().rev() {
        if chosen.len() == n {
            break;
        }
        let mut v: DVector<f64> = eig.eigenvectors.column(i).into_owned();
        orthogonalize_against(&mut v, &chosen);
        let norm = v.norm();
        if norm > 0.5 {
            v /= norm;
            orient(&mut v);
            chosen.push(v);
        }
    }
    for p in 0..n {
        if chosen.len() == n {
            break;
        }
        let mut v = DVector::zeros(n);
        v[p] = 1.0;
        orthogonalize_against(&mut v, &chosen);
        let norm = v.norm();
        if norm > 1e-6 {
            v /= norm;
            orient(&mut v);
            chosen.push(v);
        }
    }
    lambdas.resize(mu, 0.0);

    let mut recon = DMatrix::zeros(n, n);
    for j in 0..blocks {
        let (u, w) = (&chosen[2 * j], &chosen[2 * j + 1]);
        recon += (u * w.transpose() - w * u.transpose()) * lambdas[j];
    }
    // form norm counts each pair p < q once
    let residual = ((&recon - &m).norm_squared() / 2.0).sqrt();

    let frame = Frame::trusted(DMatrix::from_columns(&chosen));
    Ok(Canonical2Form {
        lambdas,
        frame,
        residual,
    })
}

/// Exact comass of a 2-form: the largest block coefficient.
pub fn comass2(a: &FloatForm) -> Result<f64> {
    Ok(canonicalize(a)?.lambdas.first().copied().unwrap_or(0.0))
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerInequalityReport {
    pub mu: usize,
    /// Optimizer lower bound for the comass of `A^μ`.
    pub lhs_lower_bound: f64,
    /// `μ! · comass(A)^μ`.
    pub rhs: f64,
    pub gap: f64,
    pub holds: bool,
}

/// Checks `‖A^μ‖ ≤ μ! ‖A‖^μ` using the comass engine on `A^μ`.
pub fn verify_power_inequality(
    a: &FloatForm,
    mu: usize,
    cfg: &OptimizerConfig,
) -> Result<PowerInequalityReport> {
    if a.k() != 2 {
        return Err(Error::Degree("power inequality needs a 2-form".into()));
    }
    if mu == 0 || 2 * mu > a.n() {
        return Err(Error::InvalidArgument(format!(
            "power {mu} is out of range for R^{}",
            a.n()
        )));
    }
    let power = a.wedge_power(mu)?;
    let lhs = comass_estimate(&power, cfg)?.value;
    let rhs = factorial_f64(mu) * comass2(a)?.powi(mu as i32);
    let gap = rhs - lhs;
    Ok(PowerInequalityReport {
        mu,
        lhs_lower_bound: lhs,
        rhs,
        gap,
        holds: gap >= -1e-9 * rhs.max(1.0),
    })
}

/// `μ! − ⟨ξ, A^μ⟩` for a unit-comass 2-form `A` and an orthonormal
/// `2μ`-frame `ξ`. Nonnegative up to rounding; zero exactly on complex
/// frames `(v_1, Jv_1, …, v_μ, Jv_μ)`.
pub fn wirtinger_gap(xi: &Frame, a: &FloatForm, mu: usize) -> Result<f64> {
    if xi.k() != 2 * mu {
        return Err(Error::Dimension(format!(
            "need a {}-frame, got {}",
            2 * mu,
            xi.k()
        )));
    }
    let c = comass2(a)?;
    if (c - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "2-form must have unit comass, has {c}"
        )));
    }
    let power = a.wedge_power(mu)?;
    let value = power.evaluate(xi)?;
    Ok(factorial_f64(mu) - value)
}

/// The standard symplectic form `dx_{12} + dx_{34} + …` on R^{2m}.
pub fn standard_symplectic<S: Scalar>(n: usize) -> Result<KForm<S>> {
    KForm::from_terms(n, 2, (0..n / 2).map(|j| (vec![2 * j + 1, 2 * j + 2], S::one())))
}

pub(crate) fn factorial_f64(m: usize) -> f64 {
    num_traits::ToPrimitive::to_f64(&factorial(m as u32)).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_two_form(n: usize, rng: &mut ChaCha8Rng) -> FloatForm {
        let mut terms = Vec::new();
        for p in 1..=n {
            for q in p + 1..=n {
                terms.push((vec![p, q], rng.gen_range(-1.0..1.0)));
            }
        }
        KForm::from_terms(n, 2, terms).unwrap()
    }

    /// Cyclic Jacobi eigenvalue iteration; independent of nalgebra's solver.
    #[allow(clippy::needless_range_loop)]
    fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
        let n = a.len();
        for _ in 0..100 {
            let mut off = 0.0;
            for p in 0..n {
                for q in p + 1..n {
                    off += a[p][q] * a[p][q];
                }
            }
            if off < 1e-30 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for r in 0..n {
                        let (arp, arq) = (a[r][p], a[r][q]);
                        a[r][p] = c * arp - s * arq;
                        a[r][q] = s * arp + c * arq;
                    }
                    for r in 0..n {
                        let (apr, aqr) = (a[p][r], a[q][r]);
                        a[p][r] = c * apr - s * aqr;
                        a[q][r] = s * apr + c * aqr;
                    }
                }
            }
        }
        let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        ev.sort_by(|x, y| y.total_cmp(x));
        ev
    }

    fn oracle_lambdas(a: &FloatForm) -> Vec<f64> {
        let m = skew_matrix(a).unwrap();
        let ata = m.transpose() * &m;
        let rows = (0..ata.nrows())
            .map(|i| (0..ata.ncols()).map(|j| ata[(i, j)]).collect())
            .collect();
        let ev = jacobi_eigenvalues(rows);
        // eigenvalues of AᵀA come in equal pairs λ_j²
        ev.chunks(2).map(|c| c[0].max(0.0).sqrt()).collect()
    }

    #[test]
    fn block_diagonal_example() {
        let a = KForm::from_terms(4, 2, [(vec![1, 2], 3.0), (vec![3, 4], -2.0)]).unwrap();
        let c = canonicalize(&a).unwrap();
        let oracle = oracle_lambdas(&a);
        assert!((oracle[0] - 3.0).abs() < 1e-12 && (oracle[1] - 2.0).abs() < 1e-12);
        assert!((c.lambdas[0] - 3.0).abs() < 1e-12);
        assert!((c.lambdas[1] - 2.0).abs() < 1e-12);
        assert!(c.residual < 1e-12);
        assert!((comass2(&a).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn symplectic_and_zero() {
        let w: FloatForm = standard_symplectic(8).unwrap();
        let c = canonicalize(&w).unwrap();
        for l in &c.lambdas {
            assert!((l - 1.0).abs() < 1e-12);
        }
        let z = FloatForm::zero(6, 2).unwrap();
        let c = canonicalize(&z).unwrap();
        assert_eq!(c.lambdas, vec![0.0; 3]);
        assert_eq!(comass2(&z).unwrap(), 0.0);
        assert!(crate::exterior::orthonormality_defect(c.frame.matrix()) < 1e-12);
        let simple = KForm::monomial(5, &[2, 4], -1.5).unwrap();
        assert!((comass2(&simple).unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(canonicalize(&simple).unwrap().lambdas.len(), 2);
    }

    #[test]
    fn rejects_non_two_forms() {
        let f = FloatForm::monomial(4, &[1, 2, 3], 1.0).unwrap();
        assert!(canonicalize(&f).is_err());
    }

    #[test]
    fn random_forms_reconstruct_and_match_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [4, 5, 6, 8] {
            for _ in 0..200 {
                let a = random_two_form(n, &mut rng);
                let c = canonicalize(&a).unwrap();
                let norm = a.euclidean_norm();
                assert!(c.residual <= 1e-10 * norm, "residual {}", c.residual);
                assert!(crate::exterior::orthonormality_defect(c.frame.matrix()) < 1e-10);
                let oracle = oracle_lambdas(&a);
                for (l, o) in c.lambdas.iter().zip(&oracle) {
                    assert!((l - o).abs() < 1e-9, "{l} vs {o}");
                }
                assert!(c.lambdas.windows(2).all(|w| w[0] >= w[1]));
                let sum_sq: f64 = c.lambdas.iter().map(|l| l * l).sum();
                assert!((sum_sq - a.euclidean_norm_sq()).abs() <= 1e-9 * sum_sq);
                let cm = c.lambdas[0];
                let mu = (n / 2) as f64;
                assert!(cm <= norm + 1e-12 && norm <= mu.sqrt() * cm + 1e-12);
            }
        }
    }

    #[test]
    fn block_frame_reproduces_lambdas() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_two_form(6, &mut rng);
        let c = canonicalize(&a).unwrap();
        for j in 0..3 {
            let cols = c.frame.matrix().columns(2 * j, 2).into_owned();
            let f = Frame::from_matrix(cols).unwrap();
            assert!((a.evaluate(&f).unwrap() - c.lambdas[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn wirtinger_gaps() {
        let w: FloatForm = standard_symplectic(8).unwrap();
        // (e1, J e1, e3, J e3) with J e_{2j-1} = e_{2j}
        let complex = Frame::coordinate(8, &[1, 2, 3, 4]).unwrap();
        assert!(wirtinger_gap(&complex, &w, 2).unwrap().abs() < 1e-12);
        let lagrangian = Frame::coordinate(8, &[1, 3, 5, 7]).unwrap();
        assert!((wirtinger_gap(&lagrangian, &w, 2).unwrap() - 2.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let v: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let u: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let m = DMatrix::from_fn(8, 2, |i, j| if j == 0 { v[i] } else { u[i] });
            let q = m.qr().q();
            let f = Frame::from_matrix(q).unwrap();
            let gap = wirtinger_gap(&f, &w, 1).unwrap();
            assert!(gap >= -1e-12);
            assert!((gap - (1.0 - w.evaluate(&f).unwrap())).abs() < 1e-15);
        }
        let not_unit = w.scale(&2.0);
        assert!(wirtinger_gap(&complex, &not_unit, 2).is_err());
    }
}
