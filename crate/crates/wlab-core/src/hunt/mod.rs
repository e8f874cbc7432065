//! Reduction of self-dual 4-forms on R^8 to the Cartan subspace `𝔥`.
//!
//! For a regular `X ∈ 𝔥` the function `f(k) = ⟨Ad(k)Z, X⟩` on `SO(8)` has
//! gradient `[Ad(k)Z, X]`, so at any critical point `Ad(k)Z` commutes with
//! `X` and therefore lies in `𝔥`. We find one by gradient descent.

mod compound;

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector, SMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::comass::OptimizerConfig;
use crate::e7::{act, bracket_forms, centralizer_in_lambda4plus, Mat8};
use crate::error::{Error, Result};
use crate::exterior::{FloatForm, KForm};
use crate::named::{cartan_basis, cartan_element};
use crate::scalar::{Rational, Scalar};

pub(crate) use compound::fourth_compound;
use compound::quad_basis;

type M8 = SMatrix<f64, 8, 8>;

/// Tolerance for orthogonality and `det = +1`.
pub const ROTATION_TOL: f64 = 1e-12;

/// Tolerance for accepting an input as self-dual, relative to its norm.
pub const SELF_DUAL_TOL: f64 = 1e-10;

/// An element of `SO(8)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rotation(M8);

impl Rotation {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != 8 || m.ncols() != 8 {
            return Err(Error::Dimension(format!("rotation must be 8×8, got {}×{}", m.nrows(), m.ncols())));
        }
        let m = M8::from_fn(|i, j| m[(i, j)]);
        let defect = (m.transpose() * m - M8::identity()).abs().max();
        if defect > ROTATION_TOL {
            return Err(Error::NotRotation(format!("orthogonality defect {defect:.3e}")));
        }
        let det = m.determinant();
        if (det - 1.0).abs() > ROTATION_TOL {
            return Err(Error::NotRotation(format!("determinant {det}")));
        }
        Ok(Rotation(m))
    }

    pub fn identity() -> Self {
        Rotation(M8::identity())
    }

    /// Haar-random rotation from a seeded generator.
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        let g = M8::from_fn(|_, _| StandardNormal.sample(rng));
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for j in 0..8 {
            if r[(j, j)] < 0.0 {
                q.column_mut(j).neg_mut();
            }
        }
        if q.determinant() < 0.0 {
            q.column_mut(0).neg_mut();
        }
        Rotation(q)
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(8, 8, |i, j| self.0[(i, j)])
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..8).map(|i| (0..8).map(|j| self.0[(i, j)]).collect()).collect()
    }

    /// Exponential of a skew matrix times `self`; re-orthonormalized.
    fn left_exp(&self, w: &M8) -> Self {
        let e = w.exp() * self.0;
        Rotation(polish(e))
    }
}

/// Nearest orthogonal matrix by one QR step, keeping the orientation.
fn polish(m: M8) -> M8 {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..8 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

impl Serialize for Rotation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

fn require_lambda4_r8<S: Scalar>(phi: &KForm<S>) -> Result<()> {
    if phi.n() != 8 || phi.k() != 4 {
        return Err(Error::Degree(format!("expected a 4-form on R^8, got a {}-form on R^{}", phi.k(), phi.n())));
    }
    Ok(())
}

fn dense(phi: &FloatForm) -> DVector<f64> {
    DVector::from_vec(phi.to_dense(quad_basis()))
}

fn from_dense(v: &DVector<f64>) -> FloatForm {
    KForm::from_dense(8, 4, quad_basis(), v.as_slice()).expect("70 coefficients")
}

/// `Ad(k)φ`: the induced action `k e_J = Σ_I det k[I, J] e_I` on 4-vectors.
pub fn ad_action(k: &Rotation, phi: &FloatForm) -> Result<FloatForm> {
    require_lambda4_r8(phi)?;
    Ok(from_dense(&(fourth_compound(&k.0) * dense(phi))))
}

/// A regular element of `𝔥` with its integer coordinates.
#[derive(Debug, Clone)]
pub struct RegularElement {
    pub coords: [i64; 7],
    pub form: KForm<Rational>,
    /// Number of candidates rejected before this one.
    pub perturbations: usize,
}

const MAX_REGULAR_ATTEMPTS: usize = 10;

/// `X = Σ i·h_i`, verified to have centralizer exactly `𝔥` in `Λ⁴₊`.
///
/// If a candidate fails, the next is the window of seven consecutive primes
/// shifted by one (2,3,…,17, then 3,5,…,19, …).
pub fn regular_element() -> &'static RegularElement {
    static X: OnceLock<RegularElement> = OnceLock::new();
    X.get_or_init(|| {
        let primes = first_primes(7 + MAX_REGULAR_ATTEMPTS);
        for attempt in 0..MAX_REGULAR_ATTEMPTS {
            let coords: [i64; 7] = if attempt == 0 {
                [1, 2, 3, 4, 5, 6, 7]
            } else {
                std::array::from_fn(|i| primes[attempt - 1 + i])
            };
            if centralizer_dimension(&coords) == 7 {
                let q: Vec<Rational> = coords.iter().map(|&c| Rational::from_i64(c)).collect();
                return RegularElement {
                    coords,
                    form: cartan_element(&q),
                    perturbations: attempt,
                };
            }
        }
        panic!("no regular element of the Cartan subspace after {MAX_REGULAR_ATTEMPTS} candidates");
    })
}

/// Dimension of the centralizer in `Λ⁴₊` of `Σ c_i h_i`.
pub fn centralizer_dimension(coords: &[i64; 7]) -> usize {
    let q: Vec<Rational> = coords.iter().map(|&c| Rational::from_i64(c)).collect();
    centralizer_in_lambda4plus(&[cartan_element(&q)]).len()
}

fn first_primes(count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut n = 2i64;
    while out.len() < count {
        if (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0) {
            out.push(n);
        }
        n += 1;
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct HuntResult {
    pub k: Rotation,
    /// Coordinates of `Ad(k)Z` in the basis `h_1, …, h_7`.
    pub coords: [f64; 7],
    /// Norm of the part of `Ad(k)Z` orthogonal to `𝔥`.
    pub membership_residual: f64,
    /// Norm of `[Ad(k)Z, X]` for the unit-normalized input.
    pub gradient_residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `⟨Ad(k)Z, X⟩` at the returned rotation.
    pub objective: f64,
    /// Starting points tried (the identity first, then seeded random ones).
    pub starts: usize,
    /// Objective after each accepted step of the successful start.
    #[serde(skip)]
    pub objective_trace: Vec<f64>,
}

impl HuntResult {
    /// `Σ c_i h_i` for the returned coordinates.
    pub fn reduced_form(&self) -> FloatForm {
        cartan_element(&self.coords)
    }
}

/// Number of seeded random starts tried after the identity fails.
const EXTRA_STARTS: usize = 3;

/// Conjugates a self-dual 4-form into `𝔥` by descent on `f(k) = ⟨Ad(k)Z, X⟩`.
///
/// The input is normalized to unit length internally; `cfg.grad_tol`
/// applies to `|[Ad(k)Z, X]|` for that normalized form.
pub fn reduce_to_cartan(z: &FloatForm, cfg: &OptimizerConfig) -> Result<HuntResult> {
    cfg.validate()?;
    require_lambda4_r8(z)?;
    let norm = z.euclidean_norm();
    let sd_defect = (z - &z.hodge_star()).euclidean_norm();
    if sd_defect > SELF_DUAL_TOL * norm.max(1.0) {
        return Err(Error::NotSelfDual(sd_defect));
    }
    if norm == 0.0 {
        return Ok(HuntResult {
            k: Rotation::identity(),
            coords: [0.0; 7],
            membership_residual: 0.0,
            gradient_residual: 0.0,
            iterations: 0,
            converged: true,
            objective: 0.0,
            starts: 1,
            objective_trace: vec![0.0],
        });
    }
    let zn = dense(&z.scale(&(1.0 / norm)));
    let x = regular_element().form.to_float();
    let xv = dense(&x);
    let mut best: Option<Descent> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for start in 0..=EXTRA_STARTS {
        let k0 = if start == 0 {
            Rotation::identity()
        } else {
            rng.set_stream(start as u64);
            Rotation::random(&mut rng)
        };
        let run = descend(&zn, &x, &xv, k0, cfg)?;
        let done = run.grad_norm <= cfg.grad_tol;
        if best.as_ref().is_none_or(|b| run.grad_norm < b.grad_norm) {
            best = Some(Descent { starts: start + 1, ..run });
        }
        if done {
            break;
        }
    }
    let run = best.expect("at least one start");
    let y = from_dense(&(fourth_compound(&run.k.0) * &zn));
    let h = cartan_basis();
    // h_i are orthogonal with |h_i|² = 2
    let coords: [f64; 7] = std::array::from_fn(|i| y.dot(&h[i].to_float()).expect("same shape") / 2.0);
    let residual = (&y - &cartan_element(&coords)).euclidean_norm();
    Ok(HuntResult {
        k: run.k,
        coords: coords.map(|c| c * norm),
        membership_residual: residual * norm,
        gradient_residual: run.grad_norm,
        iterations: run.iterations,
        converged: run.grad_norm <= cfg.grad_tol,
        objective: run.trace.last().copied().unwrap_or(0.0) * norm,
        starts: run.starts,
        objective_trace: run.trace.iter().map(|f| f * norm).collect(),
    })
}

struct Descent {
    k: Rotation,
    grad_norm: f64,
    iterations: usize,
    trace: Vec<f64>,
    starts: usize,
}

/// Objective and Lie-algebra gradient at `k`.
///
/// Moving `k` to `exp(tW)k` changes `f` at rate `tr(W G)` with
/// `G = [Ad(k)Z, X]`; for skew `W` that is `−⟨W, G_skew⟩`, so the steepest
/// descent direction is `W = G_skew`.
fn evaluate(z: &DVector<f64>, x: &FloatForm, xv: &DVector<f64>, k: &Rotation) -> Result<(f64, M8)> {
    let yv = fourth_compound(&k.0) * z;
    let drift = (yv.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::Verification(format!("Ad(k) changed the norm by {drift:.3e}")));
    }
    let f = yv.dot(xv);
    let g = bracket_forms(&from_dense(&yv), x);
    let g = M8::from_fn(|i, j| *g.get(i, j));
    let sym = (g + g.transpose()) * 0.5;
    // [p, p] ⊆ k: the symmetric part vanishes up to rounding
    if sym.norm() > 1e-10 * xv.norm() {
        return Err(Error::Verification(format!("bracket has symmetric part {:.3e}", sym.norm())));
    }
    Ok((f, (g - g.transpose()) * 0.5))
}

fn descend(z: &DVector<f64>, x: &FloatForm, xv: &DVector<f64>, mut k: Rotation, cfg: &OptimizerConfig) -> Result<Descent> {
    let (mut f, mut g) = evaluate(z, x, xv, &k)?;
    let mut gnorm = g.norm();
    let mut trace = vec![f];
    let mut step = 1.0 / xv.norm();
    let mut prev: Option<(M8, M8)> = None;
    let mut iterations = 0;
    // first-order phase until the basin of a minimum is reached
    let switch = NEWTON_SWITCH * xv.norm();
    while iterations < cfg.max_iters && gnorm > switch {
        iterations += 1;
        if let Some((s, dy)) = &prev {
            // Barzilai–Borwein: gradient of f in W is −G
            let sy = -s.dot(dy);
            if sy > 0.0 {
                step = (s.norm_squared() / sy).clamp(1e-8, 1e3);
            }
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = k.left_exp(&(g * t));
            let (fc, gc) = evaluate(z, x, xv, &cand)?;
            let required = cfg.armijo_c * t * gnorm * gnorm;
            let noise = 1e-14 * f.abs().max(1.0);
            let ok = f - fc >= required || (required < noise && fc <= f && gc.norm() < gnorm);
            if ok {
                accepted = Some((cand, fc, gc, t));
                break;
            }
            t *= cfg.backtrack;
        }
        let Some((cand, fc, gc, t)) = accepted else {
            break;
        };
        prev = Some((g * t, gc - g));
        step = t;
        k = cand;
        f = fc;
        g = gc;
        gnorm = g.norm();
        trace.push(f);
    }
    // Newton phase: descent stalls along directions where the orbit is
    // nearly singular, so finish with Newton steps on the gradient
    while iterations < cfg.max_iters && gnorm > cfg.grad_tol {
        iterations += 1;
        let Some(step) = newton_step(z, x, &k) else {
            break;
        };
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = k.left_exp(&(step * t));
            let (fc, gc) = evaluate(z, x, xv, &cand)?;
            // the objective never increases, not even by rounding
            if gc.norm() < gnorm && fc <= f {
                accepted = Some((cand, fc, gc));
                break;
            }
            t *= 0.5;
        }
        let Some((cand, fc, gc)) = accepted else {
            break;
        };
        k = cand;
        f = fc;
        g = gc;
        gnorm = g.norm();
        trace.push(f);
    }
    Ok(Descent {
        k,
        grad_norm: gnorm,
        iterations,
        trace,
        starts: 1,
    })
}

/// Gradient norm, relative to `|X|`, below which descent hands over to Newton.
const NEWTON_SWITCH: f64 = 1e-4;

fn so8_basis() -> Vec<(usize, usize)> {
    (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))).collect()
}

fn skew_unit(i: usize, j: usize) -> Mat8<f64> {
    let mut w = Mat8::zero();
    w.set(i, j, 1.0);
    w.set(j, i, -1.0);
    w
}

/// Newton step in `so(8)` for the critical-point equation of `f`.
///
/// With `W_a = E_ij − E_ji`, the derivative of `f` along `W_a` is
/// `g_a = tr(W_a G) = G_ji − G_ij`, and moving along `W_b` changes `G`
/// by `[W_b · Y, X]`. Near a critical point this Jacobian is the Hessian.
/// Solved by a pseudo-inverse so that flat directions are left alone.
fn newton_step(z: &DVector<f64>, x: &FloatForm, k: &Rotation) -> Option<M8> {
    let y = from_dense(&(fourth_compound(&k.0) * z));
    let basis = so8_basis();
    let component = |m: &Mat8<f64>, (i, j): (usize, usize)| m.get(j, i) - m.get(i, j);
    let g0 = bracket_forms(&y, x);
    let grad = DVector::from_iterator(basis.len(), basis.iter().map(|&p| component(&g0, p)));
    let mut jac = DMatrix::zeros(basis.len(), basis.len());
    for (b, &(i, j)) in basis.iter().enumerate() {
        let dg = bracket_forms(&act(&skew_unit(i, j), &y), x);
        for (a, &p) in basis.iter().enumerate() {
            jac[(a, b)] = component(&dg, p);
        }
    }
    let svd = jac.svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    let s = svd.solve(&(-grad), cutoff).ok()?;
    let mut w = M8::zeros();
    for (b, &(i, j)) in basis.iter().enumerate() {
        w[(i, j)] += s[b];
        w[(j, i)] -= s[b];
    }
    Some(w)
}

#[cfg(test)]
mod tests;
