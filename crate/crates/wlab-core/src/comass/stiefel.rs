//! Projected-gradient ascent on the Stiefel manifold of orthonormal k-frames.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::OptimizerConfig;
use crate::exterior::{det_small, FloatForm};

/// Dense term list of a form: row indices of each monomial and its coefficient.
pub(crate) struct TermTable {
    n: usize,
    k: usize,
    rows: Vec<usize>,
    coeffs: Vec<f64>,
}

impl TermTable {
    pub fn new(phi: &FloatForm) -> Self {
        let mut rows = Vec::with_capacity(phi.num_terms() * phi.k());
        let mut coeffs = Vec::with_capacity(phi.num_terms());
        for (m, c) in phi.terms() {
            rows.extend(m.rows());
            coeffs.push(*c);
        }
        TermTable {
            n: phi.n(),
            k: phi.k(),
            rows,
            coeffs,
        }
    }

    /// `f(V) = Σ_I c_I det V[I, :]` and its Euclidean gradient.
    pub fn value_and_grad(&self, v: &DMatrix<f64>) -> (f64, DMatrix<f64>) {
        let k = self.k;
        let mut grad = DMatrix::zeros(self.n, k);
        let mut value = 0.0;
        let mut sub = [0.0f64; 64];
        let mut minor = [0.0f64; 64];
        for (t, &c) in self.coeffs.iter().enumerate() {
            let rows = &self.rows[t * k..(t + 1) * k];
            for (r, &row) in rows.iter().enumerate() {
                for col in 0..k {
                    sub[r * k + col] = v[(row, col)];
                }
            }
            // cofactor expansion along each row gives both det and gradient
            for (r, &row) in rows.iter().enumerate() {
                for col in 0..k {
                    let mut w = 0;
                    for rr in 0..k {
                        if rr == r {
                            continue;
                        }
                        for cc in 0..k {
                            if cc == col {
                                continue;
                            }
                            minor[w] = sub[rr * k + cc];
                            w += 1;
                        }
                    }
                    let sign = if (r + col) % 2 == 0 { 1.0 } else { -1.0 };
                    let cof = sign * det_minor(&mut minor[..(k - 1) * (k - 1)], k - 1);
                    grad[(row, col)] += c * cof;
                    if r == 0 {
                        value += c * sub[col] * cof;
                    }
                }
            }
        }
        (value, grad)
    }

    #[cfg(test)]
    pub fn value(&self, v: &DMatrix<f64>) -> f64 {
        let k = self.k;
        let mut sub = [0.0f64; 64];
        let mut total = 0.0;
        for (t, &c) in self.coeffs.iter().enumerate() {
            let rows = &self.rows[t * k..(t + 1) * k];
            for (r, &row) in rows.iter().enumerate() {
                for col in 0..k {
                    sub[r * k + col] = v[(row, col)];
                }
            }
            total += c * det_small(&mut sub[..k * k], k);
        }
        total
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

/// Closed forms up to 3×3, elimination beyond.
#[inline]
fn det_minor(a: &mut [f64], m: usize) -> f64 {
    match m {
        0 => 1.0,
        1 => a[0],
        2 => a[0] * a[3] - a[1] * a[2],
        3 => {
            a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6])
                + a[2] * (a[3] * a[7] - a[4] * a[6])
        }
        _ => det_small(a, m),
    }
}

/// Tangent projection `G − V sym(VᵀG)` for the embedded metric.
pub(crate) fn project_tangent(v: &DMatrix<f64>, g: &DMatrix<f64>) -> DMatrix<f64> {
    let vtg = v.transpose() * g;
    let sym = (&vtg + vtg.transpose()) * 0.5;
    g - v * sym
}

/// Q factor of the thin QR decomposition with `diag(R) > 0`.
pub(crate) fn qr_retract(m: DMatrix<f64>) -> DMatrix<f64> {
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..q.ncols() {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

pub(crate) fn random_frame(n: usize, k: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, k, |_, _| StandardNormal.sample(rng));
    qr_retract(g)
}

pub(crate) struct AscentRun {
    pub value: f64,
    pub frame: DMatrix<f64>,
    pub residual: f64,
    pub converged: bool,
}

pub(crate) fn ascend_from_random(table: &TermTable, cfg: &OptimizerConfig, stream: u64) -> AscentRun {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let v0 = random_frame(table.n(), table.k(), &mut rng);
    ascend(table, cfg, v0)
}

/// Armijo-backtracking ascent from `v`, with a Barzilai–Borwein guess for
/// the initial trial step.
pub(crate) fn ascend(table: &TermTable, cfg: &OptimizerConfig, mut v: DMatrix<f64>) -> AscentRun {
    let (mut f, g_e) = table.value_and_grad(&v);
    let mut g = project_tangent(&v, &g_e);
    let mut gnorm = g.norm();
    let mut step = 1.0;
    let mut prev: Option<(DMatrix<f64>, DMatrix<f64>)> = None;
    for _ in 0..cfg.max_iters {
        if gnorm <= cfg.grad_tol {
            break;
        }
        if let Some((dv, dg)) = &prev {
            // ascent: curvature along the step is −⟨dv, dg⟩
            let sy = -dv.dot(dg);
            if sy > 0.0 {
                step = (dv.norm_squared() / sy).clamp(1e-6, 1e3);
            }
        }
        let mut t = step;
        let mut accepted = None;
        for _ in 0..60 {
            let cand = qr_retract(&v + &g * t);
            let (fc, gc_e) = table.value_and_grad(&cand);
            let gc = project_tangent(&cand, &gc_e);
            let gain = fc - f;
            let required = cfg.armijo_c * t * gnorm * gnorm;
            // Once the predicted gain is below rounding in f, judge the step
            // by the gradient norm instead.
            let noise = 1e-14 * f.abs().max(1.0);
            let ok = gain >= required || (required < noise && gain > -noise && gc.norm() < gnorm);
            if ok {
                accepted = Some((cand, fc, gc, t));
                break;
            }
            t *= cfg.backtrack;
        }
        let Some((cand, fc, gc, t)) = accepted else {
            break;
        };
        let dv = &cand - &v;
        let dg = &gc - &g;
        prev = Some((dv, dg));
        step = t;
        v = cand;
        f = fc;
        g = gc;
        gnorm = g.norm();
    }
    AscentRun {
        value: f,
        frame: v,
        residual: gnorm,
        converged: gnorm <= cfg.grad_tol,
    }
}

/// Newton iterations in the chart `X ↦ qf(V + V⊥X)` of the Grassmannian
/// around `v`, finishing an ascent whose maximum is poorly conditioned.
///
/// Since `f` is alternating multilinear in the columns,
/// `f(qf(M)) = f(M) / √det(MᵀM)`, and `MᵀM = I + XᵀX` in this chart.
pub(crate) fn newton_polish(table: &TermTable, v: DMatrix<f64>, max_steps: usize) -> AscentRun {
    let mut v = v;
    let (mut f, g) = table.value_and_grad(&v);
    let mut residual = project_tangent(&v, &g).norm();
    for _ in 0..max_steps {
        let chart = Chart::new(&v);
        let g0 = chart.grad(table, &DMatrix::zeros(chart.m, chart.k));
        if g0.norm() < 1e-14 * f.abs().max(1.0) {
            break;
        }
        let dim = chart.m * chart.k;
        let h = 1e-6;
        let mut hess = DMatrix::zeros(dim, dim);
        for a in 0..dim {
            let mut e = DMatrix::zeros(chart.m, chart.k);
            e[a] = h;
            let gp = chart.grad(table, &e);
            let gm = chart.grad(table, &(-e));
            hess.set_column(a, &((gp - gm) / (2.0 * h)).reshape_generic(nalgebra::Dyn(dim), nalgebra::Const::<1>));
        }
        let hess = (&hess + hess.transpose()) * 0.5;
        let eig = hess.symmetric_eigen();
        let gvec = g0.clone().reshape_generic(nalgebra::Dyn(dim), nalgebra::Const::<1>);
        let scale = eig.eigenvalues.abs().max().max(1e-300);
        let mut step = nalgebra::DVector::zeros(dim);
        for (i, &lam) in eig.eigenvalues.iter().enumerate() {
            let u = eig.eigenvectors.column(i);
            let comp = u.dot(&gvec);
            // Newton on concave directions, a gradient step elsewhere
            let d = if lam < -1e-10 * scale { -comp / lam } else { comp / scale };
            step += u * d;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..20 {
            let x = (&step * t).reshape_generic(nalgebra::Dyn(chart.m), nalgebra::Dyn(chart.k));
            let cand = qr_retract(&chart.v + &chart.perp * x);
            let (fc, gc) = table.value_and_grad(&cand);
            let rc = project_tangent(&cand, &gc).norm();
            let noise = 1e-14 * f.abs().max(1.0);
            if fc > f + noise || (fc > f - noise && rc < residual) {
                v = cand;
                f = fc;
                residual = rc;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    AscentRun {
        value: f,
        frame: v,
        residual,
        converged: residual <= 1e-8 * f.abs().max(1.0),
    }
}

/// Coordinates around a frame: `V` and an orthonormal complement `V⊥`.
struct Chart {
    v: DMatrix<f64>,
    perp: DMatrix<f64>,
    m: usize,
    k: usize,
}

impl Chart {
    fn new(v: &DMatrix<f64>) -> Self {
        let (n, k) = v.shape();
        let mut full = DMatrix::zeros(n, n);
        full.columns_mut(0, k).copy_from(v);
        // complete with coordinate vectors; QR keeps the first k columns up to sign
        for j in k..n {
            full[(j - k, j)] = 1.0;
        }
        let mut q = full.clone();
        for j in k..n {
            let mut col = q.column(j).into_owned();
            for i in 0..j {
                let d = q.column(i).dot(&col);
                col -= q.column(i) * d;
            }
            // fall back to other coordinate vectors when degenerate
            let mut tries = 0;
            while col.norm() < 1e-6 && tries < n {
                col = DMatrix::<f64>::zeros(n, 1).column(0).into_owned();
                col[tries] = 1.0;
                for i in 0..j {
                    let d = q.column(i).dot(&col);
                    col -= q.column(i) * d;
                }
                tries += 1;
            }
            let norm = col.norm();
            q.set_column(j, &(col / norm));
        }
        Chart {
            v: v.clone(),
            perp: q.columns(k, n - k).into_owned(),
            m: n - k,
            k,
        }
    }

    /// Gradient of `F(X) = f(V + V⊥X) / √det(I + XᵀX)`.
    fn grad(&self, table: &TermTable, x: &DMatrix<f64>) -> DMatrix<f64> {
        let m = &self.v + &self.perp * x;
        let (f, g) = table.value_and_grad(&m);
        let gram = DMatrix::identity(self.k, self.k) + x.transpose() * x;
        let det = gram.determinant();
        let inv = gram.try_inverse().expect("I + XᵀX is positive definite");
        (self.perp.transpose() * g - x * inv * f) / det.sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{Frame, KForm};

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = KForm::from_terms(
            6,
            3,
            [
                (vec![1, 2, 3], 1.0),
                (vec![1, 4, 5], -0.7),
                (vec![2, 4, 6], 0.3),
                (vec![3, 5, 6], 2.0),
            ],
        )
        .unwrap();
        let table = TermTable::new(&phi);
        let v = random_frame(6, 3, &mut rng);
        let (f, g) = table.value_and_grad(&v);
        assert!((f - phi.evaluate(&Frame::from_matrix(v.clone()).unwrap()).unwrap()).abs() < 1e-14);
        assert!((f - table.value(&v)).abs() < 1e-14);
        let h = 1e-6;
        for i in 0..6 {
            for j in 0..3 {
                let mut vp = v.clone();
                vp[(i, j)] += h;
                let mut vm = v.clone();
                vm[(i, j)] -= h;
                let fd = (table.value(&vp) - table.value(&vm)) / (2.0 * h);
                assert!((fd - g[(i, j)]).abs() < 1e-8, "{fd} vs {}", g[(i, j)]);
            }
        }
    }

    #[test]
    fn newton_polish_reaches_the_degenerate_maximum() {
        // nearly tied maxima make plain ascent crawl
        let c = [1.0, 1.0, 1.0, -1.0, 1.0, 1.0, 1.0001];
        let phi = crate::named::cartan_element(&c);
        let table = TermTable::new(&phi);
        let cfg = OptimizerConfig::default();
        let mut best = f64::MIN;
        for s in 0..8 {
            let run = ascend_from_random(&table, &cfg, s);
            let polished = newton_polish(&table, run.frame.clone(), 30);
            assert!(polished.value >= run.value - 1e-15);
            best = best.max(polished.value);
        }
        let oracle = super::super::comass_oracle(&phi, 2000);
        assert!(best >= oracle - 1e-12, "{best} vs {oracle}");
    }

    #[test]
    fn retraction_is_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = random_frame(8, 4, &mut rng);
        assert!(crate::exterior::orthonormality_defect(&v) < 1e-14);
        let t = project_tangent(&v, &DMatrix::from_element(8, 4, 0.3));
        // tangent vectors satisfy VᵀT + TᵀV = 0
        let s = v.transpose() * &t;
        assert!((&s + s.transpose()).norm() < 1e-14);
    }
}
