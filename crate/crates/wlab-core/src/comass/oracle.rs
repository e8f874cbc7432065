//! Sampling oracle for comass lower bounds.
//!
//! Frames are drawn uniformly (Gram–Schmidt on Gaussian matrices); the best
//! few are refined by sweeps of plane rotations. Along a rotation in the
//! `(e_p, e_q)` plane every minor is affine in `(cos θ, sin θ)`, so the
//! objective is `a + b cos θ + c sin θ` and each plane step is solved exactly.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::exterior::{det_small, FloatForm};

pub const ORACLE_SEED: u64 = 0x5eed_0ac1e;

/// Number of sampled frames that get refined.
const REFINED: usize = 8;
const MAX_SWEEPS: usize = 2000;

pub fn comass_oracle(phi: &FloatForm, samples: usize) -> f64 {
    comass_oracle_seeded(phi, samples, ORACLE_SEED)
}

pub fn comass_oracle_seeded(phi: &FloatForm, samples: usize, seed: u64) -> f64 {
    let (n, k) = (phi.n(), phi.k());
    if phi.is_zero() {
        return 0.0;
    }
    if k == 0 || k == n {
        return phi.terms().next().map_or(0.0, |(_, c)| c.abs());
    }
    let terms = Terms::new(phi);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut best: Vec<(f64, Vec<Vec<f64>>)> = Vec::with_capacity(REFINED + 1);
    for _ in 0..samples.max(1) {
        let vecs = gaussian_orthonormal(n, k, &mut rng);
        let val = eval(&terms, &vecs);
        if best.len() < REFINED || val > best.last().unwrap().0 {
            best.push((val, vecs));
            best.sort_by(|a, b| b.0.total_cmp(&a.0));
            best.truncate(REFINED);
        }
    }
    best.into_iter()
        .map(|(_, vecs)| refine(&terms, n, vecs))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Modified Gram–Schmidt on k Gaussian vectors.
fn gaussian_orthonormal(n: usize, k: usize, rng: &mut ChaCha20Rng) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(k);
    while out.len() < k {
        let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
        for u in &out {
            let d: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= d * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            v.iter_mut().for_each(|x| *x /= norm);
            out.push(v);
        }
    }
    out
}

/// Monomials of the form as (0-based rows, coefficient).
struct Terms(Vec<(Vec<usize>, f64)>);

impl Terms {
    fn new(phi: &FloatForm) -> Self {
        Terms(phi.terms().map(|(m, c)| (m.rows().collect(), *c)).collect())
    }
}

fn eval(terms: &Terms, vecs: &[Vec<f64>]) -> f64 {
    let k = vecs.len();
    let mut buf = [0.0f64; 64];
    let mut total = 0.0;
    for (rows, c) in &terms.0 {
        for (r, &row) in rows.iter().enumerate() {
            for (col, v) in vecs.iter().enumerate() {
                buf[r * k + col] = v[row];
            }
        }
        total += c * det_small(&mut buf[..k * k], k);
    }
    total
}

/// Applies the rotation by `theta` in the `(p, q)` coordinate plane to
/// every frame vector.
fn rotate(vecs: &mut [Vec<f64>], p: usize, q: usize, theta: f64) {
    let (s, c) = theta.sin_cos();
    for v in vecs.iter_mut() {
        let (a, b) = (v[p], v[q]);
        v[p] = c * a - s * b;
        v[q] = s * a + c * b;
    }
}

fn refine(terms: &Terms, n: usize, mut vecs: Vec<Vec<f64>>) -> f64 {
    let mut f = eval(terms, &vecs);
    for _ in 0..MAX_SWEEPS {
        let start = f;
        for p in 0..n {
            for q in p + 1..n {
                let f0 = f;
                let mut probe = vecs.clone();
                rotate(&mut probe, p, q, std::f64::consts::FRAC_PI_2);
                let f_half = eval(terms, &probe);
                rotate(&mut probe, p, q, std::f64::consts::FRAC_PI_2);
                let f_pi = eval(terms, &probe);
                let b = (f0 - f_pi) / 2.0;
                let c = f_half - (f0 + f_pi) / 2.0;
                let theta = c.atan2(b);
                let mut cand = vecs.clone();
                rotate(&mut cand, p, q, theta);
                let fc = eval(terms, &cand);
                if fc > f {
                    vecs = cand;
                    f = fc;
                }
            }
        }
        if f - start <= 1e-15 * f.abs().max(1.0) {
            break;
        }
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::KForm;

    #[test]
    fn simple_forms_have_norm_comass() {
        let f = KForm::monomial(6, &[2, 3, 5], -2.5).unwrap();
        assert!((comass_oracle(&f, 50) - 2.5).abs() < 1e-6);
    }

    #[test]
    fn plane_rotation_objective_is_first_order_trigonometric() {
        let f = KForm::from_terms(5, 2, [(vec![1, 2], 1.0), (vec![2, 3], 0.5), (vec![1, 5], -1.0)]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let vecs = gaussian_orthonormal(5, 2, &mut rng);
        let terms = Terms::new(&f);
        let at = |t: f64| {
            let mut v = vecs.clone();
            rotate(&mut v, 0, 1, t);
            eval(&terms, &v)
        };
        let (f0, fh, fp) = (at(0.0), at(std::f64::consts::FRAC_PI_2), at(std::f64::consts::PI));
        let (a, b, c) = ((f0 + fp) / 2.0, (f0 - fp) / 2.0, fh - (f0 + fp) / 2.0);
        for t in [0.3, 1.1, 2.7, -0.8] {
            assert!((at(t) - (a + b * t.cos() + c * t.sin())).abs() < 1e-12);
        }
    }
}
