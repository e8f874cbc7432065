//! Wirtinger constants: the largest ratio `|ω ∧ ω| / ‖ω‖²` over middle
//! degree forms on R^{2n}, for `n = 2` and `n = 4`.
//!
//! For `n = 4` the search runs over the Cartan subspace `𝔥`. Every
//! self-dual form is conjugate into `𝔥`, anti-self-dual forms reduce to
//! self-dual ones by reversing orientation, and a general form never beats
//! its dominant self-dual or anti-self-dual part (see
//! [`selfdual_chain_check`]). On `𝔥` the ratio is `2|c|² / ‖Σ c_i h_i‖²`.

mod constants;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::canonical2::comass2;
use crate::comass::{comass_estimate, OptimizerConfig, WarmComass};
use crate::error::{Error, Result};
use crate::exterior::{subsets, FloatForm, KForm};
use crate::named::{cartan_basis, cartan_element, omega_i};
use crate::scalar::{rational_to_string, Rational, Scalar};

pub use constants::{
    cp_symmetric_ratio, gromov_constant, hp_symmetric_ratio, s4b, systolic_constants, SystolicConstant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    #[serde(rename = "exact-2form")]
    Exact2form,
    CartanSearch,
    RandomSampling,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Exact2form => "exact-2form",
            Method::CartanSearch => "cartan-search",
            Method::RandomSampling => "random-sampling",
        })
    }
}

/// An exact upper bound together with where it comes from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bound {
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    pub provenance: String,
}

pub(crate) fn ser_rational<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_to_string(q))
}

#[derive(Debug, Clone, Serialize)]
pub struct WirtingerReport {
    pub n: usize,
    /// `|w ∧ w| / ‖w‖²` for the witness `w`.
    pub estimate: f64,
    pub witness_form: FloatForm,
    /// Cartan coordinates of the witness, when it lies in `𝔥`.
    pub witness_coords: Option<[f64; 7]>,
    /// Comass of the witness, re-evaluated with a full restart budget.
    pub witness_comass: f64,
    pub method: Method,
    pub upper_bound: Option<Bound>,
    /// Comass evaluations spent by the search.
    pub evaluations: usize,
}

/// Budget of the `𝔥` search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Independent random starting points of the outer search.
    pub outer_starts: usize,
    /// Maximum descent steps per start.
    pub max_steps: usize,
    /// Nearby points sampled per step to estimate the subdifferential.
    pub samples: usize,
    /// Initial and final sampling radius.
    pub initial_radius: f64,
    pub final_radius: f64,
    /// Min-norm subgradient length at which the radius is reduced.
    pub stationarity_tol: f64,
    /// Least-squares vertex refinements after the descent, and the
    /// supporting planes sampled for each.
    pub polish_rounds: usize,
    pub polish_samples: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            outer_starts: 3,
            max_steps: 60,
            samples: 10,
            initial_radius: 0.1,
            final_radius: 1e-2,
            stationarity_tol: 1e-3,
            polish_rounds: 4,
            polish_samples: 30,
        }
    }
}

/// `W_2` exactly, or `W_4` by search over `𝔥`.
pub fn wirtinger_constant(n: usize, cfg: &OptimizerConfig) -> Result<WirtingerReport> {
    wirtinger_constant_with(n, cfg, &SearchConfig::default())
}

pub fn wirtinger_constant_with(n: usize, cfg: &OptimizerConfig, search: &SearchConfig) -> Result<WirtingerReport> {
    cfg.validate()?;
    match n {
        2 => Ok(wirtinger_two()),
        4 => wirtinger_four(cfg, search),
        _ => Err(Error::InvalidArgument(format!("Wirtinger constants are implemented for n = 2 and 4, not {n}"))),
    }
}

/// On R^4 a 2-form is `λ₁ dx12 + λ₂ dx34` in a suitable frame, with
/// `|ω ∧ ω| = 2|λ₁λ₂|` and comass `max |λ_i|`, so the ratio is at most 2,
/// attained at `λ₁ = λ₂`.
fn wirtinger_two() -> WirtingerReport {
    let witness: FloatForm = KForm::from_terms(4, 2, [(vec![1, 2], 1.0), (vec![3, 4], 1.0)]).expect("2-form on R^4");
    let comass = comass2(&witness).expect("2-form");
    let sq = witness.wedge(&witness).expect("R^4").euclidean_norm();
    WirtingerReport {
        n: 2,
        estimate: sq / (comass * comass),
        witness_form: witness,
        witness_coords: None,
        witness_comass: comass,
        method: Method::Exact2form,
        upper_bound: Some(Bound {
            value: Rational::from_i64(2),
            provenance: "2|λ₁λ₂| ≤ 2 max(λ₁, λ₂)² for the normal form λ₁dx12 + λ₂dx34".into(),
        }),
        evaluations: 1,
    }
}

/// `2|c|² / ‖Σ c_i h_i‖²` with a full-budget comass.
pub fn cartan_ratio(coords: &[f64; 7], cfg: &OptimizerConfig) -> Result<f64> {
    let h = cartan_element(coords);
    let comass = comass_estimate(&h, cfg)?.value;
    Ok(2.0 * norm_sq(coords) / (comass * comass))
}

/// The ratio on the line through the Cartan coordinates of `τ²`, `τ` a
/// Kähler form.
pub fn kahler_restricted_ratio(cfg: &OptimizerConfig) -> Result<f64> {
    let tau_sq = omega_i().wedge(&omega_i())?;
    cartan_ratio(&cartan_coords(&tau_sq.to_float())?, cfg)
}

/// Coordinates `c_i = ⟨φ, h_i⟩ / 2` of the orthogonal projection onto `𝔥`,
/// erroring if `φ` is not in `𝔥`.
pub fn cartan_coords(phi: &FloatForm) -> Result<[f64; 7]> {
    let h = cartan_basis();
    let c: [f64; 7] = std::array::from_fn(|i| phi.dot(&h[i].to_float()).unwrap_or(f64::NAN) / 2.0);
    let off = (phi - &cartan_element(&c)).euclidean_norm();
    if off.is_nan() || off > 1e-12 * phi.euclidean_norm().max(1.0) {
        return Err(Error::InvalidArgument(format!("form is not in the Cartan subspace (distance {off:.3e})")));
    }
    Ok(c)
}

fn norm_sq(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum()
}

/// `g(c) = ‖Σ c_i h_i‖ / |c|` on the unit sphere, to be minimized.
///
/// On the sphere a maximizing frame `ξ` gives the gradient
/// `p − (c·p) c` with `p_i = h_i(ξ)`, wherever the maximizer is unique.
struct Objective {
    warm: WarmComass,
    basis: Vec<FloatForm>,
    evaluations: usize,
}

impl Objective {
    /// Value and (sampled) gradient at a unit vector.
    fn at(&mut self, c: &[f64; 7]) -> (f64, [f64; 7]) {
        let (value, p) = self.support(c);
        let cp = dot(c, &p);
        (value, std::array::from_fn(|i| p[i] - cp * c[i]))
    }

    /// Value and the supporting functional `p_i = h_i(ξ)` of a maximizing frame.
    fn support(&mut self, c: &[f64; 7]) -> (f64, [f64; 7]) {
        self.evaluations += 1;
        let Some((value, frame)) = self.warm.evaluate_with_frame(&cartan_element(c)) else {
            return (0.0, [0.0; 7]);
        };
        (value, std::array::from_fn(|i| self.basis[i].evaluate(&frame).expect("4-frame in R^8")))
    }
}

fn dot(a: &[f64; 7], b: &[f64; 7]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn wirtinger_four(cfg: &OptimizerConfig, search: &SearchConfig) -> Result<WirtingerReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let inner = OptimizerConfig {
        restarts: 1,
        max_iters: 60,
        grad_tol: 1e-7,
        ..cfg.clone()
    };
    let basis: Vec<FloatForm> = cartan_basis().iter().map(|h| h.to_float()).collect();
    let mut evaluations = 0;
    let mut best: Option<([f64; 7], f64)> = None;
    for start in 0..search.outer_starts {
        let mut obj = Objective {
            warm: WarmComass::new(&inner.clone().with_seed(cfg.seed.wrapping_add(start as u64 + 1)), 3, 2),
            basis: basis.clone(),
            evaluations: 0,
        };
        let c0: [f64; 7] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        let (c, g) = gradient_sampling(&mut obj, normalize(c0), search, &mut rng);
        let (c, g) = vertex_polish(&mut obj, c, g, search, &mut rng);
        evaluations += obj.evaluations;
        if best.as_ref().is_none_or(|(_, b)| g < *b) {
            best = Some((c, g));
        }
    }
    let (c, _) = best.expect("at least one outer start");
    let witness = cartan_element(&c);
    let comass = comass_estimate(&witness, cfg)?.value;
    let witness = witness.scale(&(1.0 / comass));
    let coords = c.map(|x| x / comass);
    let sq = witness.wedge(&witness)?.euclidean_norm();
    Ok(WirtingerReport {
        n: 4,
        estimate: sq,
        witness_form: witness,
        witness_coords: Some(coords),
        witness_comass: 1.0,
        method: Method::CartanSearch,
        upper_bound: Some(Bound {
            value: Rational::from_i64(14),
            provenance: "every self-dual 4-form on R^8 is a sum of at most 14 simple forms of comass at most its own".into(),
        }),
        evaluations,
    })
}

fn normalize(c: [f64; 7]) -> [f64; 7] {
    let len = norm_sq(&c).sqrt();
    c.map(|x| x / len)
}

/// Gradient sampling: the descent direction is the negative of the
/// shortest vector in the convex hull of gradients at `c` and at random
/// points within the sampling radius. This handles the kinks of `g`,
/// which is a maximum of smooth functions.
fn gradient_sampling(
    obj: &mut Objective,
    mut c: [f64; 7],
    search: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> ([f64; 7], f64) {
    let (mut g, mut grad) = obj.at(&c);
    let mut radius = search.initial_radius;
    let mut tol = search.stationarity_tol;
    for _ in 0..search.max_steps {
        let mut grads = vec![grad];
        for _ in 0..search.samples {
            let u: [f64; 7] = normalize(std::array::from_fn(|_| StandardNormal.sample(rng)));
            let r = radius * rng.gen::<f64>();
            let cs = normalize(std::array::from_fn(|i| c[i] + r * u[i]));
            grads.push(obj.at(&cs).1);
        }
        let v = min_norm_in_hull(&grads);
        let vn = norm_sq(&v);
        if vn.sqrt() <= tol {
            radius *= 0.1;
            tol *= 0.1;
            if radius < search.final_radius {
                break;
            }
            continue;
        }
        let mut t = 1.0;
        let mut moved = false;
        while t * vn.sqrt() > 1e-3 * radius {
            let cand = normalize(std::array::from_fn(|i| c[i] - t * v[i]));
            let (gc, gradc) = obj.at(&cand);
            if gc <= g - 1e-6 * t * vn {
                c = cand;
                g = gc;
                grad = gradc;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            radius *= 0.1;
            tol *= 0.1;
            if radius < search.final_radius {
                break;
            }
        }
    }
    (c, g)
}

/// Sharpens a point near a vertex of the comass unit ball in `𝔥`.
///
/// Each maximizing frame near `c` gives a supporting hyperplane
/// `⟨x, p⟩ = 1` of the ball. Where the ball is locally polyhedral these
/// planes meet at the vertex, found by least squares.
fn vertex_polish(
    obj: &mut Objective,
    mut c: [f64; 7],
    mut g: f64,
    search: &SearchConfig,
    rng: &mut ChaCha8Rng,
) -> ([f64; 7], f64) {
    let mut radius = 1e-3;
    for _ in 0..search.polish_rounds {
        let mut rows = Vec::with_capacity(search.polish_samples + 1);
        rows.push(obj.support(&c).1);
        for _ in 0..search.polish_samples {
            let u: [f64; 7] = normalize(std::array::from_fn(|_| StandardNormal.sample(rng)));
            let cs = normalize(std::array::from_fn(|i| c[i] + radius * u[i]));
            rows.push(obj.support(&cs).1);
        }
        let a = nalgebra::DMatrix::from_fn(rows.len(), 7, |r, i| rows[r][i]);
        let b = nalgebra::DVector::from_element(rows.len(), 1.0);
        let mut improved = false;
        if let Ok(x) = a.svd(true, true).solve(&b, 1e-12) {
            let cand: [f64; 7] = std::array::from_fn(|i| x[i]);
            if cand.iter().all(|v| v.is_finite()) && norm_sq(&cand) > 0.0 {
                let cand = normalize(cand);
                let gc = obj.at(&cand).0;
                if gc < g {
                    c = cand;
                    g = gc;
                    improved = true;
                }
            }
        }
        if !improved {
            radius *= 0.1;
        }
    }
    (c, g)
}

/// Shortest vector in the convex hull of `points`, by projected gradient
/// on the simplex of weights.
fn min_norm_in_hull(points: &[[f64; 7]]) -> [f64; 7] {
    let m = points.len();
    let gram: Vec<Vec<f64>> = points.iter().map(|a| points.iter().map(|b| dot(a, b)).collect()).collect();
    let lipschitz = (0..m).map(|i| gram[i][i]).sum::<f64>().max(1e-300);
    let mut w = vec![1.0 / m as f64; m];
    for _ in 0..500 {
        let grad: Vec<f64> = (0..m).map(|i| (0..m).map(|j| gram[i][j] * w[j]).sum()).collect();
        let step: Vec<f64> = (0..m).map(|i| w[i] - grad[i] / lipschitz).collect();
        w = project_simplex(&step);
    }
    std::array::from_fn(|k| (0..m).map(|j| w[j] * points[j][k]).sum())
}

fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &x) in u.iter().enumerate() {
        cumulative += x;
        let t = (cumulative - 1.0) / (i + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

/// Best ratio over random self-dual forms in all 35 dimensions of `Λ⁴₊`.
/// A sanity check: it should never exceed the `𝔥` search.
pub fn sample_selfdual_ratio(samples: usize, cfg: &OptimizerConfig) -> Result<WirtingerReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let basis = subsets(8, 4);
    let mut best: Option<(FloatForm, f64, f64)> = None;
    for _ in 0..samples {
        let v: Vec<f64> = (0..basis.len()).map(|_| StandardNormal.sample(&mut rng)).collect();
        let phi = KForm::from_dense(8, 4, &basis, &v)?.selfdual_split()?.0;
        let comass = comass_estimate(&phi, cfg)?.value;
        let ratio = phi.euclidean_norm_sq() / (comass * comass);
        if best.as_ref().is_none_or(|(_, r, _)| ratio > *r) {
            best = Some((phi, ratio, comass));
        }
    }
    let (phi, ratio, comass) = best.ok_or_else(|| Error::InvalidArgument("need at least one sample".into()))?;
    Ok(WirtingerReport {
        n: 4,
        estimate: ratio,
        witness_form: phi,
        witness_coords: None,
        witness_comass: comass,
        method: Method::RandomSampling,
        upper_bound: None,
        evaluations: samples,
    })
}

/// Which half of `φ = φ₊ + φ₋` has the larger norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dominant {
    SelfDual,
    AntiSelfDual,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelfDualChainReport {
    pub wedge_square_norm: f64,
    pub plus_norm_sq: f64,
    pub minus_norm_sq: f64,
    pub comass: f64,
    pub comass_plus: f64,
    pub comass_minus: f64,
    pub ratio: f64,
    pub dominant: Dominant,
    /// Ratio of the dominant part; for the anti-self-dual part this is the
    /// ratio of its orientation reversal, which is self-dual.
    pub ratio_dominant: f64,
    /// `|φ ∧ φ| = | |φ₊|² − |φ₋|² |`.
    pub square_identity_holds: bool,
    /// `‖φ_±‖ ≤ ‖φ‖`.
    pub comass_monotone: bool,
    /// `ratio(φ) ≤ ratio(dominant part)`.
    pub ratio_monotone: bool,
}

impl SelfDualChainReport {
    pub fn holds(&self) -> bool {
        self.square_identity_holds && self.comass_monotone && self.ratio_monotone
    }
}

/// Checks the chain `ratio(φ) ≤ ratio(φ_dom)` for a 4-form on R^8.
///
/// Since `φ₊ ∧ φ₊ = |φ₊|² vol` and `φ₋ ∧ φ₋ = −|φ₋|² vol` (the cross term
/// vanishes), `|φ ∧ φ| ≤ max(|φ₊|², |φ₋|²)`; the comass of each half is at
/// most that of `φ` because the star preserves comass in middle degree.
pub fn selfdual_chain_check(phi: &FloatForm, cfg: &OptimizerConfig, tol: f64) -> Result<SelfDualChainReport> {
    if phi.n() != 8 || phi.k() != 4 {
        return Err(Error::Degree(format!("expected a 4-form on R^8, got a {}-form on R^{}", phi.k(), phi.n())));
    }
    let (plus, minus) = phi.selfdual_split()?;
    let wedge_square_norm = phi.wedge(phi)?.euclidean_norm();
    let (pn, mn) = (plus.euclidean_norm_sq(), minus.euclidean_norm_sq());
    let comass_of = |f: &FloatForm| -> Result<f64> { Ok(comass_estimate(f, cfg)?.value) };
    let comass = comass_of(phi)?;
    let comass_plus = comass_of(&plus)?;
    let comass_minus = comass_of(&minus)?;
    let ratio_of = |sq: f64, c: f64| if c > 0.0 { sq / (c * c) } else { 0.0 };
    let ratio = ratio_of(wedge_square_norm, comass);
    let (dominant, ratio_dominant) = if pn >= mn {
        (Dominant::SelfDual, ratio_of(pn, comass_plus))
    } else {
        let flipped = minus.flip_orientation();
        let flipped_comass = comass_of(&flipped)?;
        (Dominant::AntiSelfDual, ratio_of(flipped.wedge(&flipped)?.euclidean_norm(), flipped_comass))
    };
    let scale = phi.euclidean_norm_sq().max(1.0);
    Ok(SelfDualChainReport {
        wedge_square_norm,
        plus_norm_sq: pn,
        minus_norm_sq: mn,
        comass,
        comass_plus,
        comass_minus,
        ratio,
        dominant,
        ratio_dominant,
        square_identity_holds: (wedge_square_norm - (pn - mn).abs()).abs() <= tol * scale,
        comass_monotone: comass_plus <= comass + tol && comass_minus <= comass + tol,
        ratio_monotone: ratio <= ratio_dominant + tol * ratio_dominant.max(1.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CartanWedgeSquare {
    #[serde(serialize_with = "ser_rational")]
    pub norm_sq: Rational,
    /// Coefficient of `vol` in `h ∧ h`.
    #[serde(serialize_with = "ser_rational")]
    pub wedge_square_coeff: Rational,
}

/// `|h|²` and `h ∧ h` for `h = Σ c_i h_i`, by exact expansion.
///
/// The cross terms `h_i ∧ h_j` cancel, so both equal `2 Σ c_i²`; that
/// closed form is checked after the expansion.
pub fn cartan_wedge_square(coords: &[Rational; 7]) -> Result<CartanWedgeSquare> {
    let h = cartan_element(coords);
    let norm_sq = h.euclidean_norm_sq();
    let wedge_square_coeff = h.wedge(&h)?.top_coefficient()?;
    let formula = coords.iter().fold(Rational::from_i64(0), |acc, c| acc + c.clone() * c.clone()) * Rational::from_i64(2);
    if norm_sq != formula || wedge_square_coeff != formula {
        return Err(Error::Verification(format!(
            "expansion gives |h|² = {}, h∧h = {} vol, formula {}",
            rational_to_string(&norm_sq),
            rational_to_string(&wedge_square_coeff),
            rational_to_string(&formula)
        )));
    }
    Ok(CartanWedgeSquare {
        norm_sq,
        wedge_square_coeff,
    })
}
