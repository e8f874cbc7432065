//! Numerical comass: the maximum of a k-form over orthonormal k-frames.
//!
//! [`comass_estimate`] runs multi-start projected-gradient ascent on the
//! manifold of orthonormal k-frames with a QR retraction. [`comass_oracle`]
//! is an independent cross-check (random frames refined by exact plane
//! rotations) that shares no code with the ascent.

mod oracle;
mod stiefel;

use rayon::prelude::*;
use serde::Serialize;

use crate::canonical2::comass2;
use crate::error::{Error, Result};
use crate::exterior::{FloatForm, Frame};

pub use oracle::{comass_oracle, comass_oracle_seeded, ORACLE_SEED};
pub(crate) use stiefel::TermTable;

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop when the Riemannian gradient norm falls below this.
    pub grad_tol: f64,
    /// Armijo sufficient-increase constant.
    pub armijo_c: f64,
    /// Step shrink factor during backtracking.
    pub backtrack: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 64,
            max_iters: 500,
            grad_tol: 1e-10,
            armijo_c: 1e-4,
            backtrack: 0.5,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.restarts > 0
            && self.max_iters > 0
            && self.grad_tol > 0.0
            && self.armijo_c > 0.0
            && self.armijo_c < 1.0
            && self.backtrack > 0.0
            && self.backtrack < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("bad optimizer config {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ComassEstimate {
    /// Value of the form on `frame`; a lower bound for the comass.
    pub value: f64,
    #[serde(serialize_with = "serialize_frame")]
    pub frame: Frame,
    /// Riemannian gradient norm at `frame`.
    pub stationarity_residual: f64,
    pub restarts: usize,
    /// Fraction of restarts that reached `grad_tol`.
    pub converged_fraction: f64,
}

fn serialize_frame<S: serde::Serializer>(f: &Frame, s: S) -> std::result::Result<S::Ok, S::Error> {
    f.vectors().serialize(s)
}

/// Newton steps spent finishing the best ascent.
const POLISH_STEPS: usize = 30;

/// Best frame over `cfg.restarts` independent ascents.
///
/// Restart `i` draws its start from stream `i` of a generator seeded with
/// `cfg.seed`, so the result does not depend on scheduling; ties keep the
/// lowest restart index.
pub fn comass_estimate(phi: &FloatForm, cfg: &OptimizerConfig) -> Result<ComassEstimate> {
    cfg.validate()?;
    let (n, k) = (phi.n(), phi.k());
    if phi.is_zero() {
        return Ok(ComassEstimate {
            value: 0.0,
            frame: Frame::empty(n),
            stationarity_residual: 0.0,
            restarts: 0,
            converged_fraction: 1.0,
        });
    }
    if k == 0 || k == n {
        return Ok(trivial_degree(phi));
    }
    let table = TermTable::new(&unit(phi));
    let runs: Vec<stiefel::AscentRun> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| stiefel::ascend_from_random(&table, cfg, i as u64))
        .collect();
    let converged = runs.iter().filter(|r| r.converged).count();
    let best = runs
        .into_iter()
        .enumerate()
        .fold(None::<(usize, stiefel::AscentRun)>, |acc, (i, r)| match acc {
            Some((j, b)) if b.value >= r.value => Some((j, b)),
            _ => Some((i, r)),
        })
        .map(|(_, r)| r)
        .expect("at least one restart");
    let best = stiefel::newton_polish(&table, best.frame, POLISH_STEPS);
    let frame = Frame::trusted(best.frame);
    let value = phi.evaluate(&frame)?;
    Ok(ComassEstimate {
        value,
        frame,
        stationarity_residual: best.residual,
        restarts: cfg.restarts,
        converged_fraction: converged as f64 / cfg.restarts as f64,
    })
}

/// Cheap comass lower bounds for a sequence of nearby forms.
///
/// Each call ascends from the best frames of earlier calls plus a few fresh
/// random starts. Used by outer searches where successive forms differ
/// slightly; final answers should be re-evaluated with [`comass_estimate`].
pub struct WarmComass {
    cfg: OptimizerConfig,
    pool: Vec<nalgebra::DMatrix<f64>>,
    keep: usize,
    fresh: usize,
    stream: u64,
}

impl WarmComass {
    pub fn new(cfg: &OptimizerConfig, keep: usize, fresh: usize) -> Self {
        WarmComass {
            cfg: cfg.clone(),
            pool: Vec::new(),
            keep,
            fresh,
            stream: 0,
        }
    }

    pub fn evaluate(&mut self, phi: &FloatForm) -> f64 {
        self.evaluate_with_frame(phi).map_or(0.0, |(v, _)| v)
    }

    /// Best value and its frame; `None` for the zero form.
    pub fn evaluate_with_frame(&mut self, phi: &FloatForm) -> Option<(f64, Frame)> {
        if phi.is_zero() {
            return None;
        }
        let table = TermTable::new(&unit(phi));
        let mut runs: Vec<stiefel::AscentRun> = self
            .pool
            .iter()
            .map(|v| stiefel::ascend(&table, &self.cfg, v.clone()))
            .collect();
        for _ in 0..self.fresh {
            runs.push(stiefel::ascend_from_random(&table, &self.cfg, self.stream));
            self.stream += 1;
        }
        runs.sort_by(|a, b| b.value.total_cmp(&a.value));
        runs[0] = stiefel::newton_polish(&table, runs[0].frame.clone(), POLISH_STEPS);
        let frame = Frame::trusted(runs[0].frame.clone());
        let best = (phi.evaluate(&frame).expect("frame matches the form"), frame);
        self.pool = runs.into_iter().take(self.keep).map(|r| r.frame).collect();
        Some(best)
    }
}

/// Ascent runs on the unit-norm form, so tolerances do not depend on scale.
fn unit(phi: &FloatForm) -> FloatForm {
    phi.scale(&(1.0 / phi.euclidean_norm()))
}

/// Degrees 0 and n: the form is a multiple of a single monomial.
fn trivial_degree(phi: &FloatForm) -> ComassEstimate {
    let n = phi.n();
    let c = phi.terms().next().map(|(_, c)| *c).unwrap_or(0.0);
    let mut m = nalgebra::DMatrix::identity(n, phi.k());
    if phi.k() > 0 && c < 0.0 {
        m.column_mut(0).neg_mut();
    }
    ComassEstimate {
        value: c.abs(),
        frame: Frame::trusted(m),
        stationarity_residual: 0.0,
        restarts: 0,
        converged_fraction: 1.0,
    }
}

/// Where a reported comass value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComassProvenance {
    /// Closed form for 2-forms (largest block coefficient); exact up to
    /// floating-point rounding.
    ExactTwoForm,
    /// Best value found by the optimizer; a lower bound.
    OptimizerLowerBound,
}

/// Comass with its provenance: exact for 2-forms, optimizer otherwise.
pub fn comass_with_provenance(phi: &FloatForm, cfg: &OptimizerConfig) -> Result<(f64, ComassProvenance)> {
    if phi.k() == 2 {
        Ok((comass2(phi)?, ComassProvenance::ExactTwoForm))
    } else {
        Ok((comass_estimate(phi, cfg)?.value, ComassProvenance::OptimizerLowerBound))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RatioReport {
    /// `|φ|²`.
    pub norm_sq: f64,
    pub comass: f64,
    pub comass_provenance: ComassProvenance,
    /// `|φ ∧ φ|`, which equals the comass of the top-degree form `φ ∧ φ`.
    pub wedge_square_norm: f64,
    /// `|φ ∧ φ| / ‖φ‖²`.
    pub w_ratio: f64,
    /// `|φ|² / ‖φ‖²`.
    pub wprime_ratio: f64,
}

/// Wirtinger-type ratios of a middle-degree form (`n = 2k`).
///
/// Since the comass is estimated from below, both ratios are estimates
/// from above (except for 2-forms, where the comass is exact).
pub fn ratio_report(phi: &FloatForm, cfg: &OptimizerConfig) -> Result<RatioReport> {
    if phi.n() != 2 * phi.k() {
        return Err(Error::Degree(format!(
            "ratios need a middle-degree form, got a {}-form on R^{}",
            phi.k(),
            phi.n()
        )));
    }
    let square = phi.wedge(phi)?;
    let wedge_square_norm = square.euclidean_norm();
    // a top-degree form is simple, so its comass is its Euclidean norm
    let top_comass = comass_estimate(&square, cfg)?.value;
    if (top_comass - wedge_square_norm).abs() > 1e-12 * wedge_square_norm.max(1.0) {
        return Err(Error::Verification(format!(
            "comass of the wedge square {top_comass} differs from its norm {wedge_square_norm}"
        )));
    }
    let (comass, provenance) = comass_with_provenance(phi, cfg)?;
    let norm_sq = phi.euclidean_norm_sq();
    let (w, wp) = if comass > 0.0 {
        (wedge_square_norm / (comass * comass), norm_sq / (comass * comass))
    } else {
        (0.0, 0.0)
    };
    Ok(RatioReport {
        norm_sq,
        comass,
        comass_provenance: provenance,
        wedge_square_norm,
        w_ratio: w,
        wprime_ratio: wp,
    })
}
