//! C ABI for `wlab-core`.
//!
//! Every fallible function returns a [`WlabStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`wlab_last_error`]. Forms are opaque [`WlabForm`] handles
//! released with [`wlab_form_free`]; strings returned by the library are
//! released with [`wlab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use wlab_core::canonical2::comass2;
use wlab_core::cli::expr;
use wlab_core::comass::{comass_estimate, OptimizerConfig};
use wlab_core::hunt::reduce_to_cartan;
use wlab_core::wirtinger::wirtinger_constant;
use wlab_core::{AnyForm, Error, FloatForm, Rational};

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WlabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Json = 4,
    Dimension = 5,
    Degree = 6,
    Index = 7,
    NotSelfDual = 8,
    InvalidArgument = 9,
    Numerical = 10,
    Panic = 11,
}

/// Opaque handle to a form with exact or float coefficients.
pub struct WlabForm(AnyForm);

/// Optimizer settings. Zero fields fall back to the library defaults.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct WlabOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub grad_tol: f64,
    pub seed: u64,
}

/// Output of [`wlab_reduce`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct WlabReduction {
    /// Coordinates in the Cartan basis `h_1..h_7`.
    pub coords: [f64; 7],
    /// Rotation `k`, row-major.
    pub rotation: [f64; 64],
    pub gradient_residual: f64,
    pub converged: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(WlabStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Dimension(_) => WlabStatus::Dimension,
            Error::Degree(_) => WlabStatus::Degree,
            Error::Index { .. } => WlabStatus::Index,
            Error::NotSelfDual(_) => WlabStatus::NotSelfDual,
            Error::Parse { .. } => WlabStatus::Parse,
            Error::Json(_) => WlabStatus::Json,
            Error::InvalidArgument(_) => WlabStatus::InvalidArgument,
            Error::NonOrthonormal { .. } | Error::NotRotation(_) | Error::Verification(_) => WlabStatus::Numerical,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, records any failure and converts panics into a status.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> WlabStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            WlabStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {message}"));
            WlabStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(WlabStatus::NullPointer, "null pointer argument".into())
}

unsafe fn form_ref<'a>(p: *const WlabForm) -> Result<&'a AnyForm, Failure> {
    p.as_ref().map(|f| &f.0).ok_or_else(null)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(WlabStatus::InvalidUtf8, e.to_string()))
}

fn require<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(null())
    } else {
        Ok(())
    }
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_form(out: *mut *mut WlabForm, form: AnyForm) -> Result<(), Failure> {
    write(out, Box::into_raw(Box::new(WlabForm(form))))
}

unsafe fn config(opts: *const WlabOptions) -> OptimizerConfig {
    let mut cfg = OptimizerConfig::default();
    if let Some(o) = opts.as_ref() {
        if o.restarts > 0 {
            cfg.restarts = o.restarts;
        }
        if o.max_iters > 0 {
            cfg.max_iters = o.max_iters;
        }
        if o.grad_tol > 0.0 {
            cfg.grad_tol = o.grad_tol;
        }
        cfg.seed = o.seed;
    }
    cfg
}

fn to_float(f: &AnyForm) -> FloatForm {
    match f {
        AnyForm::Exact(e) => e.to_float(),
        AnyForm::Float(x) => x.clone(),
    }
}

/// Parses an expression over R^8, with exact rational coefficients when
/// `exact` is true and doubles otherwise.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_parse(text: *const c_char, exact: bool, out: *mut *mut WlabForm) -> WlabStatus {
    guard(|| {
        require(out)?;
        let text = str_arg(text)?;
        let form = if exact {
            AnyForm::Exact(expr::parse::<Rational>(text)?)
        } else {
            AnyForm::Float(expr::parse::<f64>(text)?)
        };
        write_form(out, form)
    })
}

/// Reads a form from its JSON interchange text.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_from_json(json: *const c_char, out: *mut *mut WlabForm) -> WlabStatus {
    guard(|| {
        require(out)?;
        let form = AnyForm::from_json_str(str_arg(json)?)?;
        write_form(out, form)
    })
}

/// Writes the JSON text of `form`; release it with [`wlab_string_free`].
///
/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_to_json(form: *const WlabForm, out: *mut *mut c_char) -> WlabStatus {
    guard(|| {
        require(out)?;
        let text = form_ref(form)?.to_json_string();
        let c = CString::new(text).expect("JSON has no interior nul");
        write(out, c.into_raw())
    })
}

/// Ambient dimension and degree of `form`.
///
/// # Safety
/// `form` must be a live handle; `n` and `k` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_shape(form: *const WlabForm, n: *mut usize, k: *mut usize) -> WlabStatus {
    guard(|| {
        require(n)?;
        require(k)?;
        let (dim, deg) = match form_ref(form)? {
            AnyForm::Exact(f) => (f.n(), f.k()),
            AnyForm::Float(f) => (f.n(), f.k()),
        };
        write(n, dim)?;
        write(k, deg)
    })
}

/// `a ∧ b`. Exact when both inputs are exact.
///
/// # Safety
/// `a` and `b` must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_wedge(a: *const WlabForm, b: *const WlabForm, out: *mut *mut WlabForm) -> WlabStatus {
    guard(|| {
        require(out)?;
        let form = match (form_ref(a)?, form_ref(b)?) {
            (AnyForm::Exact(x), AnyForm::Exact(y)) => AnyForm::Exact(x.wedge(y)?),
            (x, y) => AnyForm::Float(to_float(x).wedge(&to_float(y))?),
        };
        write_form(out, form)
    })
}

/// Hodge star with respect to the standard orientation.
///
/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_hodge_star(form: *const WlabForm, out: *mut *mut WlabForm) -> WlabStatus {
    guard(|| {
        require(out)?;
        let star = match form_ref(form)? {
            AnyForm::Exact(f) => AnyForm::Exact(f.hodge_star()),
            AnyForm::Float(f) => AnyForm::Float(f.hodge_star()),
        };
        write_form(out, star)
    })
}

/// Sum of squared coefficients in the orthonormal monomial basis.
///
/// # Safety
/// `form` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_norm_sq(form: *const WlabForm, out: *mut f64) -> WlabStatus {
    guard(|| {
        require(out)?;
        let v = to_float(form_ref(form)?).euclidean_norm_sq();
        write(out, v)
    })
}

/// Comass of `form`: exact for 2-forms, otherwise the best value found by
/// multi-start ascent (a lower bound). `opts` may be null.
///
/// # Safety
/// `form` must be a live handle, `opts` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wlab_comass(form: *const WlabForm, opts: *const WlabOptions, out: *mut f64) -> WlabStatus {
    guard(|| {
        require(out)?;
        let phi = to_float(form_ref(form)?);
        let value = if phi.k() == 2 {
            comass2(&phi)?
        } else {
            comass_estimate(&phi, &config(opts))?.value
        };
        write(out, value)
    })
}

/// Rotates a self-dual 4-form on R^8 into the Cartan subspace.
///
/// # Safety
/// `form` must be a live handle, `opts` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wlab_reduce(form: *const WlabForm, opts: *const WlabOptions, out: *mut WlabReduction) -> WlabStatus {
    guard(|| {
        require(out)?;
        let r = reduce_to_cartan(&to_float(form_ref(form)?), &config(opts))?;
        let mut rotation = [0.0; 64];
        for (i, row) in r.k.rows().iter().enumerate() {
            rotation[8 * i..8 * i + 8].copy_from_slice(row);
        }
        write(
            out,
            WlabReduction {
                coords: r.coords,
                rotation,
                gradient_residual: r.gradient_residual,
                converged: r.converged,
            },
        )
    })
}

/// Wirtinger constant for `n` = 2 or 4: the supremum of
/// `|w ∧ w| / comass(w)²` over forms of degree `n` on R^(2n).
///
/// # Safety
/// `opts` must be null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wlab_wirtinger(n: usize, opts: *const WlabOptions, out: *mut f64) -> WlabStatus {
    guard(|| {
        require(out)?;
        let report = wirtinger_constant(n, &config(opts))?;
        write(out, report.estimate)
    })
}

/// Releases a form handle. Null is ignored.
///
/// # Safety
/// `form` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wlab_form_free(form: *mut WlabForm) {
    if !form.is_null() {
        drop(Box::from_raw(form));
    }
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn wlab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn wlab_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
