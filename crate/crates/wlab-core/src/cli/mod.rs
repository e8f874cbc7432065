//! Command-line front end. Parsing lives here so that commands can be run
//! in-process; the binary only prints and exits.

pub mod expr;
pub mod registry;
pub mod verify;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::comass::{comass_estimate, OptimizerConfig};
use crate::e7::{bracket, structure_constants, E7Element};
use crate::error::{Error, Result};
use crate::exterior::AnyForm;
use crate::hunt::reduce_to_cartan;
use crate::scalar::{rational_to_string, Rational};
use crate::wirtinger::{
    kahler_restricted_ratio, sample_selfdual_ratio, systolic_constants, wirtinger_constant, WirtingerReport,
};
pub use expr::{parse, parse_expr, print_form, FormExpr};
pub use verify::{run_verify, Profile, VerifyOptions, VerifySummary};

#[derive(Debug, Parser)]
#[command(name = "wlab", version, about = "Comass, Wirtinger constants and the E7 model on R^8")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed of every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts.
    #[arg(long, global = true)]
    pub restarts: Option<usize>,
    /// Optimizer gradient tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Optimizer iteration cap per restart.
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// Evaluate expressions in floating point instead of exact rationals.
    #[arg(long, global = true)]
    pub float: bool,
}

impl GlobalOpts {
    pub fn config(&self) -> OptimizerConfig {
        let mut cfg = OptimizerConfig::default().with_seed(self.seed);
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(t) = self.tol {
            cfg.grad_tol = t;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        cfg
    }
}

/// A form given as an expression or as a JSON file.
#[derive(Debug, Clone, Args)]
pub struct FormInput {
    /// Form expression, e.g. "1/6 * (omega_i^2 + omega_j^2 + omega_k^2)".
    #[arg(required_unless_present = "file", conflicts_with = "file")]
    pub expr: Option<String>,
    /// JSON form file instead of an expression.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the named forms.
    Catalog,
    /// Comass lower bound by multi-start ascent over orthonormal frames.
    Comass(FormInput),
    /// E7 bracket. Each operand is an element as JSON `{"a": [[..]], "x": <form>}`
    /// (inline or a .json file) or a 4-form expression.
    Bracket {
        x: String,
        y: String,
    },
    /// Rotate a self-dual 4-form into the Cartan subspace.
    Reduce(FormInput),
    /// Wirtinger constant W2 or W4.
    Wirtinger {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Only the ratio along the Kähler direction.
        #[arg(long, conflicts_with = "sample")]
        kahler: bool,
        /// Random sampling over all self-dual forms with this many samples.
        #[arg(long)]
        sample: Option<usize>,
    },
    /// Exact systolic constants.
    Constants,
    /// Run the invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Profile::Quick)]
        profile: Profile,
        /// Directory holding the golden registry files.
        #[arg(long)]
        golden_dir: Option<PathBuf>,
    },
    /// E7 model utilities.
    E7 {
        #[command(subcommand)]
        action: E7Action,
    },
}

#[derive(Debug, Subcommand)]
pub enum E7Action {
    /// Structure constants of the bracket on the basis, as JSON.
    Dump,
}

/// Result of a command: text for stdout and the exit code.
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: 0 }
    }
}

/// Runs a parsed command. Errors are input errors (exit code 2).
pub fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    let cfg = g.config();
    cfg.validate()?;
    match &cli.command {
        Command::Catalog => catalog(g),
        Command::Comass(input) => comass(g, &cfg, input),
        Command::Bracket { x, y } => bracket_cmd(g, x, y),
        Command::Reduce(input) => reduce(g, &cfg, input),
        Command::Wirtinger { n, kahler, sample } => wirtinger(g, &cfg, *n, *kahler, *sample),
        Command::Constants => constants(g),
        Command::Verify { profile, golden_dir } => {
            let summary = run_verify(&VerifyOptions {
                profile: *profile,
                golden_dir: golden_dir.clone(),
                cfg,
            });
            let code = if summary.ok() { 0 } else { 1 };
            let stdout = if g.json { pretty(&summary) } else { verify_text(&summary) };
            Ok(Output { stdout, code })
        }
        Command::E7 { action: E7Action::Dump } => Ok(Output::ok(pretty(&structure_constants()))),
    }
}

fn pretty<T: serde::Serialize>(v: &T) -> String {
    format!("{}\n", serde_json::to_string_pretty(v).expect("serializable output"))
}

/// An exact or float form from the input, following `--float`.
fn read_form(g: &GlobalOpts, input: &FormInput) -> Result<AnyForm> {
    if let Some(path) = &input.file {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
        return AnyForm::from_json_str(&text);
    }
    let text = input.expr.as_deref().unwrap_or_default();
    read_expr(g, text)
}

fn read_expr(g: &GlobalOpts, text: &str) -> Result<AnyForm> {
    Ok(if g.float {
        AnyForm::Float(parse::<f64>(text)?)
    } else {
        AnyForm::Exact(parse::<crate::scalar::Rational>(text)?)
    })
}

fn catalog(g: &GlobalOpts) -> Result<Output> {
    let mut rows = Vec::new();
    let mut text = String::new();
    for e in registry::entries() {
        let f = e.exact();
        let expr = print_form(&f)?;
        let norm_sq = rational_to_string(&f.euclidean_norm_sq());
        writeln!(text, "{:<10} {}-form, {:>2} terms, |F|^2 = {:<4} {}", e.name, f.k(), f.num_terms(), norm_sq, e.description)
            .expect("write to string");
        rows.push(json!({
            "name": e.name,
            "description": e.description,
            "n": f.n(),
            "k": f.k(),
            "terms": f.num_terms(),
            "norm_sq": norm_sq,
            "expr": expr,
        }));
    }
    Ok(Output::ok(if g.json { pretty(&rows) } else { text }))
}

fn comass(g: &GlobalOpts, cfg: &OptimizerConfig, input: &FormInput) -> Result<Output> {
    let form = read_form(g, input)?.to_float();
    let est = comass_estimate(&form, cfg)?;
    let exact2 = if form.k() == 2 { Some(crate::canonical2::comass2(&form)?) } else { None };
    if g.json {
        let mut v = serde_json::to_value(&est)?;
        if let Some(c) = exact2 {
            v["two_form_comass"] = json!(c);
        }
        return Ok(Output::ok(pretty(&v)));
    }
    let mut text = format!(
        "comass >= {:.12}\nresidual {:.3e}, {} restarts, {:.0}% converged\n",
        est.value,
        est.stationarity_residual,
        est.restarts,
        100.0 * est.converged_fraction
    );
    if let Some(c) = exact2 {
        writeln!(text, "exact 2-form comass {c:.12}").expect("write to string");
    }
    Ok(Output::ok(text))
}

/// A bracket operand: an E7 element as inline JSON or a JSON file, or a
/// 4-form expression.
enum Operand {
    Exact(E7Element<Rational>),
    Float(E7Element<f64>),
}

impl Operand {
    fn to_float(&self) -> E7Element<f64> {
        match self {
            Operand::Exact(e) => e.to_float(),
            Operand::Float(e) => e.clone(),
        }
    }
}

fn operand(g: &GlobalOpts, text: &str) -> Result<Operand> {
    let trimmed = text.trim_start();
    let json = if trimmed.starts_with('{') {
        Some(text.to_string())
    } else if trimmed.ends_with(".json") && Path::new(text).is_file() {
        Some(fs::read_to_string(text).map_err(|e| Error::InvalidArgument(format!("cannot read {text}: {e}")))?)
    } else {
        None
    };
    if let Some(json) = json {
        let v: serde_json::Value = serde_json::from_str(&json)?;
        let float = v.get("x").and_then(|x| x.get("scalar")).and_then(|s| s.as_str()) == Some("float");
        return Ok(if float {
            Operand::Float(E7Element::from_json_value(&v)?)
        } else {
            Operand::Exact(E7Element::from_json_value(&v)?)
        });
    }
    let f = read_expr(g, text)?;
    if f.n() != 8 || f.k() != 4 {
        return Err(Error::Degree(format!("`{text}` is a {}-form; the bracket takes 4-forms", f.k())));
    }
    Ok(match f {
        AnyForm::Exact(x) => Operand::Exact(E7Element::from_form(x)?),
        AnyForm::Float(x) => Operand::Float(E7Element::from_form(x)?),
    })
}

fn bracket_cmd(g: &GlobalOpts, x: &str, y: &str) -> Result<Output> {
    let (x, y) = (operand(g, x)?, operand(g, y)?);
    let value = match (&x, &y) {
        (Operand::Exact(x), Operand::Exact(y)) => {
            let b = bracket(x, y);
            (b.to_json_value(), matrix_text(&b))
        }
        _ => {
            let b = bracket(&x.to_float(), &y.to_float());
            (b.to_json_value(), matrix_text(&b))
        }
    };
    Ok(Output::ok(if g.json { pretty(&value.0) } else { value.1 }))
}

/// Nonzero matrix entries and the form part.
fn matrix_text<S: crate::scalar::Scalar>(b: &E7Element<S>) -> String {
    let mut text = String::from("sl(8) part:");
    let mut any = false;
    for i in 0..8 {
        for j in 0..8 {
            let v = b.a.matrix().get(i, j);
            if !num_traits::Zero::is_zero(v) {
                write!(text, "\n  [{},{}] = {}", i + 1, j + 1, v.to_literal()).expect("write to string");
                any = true;
            }
        }
    }
    if !any {
        text.push_str(" 0");
    }
    let form = print_form(&b.x).unwrap_or_else(|e| e.to_string());
    format!("{text}\n4-form part: {form}\n")
}

fn reduce(g: &GlobalOpts, cfg: &OptimizerConfig, input: &FormInput) -> Result<Output> {
    let z = read_form(g, input)?.to_float();
    let r = reduce_to_cartan(&z, cfg)?;
    if g.json {
        let mut v = serde_json::to_value(&r)?;
        v["reduced_form"] = serde_json::from_str(&r.reduced_form().to_json_string())?;
        return Ok(Output::ok(pretty(&v)));
    }
    let coords: Vec<String> = r.coords.iter().map(|c| format!("{c:.10}")).collect();
    Ok(Output::ok(format!(
        "coordinates ({})\nmembership residual {:.3e}, gradient residual {:.3e}, {} iterations, converged: {}\n",
        coords.join(", "),
        r.membership_residual,
        r.gradient_residual,
        r.iterations,
        r.converged
    )))
}

fn wirtinger(g: &GlobalOpts, cfg: &OptimizerConfig, n: usize, kahler: bool, sample: Option<usize>) -> Result<Output> {
    if kahler {
        let v = kahler_restricted_ratio(cfg)?;
        let out = if g.json { pretty(&json!({ "kahler_restricted_ratio": v })) } else { format!("Kähler-direction ratio {v:.12}\n") };
        return Ok(Output::ok(out));
    }
    let report = match sample {
        Some(s) => sample_selfdual_ratio(s, cfg)?,
        None => wirtinger_constant(n, cfg)?,
    };
    Ok(Output::ok(if g.json { pretty(&report) } else { wirtinger_text(&report) }))
}

fn wirtinger_text(r: &WirtingerReport) -> String {
    let mut text = format!("W{} estimate {:.12} ({})\n", r.n, r.estimate, r.method);
    if let Some(c) = &r.witness_coords {
        let c: Vec<String> = c.iter().map(|x| format!("{x:.9}")).collect();
        writeln!(text, "witness Cartan coordinates ({})", c.join(", ")).expect("write to string");
    }
    if let Some(b) = &r.upper_bound {
        writeln!(text, "upper bound {} ({})", rational_to_string(&b.value), b.provenance).expect("write to string");
    }
    text
}

fn constants(g: &GlobalOpts) -> Result<Output> {
    let cat = systolic_constants();
    if g.json {
        return Ok(Output::ok(pretty(&cat)));
    }
    let mut text = String::new();
    for c in &cat {
        writeln!(text, "{:<22} {:>12}  {}", c.name, rational_to_string(&c.value), c.description).expect("write to string");
    }
    Ok(Output::ok(text))
}

fn verify_text(s: &VerifySummary) -> String {
    let mut text = String::new();
    for c in &s.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        writeln!(text, "[{mark}] {:>2} {:<20} {}", c.index, c.name, c.detail).expect("write to string");
    }
    writeln!(text, "{} passed, {} failed ({} profile)", s.passed, s.failed, s.profile).expect("write to string");
    text
}

/// Parse errors with a caret under the offending byte.
pub fn render_error(err: &Error, source: Option<&str>) -> String {
    match (err, source) {
        (Error::Parse { offset, .. }, Some(src)) => {
            let col = src.get(..*offset).map_or(*offset, |s| s.chars().count());
            format!("error: {err}\n  {src}\n  {}^\n", " ".repeat(col))
        }
        _ => format!("error: {err}\n"),
    }
}

/// The expression text of a command, for error rendering.
pub fn source_text(cli: &Cli) -> Option<&str> {
    match &cli.command {
        Command::Comass(i) | Command::Reduce(i) => i.expr.as_deref(),
        _ => None,
    }
}

/// Caps the global thread pool from `WLAB_THREADS`.
pub fn init_threads() {
    if let Some(n) = std::env::var("WLAB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}
