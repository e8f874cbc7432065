//! The `verify` suite: every module's invariants, with fixed seeds.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::expr::{parse, print_form};
use super::registry;
use crate::canonical2::{canonicalize, comass2, standard_symplectic};
use crate::comass::{comass_estimate, ratio_report, OptimizerConfig};
use crate::e7::{bracket_forms, centralizer_in_lambda4plus, is_abelian, jacobi, random_integer_element, E7Element, Mat8};
use crate::exterior::{subsets, ExactForm, FloatForm, KForm};
use crate::hunt::{ad_action, reduce_to_cartan};
use crate::named::{cartan_basis, cayley, kraines2, omega_i, omega_j, omega_k, volume};
use crate::scalar::{Rational, Scalar};
use crate::wirtinger::{
    cartan_coords, cartan_wedge_square, cp_symmetric_ratio, gromov_constant, hp_symmetric_ratio, kahler_restricted_ratio,
    s4b, selfdual_chain_check, systolic_constants, wirtinger_constant,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    /// Exact identities and small samples.
    Quick,
    /// Adds the optimizer-backed checks.
    Full,
}

impl std::fmt::Display for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        })
    }
}

pub struct VerifyOptions {
    pub profile: Profile,
    /// Directory of golden registry files; the built-in copies otherwise.
    pub golden_dir: Option<PathBuf>,
    pub cfg: OptimizerConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub index: usize,
    pub name: &'static str,
    /// The fact being checked, in words.
    pub reference: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySummary {
    pub profile: Profile,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl VerifySummary {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

type Outcome = std::result::Result<String, String>;

struct Check {
    name: &'static str,
    reference: &'static str,
    full_only: bool,
    run: fn(&VerifyOptions) -> Outcome,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

const CHECKS: &[Check] = &[
    Check {
        name: "golden-registry",
        reference: "registry forms are byte-identical to their golden JSON files",
        full_only: false,
        run: golden_registry,
    },
    Check {
        name: "registry-roundtrip",
        reference: "parse(print(F)) = F for every named form",
        full_only: false,
        run: registry_roundtrip,
    },
    Check {
        name: "cayley-identities",
        reference: "Cayley form: self-dual, norm^2 14, square 14 vol, equal to (omega_i^2 + omega_j^2 - omega_k^2)/2",
        full_only: false,
        run: cayley_identities,
    },
    Check {
        name: "kraines-identities",
        reference: "3 kappa_2 has norm^2 30, square 30 vol and Cartan coordinates (3,1,1,1,1,-1,1)",
        full_only: false,
        run: kraines_identities,
    },
    Check {
        name: "cartan-subalgebra",
        reference: "the seven self-dual pairs commute and their centralizer in the self-dual 4-forms is 7-dimensional",
        full_only: false,
        run: cartan_subalgebra,
    },
    Check {
        name: "generator-brackets",
        reference: "bracket of 4-vectors: zero for two shared indices, e4 (x) e8* for one, half the signed identity for none",
        full_only: false,
        run: generator_brackets,
    },
    Check {
        name: "jacobi",
        reference: "Jacobi identity exactly on 200 random integer triples",
        full_only: false,
        run: jacobi_identity,
    },
    Check {
        name: "exterior-laws",
        reference: "graded anticommutativity, star squared = (-1)^(k(n-k)), <a, star b> vol = a /\\ b",
        full_only: false,
        run: exterior_laws,
    },
    Check {
        name: "cartan-wedge-square",
        reference: "on the Cartan subspace the wedge square is 2 sum c_i^2 vol, exactly",
        full_only: false,
        run: cartan_wedge_squares,
    },
    Check {
        name: "two-form-wirtinger",
        reference: "|A|^2 <= 2 comass(A)^2 for 2-forms on R^4, with equality for the symplectic form",
        full_only: false,
        run: two_form_wirtinger,
    },
    Check {
        name: "canonical-2-forms",
        reference: "block coefficients of 3 dx12 - 2 dx34 are (3, 2); of omega_i are (1,1,1,1)",
        full_only: false,
        run: canonical_two_forms,
    },
    Check {
        name: "constants",
        reference: "exact systolic constants 10/3, 6, [6, 14], n!, 6^b/(2b+1)! and the HP/CP inequality chain",
        full_only: false,
        run: constants,
    },
    Check {
        name: "unit-comass",
        reference: "the Cayley form, the Kraines form and the standard symplectic form have comass 1",
        full_only: true,
        run: unit_comass,
    },
    Check {
        name: "named-ratios",
        reference: "Wirtinger ratios: Cayley 14, Kraines 10/3, Kähler square 6",
        full_only: true,
        run: named_ratios,
    },
    Check {
        name: "w4",
        reference: "the Cartan-subspace search returns W4 = 14 at a witness in the Cayley orbit",
        full_only: true,
        run: w4,
    },
    Check {
        name: "kahler-direction",
        reference: "the ratio restricted to the Kähler direction is 6",
        full_only: true,
        run: kahler_direction,
    },
    Check {
        name: "cartan-reduction",
        reference: "every self-dual 4-form is rotated into the Cartan subspace; 3 kappa_2 reduces to (3,1,1,1,1,1,1)",
        full_only: true,
        run: cartan_reduction,
    },
    Check {
        name: "selfdual-chain",
        reference: "the self-dual part dominates: |phi^2| = ||phi+^2| - |phi-^2||, comass and ratio monotone",
        full_only: true,
        run: selfdual_chain,
    },
];

/// Runs the suite; failures and panics are recorded, never propagated.
pub fn run_verify(opts: &VerifyOptions) -> VerifySummary {
    let selected: Vec<(usize, &Check)> = CHECKS
        .iter()
        .filter(|c| opts.profile == Profile::Full || !c.full_only)
        .enumerate()
        .collect();
    let checks: Vec<CheckResult> = selected
        .par_iter()
        .map(|(i, c)| {
            let outcome = catch_unwind(AssertUnwindSafe(|| (c.run)(opts)))
                .unwrap_or_else(|p| Err(format!("panicked: {}", panic_message(&p))));
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                index: i + 1,
                name: c.name,
                reference: c.reference,
                passed,
                detail,
            }
        })
        .collect();
    let passed = checks.iter().filter(|c| c.passed).count();
    VerifySummary {
        profile: opts.profile,
        passed,
        failed: checks.len() - passed,
        checks,
    }
}

fn panic_message(p: &Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown panic".into())
}

fn golden_registry(opts: &VerifyOptions) -> Outcome {
    for e in registry::entries() {
        let file = e.golden_file();
        let found = match &opts.golden_dir {
            Some(dir) => std::fs::read_to_string(dir.join(&file)).map_err(|err| format!("{file}: {err}"))?,
            None => registry::builtin_golden(e.name).ok_or(format!("{file}: no built-in copy"))?.to_string(),
        };
        let expected = e.golden_text();
        if found != expected {
            return Err(format!("{file}: {}", first_difference(&expected, &found)));
        }
    }
    Ok(format!("{} files match", registry::entries().len()))
}

/// First differing line, as `line N: expected `…`, found `…``.
fn first_difference(expected: &str, found: &str) -> String {
    let mut e = expected.lines();
    let mut f = found.lines();
    let mut line = 1;
    loop {
        match (e.next(), f.next()) {
            (Some(a), Some(b)) if a == b => line += 1,
            (None, None) => return "differs in line endings".into(),
            (a, b) => {
                return format!(
                    "line {line}: expected `{}`, found `{}`",
                    a.unwrap_or("<end of file>"),
                    b.unwrap_or("<end of file>")
                )
            }
        }
    }
}

fn registry_roundtrip(_: &VerifyOptions) -> Outcome {
    for e in registry::entries() {
        let f = e.exact();
        let text = print_form(&f).map_err(|err| err.to_string())?;
        let back: ExactForm = parse(&text).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(back == f, || format!("{} does not survive printing as `{text}`", e.name))?;
        let by_name: ExactForm = parse(e.name).map_err(|err| err.to_string())?;
        ensure(by_name == f, || format!("name `{}` evaluates to a different form", e.name))?;
    }
    Ok(format!("{} forms", registry::entries().len()))
}

fn half_square(w: &ExactForm) -> ExactForm {
    w.wedge(w).expect("2-form on R^8").scale(&Rational::from_ratio(1, 2))
}

fn cayley_identities(_: &VerifyOptions) -> Outcome {
    let c = cayley();
    ensure(c.wedge(&c).map_err(|e| e.to_string())? == volume().scale(&q(14)), || "square is not 14 vol".into())?;
    ensure(c.euclidean_norm_sq() == q(14), || "norm^2 is not 14".into())?;
    ensure(c.hodge_star() == c, || "not self-dual".into())?;
    let combo = &(&half_square(&omega_i()) + &half_square(&omega_j())) - &half_square(&omega_k());
    ensure(combo == c, || "differs from (omega_i^2 + omega_j^2 - omega_k^2)/2".into())?;
    Ok("exact".into())
}

fn kraines_identities(_: &VerifyOptions) -> Outcome {
    let k3 = kraines2().scale(&q(3));
    ensure(k3.euclidean_norm_sq() == q(30), || format!("norm^2 {}", k3.euclidean_norm_sq()))?;
    ensure(k3.wedge(&k3).map_err(|e| e.to_string())? == volume().scale(&q(30)), || "square is not 30 vol".into())?;
    let c = cartan_coords(&k3.to_float()).map_err(|e| e.to_string())?;
    ensure(c == [3.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0], || format!("coordinates {c:?}"))?;
    Ok("exact".into())
}

fn cartan_subalgebra(_: &VerifyOptions) -> Outcome {
    let h = cartan_basis();
    ensure(is_abelian(&h), || "basis elements do not commute".into())?;
    let dim = centralizer_in_lambda4plus(&h).len();
    ensure(dim == 7, || format!("centralizer has dimension {dim}"))?;
    Ok("abelian, centralizer dimension 7".into())
}

fn generator_brackets(_: &VerifyOptions) -> Outcome {
    let dx = |idx: &[usize]| ExactForm::monomial(8, idx, q(1)).expect("static index set");
    let two_shared = bracket_forms(&dx(&[1, 2, 3, 4]), &dx(&[1, 2, 5, 6]));
    ensure(two_shared.is_zero(), || "two shared indices: nonzero".into())?;
    let mut e48 = Mat8::zero();
    e48.add_to(3, 7, q(1));
    let one_shared = bracket_forms(&dx(&[1, 2, 3, 4]), &dx(&[4, 5, 6, 7]));
    ensure(one_shared == e48, || "one shared index: not e4 (x) e8*".into())?;
    let half = Rational::from_ratio(1, 2);
    let d: Vec<Rational> = (0..8).map(|i| if i < 4 { half.clone() } else { -half.clone() }).collect();
    let disjoint = bracket_forms(&dx(&[1, 2, 3, 4]), &dx(&[5, 6, 7, 8]));
    ensure(disjoint == Mat8::diagonal(&d), || "disjoint: not half the signed identity".into())?;
    Ok("3 rules exact".into())
}

fn jacobi_identity(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in 0..200 {
        let (u, v, w) = (
            random_integer_element(&mut rng),
            random_integer_element(&mut rng),
            random_integer_element(&mut rng),
        );
        let j: E7Element<Rational> = jacobi(&u, &v, &w);
        ensure(j.is_zero(), || format!("triple {t} violates Jacobi"))?;
    }
    Ok("200 triples".into())
}

fn exterior_laws(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let mono = |rng: &mut ChaCha8Rng| {
        let mask: u32 = rng.gen_range(0..256);
        let idx: Vec<usize> = (0..8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        ExactForm::monomial(8, &idx, q(rng.gen_range(-5..=5))).expect("valid monomial")
    };
    for _ in 0..1000 {
        let (a, b) = (mono(&mut rng), mono(&mut rng));
        if a.k() + b.k() <= 8 {
            let sign = if a.k() * b.k() % 2 == 0 { q(1) } else { q(-1) };
            let (ab, ba) = (a.wedge(&b).map_err(|e| e.to_string())?, b.wedge(&a).map_err(|e| e.to_string())?);
            ensure(ab == ba.scale(&sign), || "graded anticommutativity fails".into())?;
        }
    }
    for k in 0..=8 {
        let basis = subsets(8, k);
        let vals: Vec<Rational> = basis.iter().map(|_| Rational::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
        let a = KForm::from_dense(8, k, &basis, &vals).map_err(|e| e.to_string())?;
        let sign = if k * (8 - k) % 2 == 0 { q(1) } else { q(-1) };
        ensure(a.hodge_star().hodge_star() == a.scale(&sign), || format!("star squared fails in degree {k}"))?;
    }
    let basis = subsets(8, 4);
    for _ in 0..20 {
        let mut rand4 = || {
            let vals: Vec<Rational> = basis.iter().map(|_| Rational::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))).collect();
            KForm::from_dense(8, 4, &basis, &vals).expect("dense 4-form")
        };
        let (a, b) = (rand4(), rand4());
        let lhs = volume().scale(&a.dot(&b.hodge_star()).map_err(|e| e.to_string())?);
        ensure(lhs == a.wedge(&b).map_err(|e| e.to_string())?, || "pairing identity fails".into())?;
    }
    Ok("exact on random samples".into())
}

fn cartan_wedge_squares(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let c: [Rational; 7] = std::array::from_fn(|_| Rational::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
        let r = cartan_wedge_square(&c).map_err(|e| e.to_string())?;
        ensure(r.norm_sq == r.wedge_square_coeff, || format!("{c:?}"))?;
    }
    Ok("1000 coordinate vectors".into())
}

fn two_form_wirtinger(_: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let basis = subsets(4, 2);
    let mut best: f64 = 0.0;
    for _ in 0..10_000 {
        let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = FloatForm::from_dense(4, 2, &basis, &v).map_err(|e| e.to_string())?;
        let c = comass2(&a).map_err(|e| e.to_string())?;
        best = best.max(a.euclidean_norm_sq() / (c * c));
    }
    ensure(best <= 2.0 + 1e-9, || format!("ratio {best} exceeds 2"))?;
    let w: FloatForm = standard_symplectic(4).map_err(|e| e.to_string())?;
    let c = comass2(&w).map_err(|e| e.to_string())?;
    let attained = w.euclidean_norm_sq() / (c * c);
    ensure((attained - 2.0).abs() < 1e-12, || format!("symplectic ratio {attained}"))?;
    Ok(format!("max sampled ratio {best:.12}, attained 2"))
}

fn canonical_two_forms(_: &VerifyOptions) -> Outcome {
    let a = FloatForm::from_terms(4, 2, [(vec![1, 2], 3.0), (vec![3, 4], -2.0)]).map_err(|e| e.to_string())?;
    let l = canonicalize(&a).map_err(|e| e.to_string())?.lambdas;
    ensure((l[0] - 3.0).abs() < 1e-12 && (l[1] - 2.0).abs() < 1e-12, || format!("lambdas {l:?}"))?;
    let l = canonicalize(&omega_i().to_float()).map_err(|e| e.to_string())?.lambdas;
    ensure(l.iter().all(|x| (x - 1.0).abs() < 1e-12), || format!("lambdas {l:?}"))?;
    Ok("block coefficients match".into())
}

fn constants(_: &VerifyOptions) -> Outcome {
    let cat = systolic_constants();
    let get = |name: &str| cat.iter().find(|c| c.name == name).map(|c| c.value.clone());
    let r = |p: i64, d: i64| Some(Rational::from_ratio(p, d));
    ensure(get("SR(HP^2, symmetric)") == r(10, 3), || "HP^2 value".into())?;
    ensure(get("SR(CP^4, symmetric)") == r(6, 1), || "CP^4 value".into())?;
    ensure(get("SR4 lower bound") == r(6, 1) && get("SR4 upper bound") == r(14, 1), || "interval".into())?;
    for n in 1..=10u32 {
        ensure(get(&format!("Gromov CP^{n}")) == Some(gromov_constant(n)), || format!("Gromov n = {n}"))?;
        ensure(
            gromov_constant(n) == Rational::from_integer(crate::scalar::factorial(n)),
            || format!("n! at {n}"),
        )?;
        ensure(hp_symmetric_ratio(n) < cp_symmetric_ratio(n), || format!("chain fails at n = {n}"))?;
    }
    let mut six_pow = q(1);
    for b in 1..=5u32 {
        six_pow *= q(6);
        let expected = six_pow.clone() / Rational::from_integer(crate::scalar::factorial(2 * b + 1));
        ensure(s4b(b) == expected && get(&format!("s_4,{b}")) == Some(expected), || format!("s_4,{b}"))?;
    }
    Ok(format!("{} constants exact", cat.len()))
}

fn unit_comass(opts: &VerifyOptions) -> Outcome {
    let a: FloatForm = standard_symplectic(8).map_err(|e| e.to_string())?;
    let mut detail = Vec::new();
    for (name, phi) in [("cayley", cayley().to_float()), ("kraines2", kraines2().to_float()), ("symplectic", a)] {
        let v = comass_estimate(&phi, &opts.cfg).map_err(|e| e.to_string())?.value;
        ensure((v - 1.0).abs() <= 1e-6, || format!("{name}: comass {v}"))?;
        detail.push(format!("{name} {v:.12}"));
    }
    Ok(detail.join(", "))
}

fn named_ratios(opts: &VerifyOptions) -> Outcome {
    let c = ratio_report(&cayley().to_float(), &opts.cfg).map_err(|e| e.to_string())?;
    ensure((c.w_ratio - 14.0).abs() < 1e-4 && (c.wprime_ratio - 14.0).abs() < 1e-4, || format!("cayley {c:?}"))?;
    let k = ratio_report(&kraines2().to_float(), &opts.cfg).map_err(|e| e.to_string())?;
    ensure((k.w_ratio - 10.0 / 3.0).abs() < 1e-4, || format!("kraines {}", k.w_ratio))?;
    let t = ratio_report(&crate::named::kahler_sq().to_float(), &opts.cfg).map_err(|e| e.to_string())?;
    ensure((t.wprime_ratio - 6.0).abs() < 1e-4, || format!("kahler square {}", t.wprime_ratio))?;
    Ok(format!("{:.9}, {:.9}, {:.9}", c.w_ratio, k.w_ratio, t.wprime_ratio))
}

fn w4(opts: &VerifyOptions) -> Outcome {
    let r = wirtinger_constant(4, &opts.cfg).map_err(|e| e.to_string())?;
    ensure((r.estimate - 14.0).abs() <= 0.01, || format!("estimate {}", r.estimate))?;
    let norm_sq = r.witness_form.euclidean_norm_sq();
    ensure((norm_sq - 14.0).abs() <= 1e-3, || format!("witness norm^2 {norm_sq}"))?;
    let comass = comass_estimate(&r.witness_form, &opts.cfg).map_err(|e| e.to_string())?.value;
    ensure((comass - 1.0).abs() <= 1e-3, || format!("witness comass {comass}"))?;
    Ok(format!("W4 = {:.9}, witness norm^2 {norm_sq:.9}, comass {comass:.9}", r.estimate))
}

fn kahler_direction(opts: &VerifyOptions) -> Outcome {
    let v = kahler_restricted_ratio(&opts.cfg).map_err(|e| e.to_string())?;
    ensure((v - 6.0).abs() <= 1e-3, || format!("ratio {v}"))?;
    Ok(format!("{v:.9}"))
}

fn random_self_dual(rng: &mut ChaCha8Rng) -> FloatForm {
    let basis = subsets(8, 4);
    let v: Vec<f64> = basis.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    KForm::from_dense(8, 4, &basis, &v).expect("dense 4-form").selfdual_split().expect("4-form on R^8").0
}

fn cartan_reduction(opts: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for t in 0..50 {
        let z = random_self_dual(&mut rng);
        let r = reduce_to_cartan(&z, &opts.cfg).map_err(|e| e.to_string())?;
        ensure(r.membership_residual < 1e-8, || format!("form {t}: residual {}", r.membership_residual))?;
        let y = ad_action(&r.k, &z).map_err(|e| e.to_string())?;
        let drift = (y.euclidean_norm_sq() - z.euclidean_norm_sq()).abs() / z.euclidean_norm_sq();
        ensure(drift < 1e-10, || format!("form {t}: norm drift {drift}"))?;
        let monotone = r.objective_trace.windows(2).all(|w| w[1] <= w[0]);
        ensure(monotone, || format!("form {t}: objective increased"))?;
        worst = worst.max(r.membership_residual);
    }
    let r = reduce_to_cartan(&kraines2().scale(&q(3)).to_float(), &opts.cfg).map_err(|e| e.to_string())?;
    let mut s: Vec<f64> = r.coords.iter().map(|x| x.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let expected = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    ensure(s.iter().zip(expected).all(|(a, b)| (a - b).abs() <= 1e-6), || format!("3 kappa_2 -> {s:?}"))?;
    Ok(format!("50 forms, worst residual {worst:.2e}; 3 kappa_2 -> (3,1,1,1,1,1,1)"))
}

fn selfdual_chain(opts: &VerifyOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let basis = subsets(8, 4);
    let cfg = opts.cfg.clone().with_restarts(opts.cfg.restarts.min(16));
    for t in 0..10 {
        let v: Vec<f64> = basis.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
        let phi = KForm::from_dense(8, 4, &basis, &v).map_err(|e| e.to_string())?;
        let r = selfdual_chain_check(&phi, &cfg, 1e-6).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("form {t}: {r:?}"))?;
    }
    Ok("10 random forms".into())
}
