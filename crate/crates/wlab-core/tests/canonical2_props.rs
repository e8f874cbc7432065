use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wlab_core::canonical2::{comass2, standard_symplectic, verify_power_inequality};
use wlab_core::comass::OptimizerConfig;
use wlab_core::exterior::subsets;
use wlab_core::named::omega_i;
use wlab_core::{FloatForm, KForm};

#[test]
fn two_form_wirtinger_constant_is_two() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let basis = subsets(4, 2);
    let mut best: f64 = 0.0;
    for _ in 0..10_000 {
        let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = FloatForm::from_dense(4, 2, &basis, &v).unwrap();
        let c = comass2(&a).unwrap();
        best = best.max(a.euclidean_norm_sq() / (c * c));
    }
    assert!(best <= 2.0 + 1e-9, "{best}");
    // attained by the restriction of ω_i to R^4
    let w: FloatForm = standard_symplectic(4).unwrap();
    let c = comass2(&w).unwrap();
    assert!((w.euclidean_norm_sq() / (c * c) - 2.0).abs() < 1e-12);
}

#[test]
fn power_inequality_examples() {
    let cfg = OptimizerConfig::default().with_restarts(16);
    let w: FloatForm = standard_symplectic(4).unwrap();
    let r = verify_power_inequality(&w, 2, &cfg).unwrap();
    assert!(r.holds && (r.lhs_lower_bound - 2.0).abs() < 1e-9 && (r.rhs - 2.0).abs() < 1e-12);

    let simple = KForm::monomial(8, &[1, 2], 1.0).unwrap();
    let r = verify_power_inequality(&simple, 2, &cfg).unwrap();
    assert!(r.holds && r.lhs_lower_bound == 0.0 && (r.rhs - 2.0).abs() < 1e-12);

    let r = verify_power_inequality(&omega_i().to_float(), 2, &cfg).unwrap();
    assert!(r.holds && (r.lhs_lower_bound - 2.0).abs() < 1e-6 && (r.rhs - 2.0).abs() < 1e-12);

    assert!(verify_power_inequality(&w, 3, &cfg).is_err());
}

#[test]
fn power_inequality_on_random_forms() {
    let cfg = OptimizerConfig::default().with_restarts(8);
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let basis = subsets(6, 2);
    for _ in 0..20 {
        let v: Vec<f64> = (0..basis.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = FloatForm::from_dense(6, 2, &basis, &v).unwrap();
        for mu in 1..=3 {
            assert!(verify_power_inequality(&a, mu, &cfg).unwrap().holds);
        }
    }
}
