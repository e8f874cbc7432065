use rand::Rng;

use super::*;
use crate::exterior::subsets;
use crate::named::{cayley, kraines2, CARTAN_INDICES};

fn random_self_dual(rng: &mut ChaCha8Rng) -> FloatForm {
    let v: Vec<f64> = (0..70).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let phi = KForm::from_dense(8, 4, &subsets(8, 4), &v).unwrap();
    phi.selfdual_split().unwrap().0
}

fn sorted_abs(c: &[f64; 7]) -> Vec<f64> {
    let mut v: Vec<f64> = c.iter().map(|x| x.abs()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

#[test]
fn compound_matches_direct_minors() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let k = Rotation::random(&mut rng);
    let c = fourth_compound(&k.0);
    let basis = subsets(8, 4);
    for (a, i) in basis.iter().enumerate().step_by(7) {
        for (b, j) in basis.iter().enumerate().step_by(5) {
            let sub = DMatrix::from_fn(4, 4, |r, s| k.0[(i.indices()[r] - 1, j.indices()[s] - 1)]);
            assert!((sub.determinant() - c[(a, b)]).abs() < 1e-13);
        }
    }
}

#[test]
fn compound_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (a, b) = (Rotation::random(&mut rng), Rotation::random(&mut rng));
    let lhs = fourth_compound(&(a.0 * b.0));
    let rhs = fourth_compound(&a.0) * fourth_compound(&b.0);
    assert!((lhs - rhs).abs().max() < 1e-12);
}

#[test]
fn ad_action_examples() {
    let phi = KForm::monomial(8, &[1, 2, 3, 4], 1.0).unwrap();
    assert_eq!(ad_action(&Rotation::identity(), &phi).unwrap(), phi);
    // only the first index of 1234 is flipped
    let mut d = DMatrix::identity(8, 8);
    d[(0, 0)] = -1.0;
    d[(7, 7)] = -1.0;
    let k = Rotation::new(d).unwrap();
    assert_eq!(ad_action(&k, &phi).unwrap(), phi.scale(&-1.0));

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = cayley().to_float();
    for _ in 0..5 {
        let k = Rotation::random(&mut rng);
        let moved = ad_action(&k, &c).unwrap();
        assert!((moved.euclidean_norm_sq() - 14.0).abs() < 1e-10);
        assert!((&moved - &moved.hodge_star()).euclidean_norm() < 1e-12);
    }
}

#[test]
fn rotation_validation() {
    let mut d = DMatrix::identity(8, 8);
    d[(0, 0)] = -1.0;
    assert!(Rotation::new(d).is_err());
    let mut s = DMatrix::identity(8, 8);
    s[(0, 1)] = 1e-6;
    assert!(Rotation::new(s).is_err());
    assert!(Rotation::new(DMatrix::identity(7, 7)).is_err());
}

#[test]
fn regular_element_is_verified_by_exact_centralizer() {
    // 1..7 lies on a wall: its centralizer picks up one extra direction
    assert_eq!(centralizer_dimension(&[1, 2, 3, 4, 5, 6, 7]), 8);
    let x = regular_element();
    assert_eq!(x.coords, [2, 3, 5, 7, 11, 13, 17]);
    assert_eq!(x.perturbations, 1);
    assert_eq!(centralizer_dimension(&x.coords), 7);
    // a degenerate choice has a larger centralizer
    assert!(centralizer_dimension(&[1, 0, 0, 0, 0, 0, 0]) > 7);
    assert_eq!(centralizer_dimension(&[0; 7]), 35);
    assert_eq!(first_primes(5), vec![2, 3, 5, 7, 11]);
}

#[test]
fn descent_direction_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let z = random_self_dual(&mut rng);
    let zn = dense(&z.scale(&(1.0 / z.euclidean_norm())));
    let x = regular_element().form.to_float();
    let xv = dense(&x);
    let k = Rotation::random(&mut rng);
    let (f, g) = evaluate(&zn, &x, &xv, &k).unwrap();
    let h = 1e-6;
    let fp = evaluate(&zn, &x, &xv, &k.left_exp(&(g * h))).unwrap().0;
    let fm = evaluate(&zn, &x, &xv, &k.left_exp(&(g * -h))).unwrap().0;
    let slope = (fp - fm) / (2.0 * h);
    assert!((slope + g.norm_squared()).abs() < 1e-6 * (1.0 + g.norm_squared()), "{slope} {}", g.norm_squared());
    assert!(fp < f);
}

#[test]
fn cayley_is_already_reduced() {
    let r = reduce_to_cartan(&cayley().to_float(), &OptimizerConfig::default()).unwrap();
    assert!(r.converged);
    assert!(r.membership_residual < 1e-8);
    for v in sorted_abs(&r.coords) {
        assert!((v - 1.0).abs() < 1e-8);
    }
}

#[test]
fn kraines_reduces_to_three_and_six_ones() {
    let z = kraines2().scale(&Rational::from_i64(3)).to_float();
    let r = reduce_to_cartan(&z, &OptimizerConfig::default()).unwrap();
    assert!(r.converged, "{r:?}");
    assert!(r.membership_residual < 1e-8);
    let s = sorted_abs(&r.coords);
    let expected = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    for (a, b) in s.iter().zip(expected) {
        assert!((a - b).abs() < 1e-8, "{s:?}");
    }
}

#[test]
fn orbit_invariants_survive_reduction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let c: Vec<f64> = (0..7).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let h = cartan_element(&c);
        let z = ad_action(&Rotation::random(&mut rng), &h).unwrap();
        let r = reduce_to_cartan(&z, &OptimizerConfig::default()).unwrap();
        assert!(r.converged && r.membership_residual < 1e-8);
        let hp = r.reduced_form();
        assert!((hp.euclidean_norm_sq() - h.euclidean_norm_sq()).abs() < 1e-8);
        let sq = |f: &FloatForm| f.wedge(f).unwrap().top_coefficient().unwrap();
        assert!((sq(&hp) - sq(&h)).abs() < 1e-8 * (1.0 + sq(&h).abs()));
    }
}

#[test]
fn random_self_dual_forms_reduce() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cfg = OptimizerConfig::default();
    for _ in 0..50 {
        let z = random_self_dual(&mut rng);
        let r = reduce_to_cartan(&z, &cfg).unwrap();
        assert!(r.converged && r.membership_residual < 1e-8, "{r:?}");
        for w in r.objective_trace.windows(2) {
            assert!(w[1] <= w[0]);
        }
        let y = ad_action(&r.k, &z).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
        assert!(rel(y.euclidean_norm_sq(), z.euclidean_norm_sq()) < 1e-9);
        let sq = |f: &FloatForm| f.wedge(f).unwrap().top_coefficient().unwrap();
        assert!(rel(sq(&r.reduced_form()), sq(&z)) < 1e-9);
    }
}

#[test]
fn rejects_non_self_dual_input() {
    let phi = KForm::monomial(8, &[1, 2, 3, 4], 1.0).unwrap();
    assert!(matches!(reduce_to_cartan(&phi, &OptimizerConfig::default()), Err(Error::NotSelfDual(_))));
    let zero = KForm::zero(8, 4).unwrap();
    assert!(reduce_to_cartan(&zero, &OptimizerConfig::default()).unwrap().converged);
    assert_eq!(CARTAN_INDICES.len(), 7);
}

