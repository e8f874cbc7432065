use proptest::prelude::*;
use wlab_core::exterior::subsets;
use wlab_core::named::{cayley, e_pair, kraines2, omega_i, volume};
use wlab_core::{ExactForm, FloatForm, Frame, KForm, Rational, Scalar};

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn dx(idx: &[usize]) -> ExactForm {
    ExactForm::monomial(8, idx, q(1)).unwrap()
}

fn rational_form(k: usize, coeffs: &[(i64, i64)]) -> ExactForm {
    let basis = subsets(8, k);
    let vals: Vec<Rational> = coeffs.iter().map(|&(p, d)| Rational::from_ratio(p, d)).collect();
    KForm::from_dense(8, k, &basis, &vals[..basis.len()]).unwrap()
}

#[test]
fn wedge_examples() {
    let a = ExactForm::monomial(8, &[1, 2], q(1)).unwrap();
    let b = ExactForm::monomial(8, &[3, 4], q(1)).unwrap();
    assert_eq!(a.wedge(&b).unwrap(), dx(&[1, 2, 3, 4]));

    let w = omega_i();
    let expected = [[1, 2, 3, 4], [1, 2, 5, 6], [1, 2, 7, 8]]
        .iter()
        .map(|i| e_pair(i).unwrap())
        .fold(ExactForm::zero(8, 4).unwrap(), |acc, f| &acc + &f)
        .scale(&q(2));
    assert_eq!(w.wedge(&w).unwrap(), expected);

    let c = cayley();
    assert_eq!(c.wedge(&c).unwrap(), volume().scale(&q(14)));
    assert_eq!(c.euclidean_norm_sq(), q(14));
    assert_eq!(c.dot(&c.hodge_star()).unwrap(), q(14));
}

#[test]
fn star_examples() {
    assert_eq!(dx(&[1, 2, 3, 4]).hodge_star(), dx(&[5, 6, 7, 8]));
    assert_eq!(dx(&[1, 3, 5, 7]).hodge_star().hodge_star(), dx(&[1, 3, 5, 7]));
    assert_eq!(cayley().hodge_star(), cayley());
}

#[test]
fn norm_examples() {
    assert_eq!(kraines2().scale(&q(3)).euclidean_norm_sq(), q(30));
    assert_eq!(cayley().euclidean_norm_sq(), q(14));
    assert_eq!(dx(&[1, 2, 3, 4]).euclidean_norm_sq(), q(1));
}

#[test]
fn evaluate_examples() {
    let a: FloatForm = wlab_core::canonical2::standard_symplectic(8).unwrap();
    let f = Frame::coordinate(8, &[1, 2]).unwrap();
    assert_eq!(a.evaluate(&f).unwrap(), 1.0);
    let f = Frame::coordinate(8, &[1, 2, 3, 4]).unwrap();
    assert_eq!(cayley().to_float().evaluate(&f).unwrap(), 1.0);
    // a repeated direction cannot be orthonormal, so it is rejected
    let v = vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0];
    assert!(Frame::from_vectors(&[v.clone(), v]).is_err());
}

#[test]
fn selfdual_split_examples() {
    let (p, m) = cayley().selfdual_split().unwrap();
    assert_eq!((p, m.is_zero()), (cayley(), true));
    let (p, m) = dx(&[1, 2, 3, 4]).selfdual_split().unwrap();
    let half = Rational::from_ratio(1, 2);
    assert_eq!(p, e_pair(&[1, 2, 3, 4]).unwrap().scale(&half));
    assert_eq!(m, (&dx(&[1, 2, 3, 4]) - &dx(&[5, 6, 7, 8])).scale(&half));
    let k3 = kraines2().scale(&q(3));
    let (p, m) = k3.selfdual_split().unwrap();
    assert_eq!((p, m.is_zero()), (k3, true));
    assert!(dx(&[1, 2, 3]).selfdual_split().is_err());
}

#[test]
fn wedge_rejects_mismatched_dimensions() {
    let a = ExactForm::monomial(6, &[1, 2], q(1)).unwrap();
    assert!(a.wedge(&dx(&[1, 2, 3, 4])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn wedge_is_graded_anticommutative(a in 0u32..256, b in 0u32..256, ca in -5i64..=5, cb in -5i64..=5) {
        let mono = |mask: u32, c: i64| {
            let idx: Vec<usize> = (0..8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
            ExactForm::monomial(8, &idx, q(c)).unwrap()
        };
        let (x, y) = (mono(a, ca), mono(b, cb));
        let sign = if (x.k() * y.k()) % 2 == 0 { q(1) } else { q(-1) };
        if x.k() + y.k() <= 8 {
            prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().scale(&sign));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn star_squares_to_the_degree_sign(k in 0usize..=8, coeffs in prop::collection::vec((-9i64..=9, 1i64..=4), 70)) {
        let a = rational_form(k, &coeffs);
        let sign = if (k * (8 - k)) % 2 == 0 { q(1) } else { q(-1) };
        prop_assert_eq!(a.hodge_star().hodge_star(), a.scale(&sign));
    }

    #[test]
    fn pairing_matches_wedge_with_star(
        a in prop::collection::vec((-9i64..=9, 1i64..=4), 70),
        b in prop::collection::vec((-9i64..=9, 1i64..=4), 70),
    ) {
        let (a, b) = (rational_form(4, &a), rational_form(4, &b));
        // ⟨a, ⋆b⟩ vol = a ∧ b
        let lhs = volume().scale(&a.dot(&b.hodge_star()).unwrap());
        prop_assert_eq!(lhs, a.wedge(&b).unwrap());
    }

    #[test]
    fn evaluation_is_bounded_by_the_norm(
        k in 1usize..=7,
        coeffs in prop::collection::vec(-1.0f64..1.0, 70),
        m in prop::collection::vec(-1.0f64..1.0, 64),
    ) {
        let basis = subsets(8, k);
        let a = FloatForm::from_dense(8, k, &basis, &coeffs[..basis.len()]).unwrap();
        let mat = nalgebra::DMatrix::from_column_slice(8, 8, &m).columns(0, k).into_owned();
        let qr = mat.qr().q();
        if let Ok(f) = Frame::from_matrix(qr) {
            prop_assert!(a.evaluate(&f).unwrap().abs() <= a.euclidean_norm() + 1e-9);
        }
    }
}
