use wlab_core::named::{
    cartan_basis, cartan_element, cayley, e_pair, kahler_sq, kraines2, omega_i, omega_j, omega_k, volume, CARTAN_INDICES,
    CAYLEY_COORDS,
};
use wlab_core::wirtinger::cartan_coords;
use wlab_core::{ExactForm, Rational, Scalar};

fn q(v: i64) -> Rational {
    Rational::from_i64(v)
}

fn half_square(w: &ExactForm) -> ExactForm {
    w.wedge(w).unwrap().scale(&Rational::from_ratio(1, 2))
}

#[test]
fn half_squares_are_sums_of_three_pairs() {
    let sum = |idx: [[usize; 4]; 3], signs: [i64; 3]| {
        idx.iter()
            .zip(signs)
            .fold(ExactForm::zero(8, 4).unwrap(), |acc, (i, s)| &acc + &e_pair(i).unwrap().scale(&q(s)))
    };
    assert_eq!(half_square(&omega_i()), sum([[1, 2, 3, 4], [1, 2, 5, 6], [1, 2, 7, 8]], [1, 1, 1]));
    assert_eq!(half_square(&omega_j()), sum([[1, 2, 3, 4], [1, 3, 5, 7], [1, 3, 6, 8]], [1, 1, -1]));
    assert_eq!(half_square(&omega_k()), sum([[1, 2, 3, 4], [1, 4, 5, 8], [1, 4, 6, 7]], [1, 1, 1]));
}

#[test]
fn cayley_from_the_three_squares() {
    let (i, j, k) = (half_square(&omega_i()), half_square(&omega_j()), half_square(&omega_k()));
    assert_eq!(&(&i + &j) - &k, cayley());
    assert_eq!(cayley().num_terms(), 14);
    let c: Vec<Rational> = CAYLEY_COORDS.iter().map(|&x| q(x)).collect();
    assert_eq!(cartan_element(&c), cayley());
}

#[test]
fn kraines_coordinates() {
    let k3 = kraines2().scale(&q(3));
    let c = cartan_coords(&k3.to_float()).unwrap();
    assert_eq!(c, [3.0, 1.0, 1.0, 1.0, 1.0, -1.0, 1.0]);
    assert_eq!(k3.euclidean_norm_sq(), q(30));
    assert_eq!(k3.wedge(&k3).unwrap(), volume().scale(&q(30)));
    assert_eq!(kraines2().hodge_star(), kraines2());
}

#[test]
fn cartan_basis_is_orthogonal_and_self_dual() {
    let h = cartan_basis();
    assert_eq!(h.len(), CARTAN_INDICES.len());
    for (a, ha) in h.iter().enumerate() {
        assert_eq!(ha.hodge_star(), *ha);
        for (b, hb) in h.iter().enumerate() {
            let expected = if a == b { q(2) } else { q(0) };
            assert_eq!(ha.dot(hb).unwrap(), expected);
            let wedge = ha.wedge(hb).unwrap();
            assert_eq!(wedge, volume().scale(&expected));
        }
    }
}

#[test]
fn kahler_square() {
    let c = cartan_coords(&kahler_sq().to_float()).unwrap();
    assert_eq!(c, [2.0, 2.0, 2.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(kahler_sq().euclidean_norm_sq(), q(24));
}
