//! Named constant-coefficient forms on R^8 = H^2.
//!
//! Coordinates `1..4` are the real, i, j, k parts of the first quaternion
//! and `5..8` those of the second (the primed coordinates `1'..4'`).

use crate::error::Result;
use crate::exterior::ExactForm;
use crate::scalar::{Rational, Scalar};

fn two_form(terms: &[([usize; 2], i64)]) -> ExactForm {
    ExactForm::from_terms(8, 2, terms.iter().map(|(idx, c)| (idx.to_vec(), Rational::from_i64(*c))))
        .expect("static 2-form is well formed")
}

/// Kähler form of the complex structure given by right multiplication by i.
pub fn omega_i() -> ExactForm {
    two_form(&[([1, 2], 1), ([3, 4], 1), ([5, 6], 1), ([7, 8], 1)])
}

pub fn omega_j() -> ExactForm {
    two_form(&[([1, 3], 1), ([2, 4], -1), ([5, 7], 1), ([6, 8], -1)])
}

pub fn omega_k() -> ExactForm {
    two_form(&[([1, 4], 1), ([2, 3], 1), ([5, 8], 1), ([6, 7], 1)])
}

/// Index sets of the self-dual basis `h_1, …, h_7` of the Cartan subspace.
pub const CARTAN_INDICES: [[usize; 4]; 7] = [
    [1, 2, 3, 4],
    [1, 2, 5, 6],
    [1, 2, 7, 8],
    [1, 3, 5, 7],
    [1, 4, 6, 7],
    [1, 3, 6, 8],
    [1, 4, 5, 8],
];

/// `e^{abcd} = dx_{abcd} + *dx_{abcd}`.
pub fn e_pair(idx: &[usize]) -> Result<ExactForm> {
    ExactForm::self_dual_pair(8, idx)
}

/// The seven basis forms `h_i = e^{I_i}`, in [`CARTAN_INDICES`] order.
pub fn cartan_basis() -> Vec<ExactForm> {
    CARTAN_INDICES
        .iter()
        .map(|idx| e_pair(idx).expect("static index set"))
        .collect()
}

/// `Σ c_i h_i`.
pub fn cartan_element<S: Scalar>(coords: &[S]) -> crate::exterior::KForm<S> {
    let mut acc = crate::exterior::KForm::<S>::zero(8, 4).expect("R^8");
    for (c, idx) in coords.iter().zip(CARTAN_INDICES.iter()) {
        let h = crate::exterior::KForm::<S>::self_dual_pair(8, idx).expect("static index set");
        acc = &acc + &h.scale(c);
    }
    acc
}

/// Signs of the Cayley form in the Cartan basis.
pub const CAYLEY_COORDS: [i64; 7] = [1, 1, 1, 1, -1, -1, -1];

/// The Cayley 4-form `e^{1234} + e^{1256} + e^{1278} + e^{1357} − e^{1467} − e^{1368} − e^{1458}`.
pub fn cayley() -> ExactForm {
    let c: Vec<Rational> = CAYLEY_COORDS.iter().map(|&x| Rational::from_i64(x)).collect();
    cartan_element(&c)
}

/// The Kraines form `(ω_i² + ω_j² + ω_k²) / 6`.
pub fn kraines2() -> ExactForm {
    let sum = &(&square(&omega_i()) + &square(&omega_j())) + &square(&omega_k());
    sum.scale(&Rational::from_ratio(1, 6))
}

/// `τ²` for the Kähler form `τ = ω_i`.
pub fn kahler_sq() -> ExactForm {
    square(&omega_i())
}

pub fn volume() -> ExactForm {
    ExactForm::volume(8).expect("R^8")
}

fn square(f: &ExactForm) -> ExactForm {
    f.wedge(f).expect("2-forms on R^8")
}
