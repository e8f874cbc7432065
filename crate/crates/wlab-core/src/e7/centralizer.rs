//! Centralizers inside the self-dual 4-vectors `Λ⁴₊`.

use super::{bracket_forms, DIM};
use crate::exterior::{subsets, KForm};
use crate::linalg::nullspace;
use crate::scalar::{Scalar, ScalarKind};

/// The 35 forms `e_I + *e_I` with `1 ∈ I`, in lexicographic order of `I`.
pub fn lambda4plus_basis<S: Scalar>() -> Vec<KForm<S>> {
    subsets(DIM, 4)
        .into_iter()
        .filter(|m| m.contains(1))
        .map(|m| KForm::self_dual_pair(DIM, &m.indices()).expect("index set on R^8"))
        .collect()
}

/// Basis of `{p ∈ Λ⁴₊ : [p, s] = 0 for all s ∈ set}`, computed by exact
/// elimination for rational input.
///
/// Brackets of two 4-vectors lie in `sl(8)`, so each `s` contributes 64
/// linear conditions on the 35 coordinates.
pub fn centralizer_in_lambda4plus<S: Scalar>(set: &[KForm<S>]) -> Vec<KForm<S>> {
    let basis = lambda4plus_basis::<S>();
    let mut rows: Vec<Vec<S>> = Vec::with_capacity(64 * set.len());
    for s in set {
        let images: Vec<_> = basis.iter().map(|b| bracket_forms(b, s)).collect();
        for r in 0..DIM {
            for c in 0..DIM {
                rows.push(images.iter().map(|m| m.get(r, c).clone()).collect());
            }
        }
    }
    nullspace(rows, basis.len())
        .into_iter()
        .map(|w| {
            let mut acc = KForm::zero(DIM, 4).expect("R^8");
            for (c, b) in w.iter().zip(&basis) {
                if !c.is_zero() {
                    acc = &acc + &b.scale(c);
                }
            }
            acc
        })
        .collect()
}

/// Whether all pairwise brackets of the 4-forms vanish: exactly over the
/// rationals, up to rounding relative to the input sizes in floating point.
pub fn is_abelian<S: Scalar>(forms: &[KForm<S>]) -> bool {
    forms.iter().enumerate().all(|(i, x)| {
        forms[i + 1..].iter().all(|y| {
            let m = bracket_forms(x, y);
            match S::KIND {
                ScalarKind::Rational => m.is_zero(),
                ScalarKind::Float => {
                    m.frobenius() <= 1e-12 * (1.0 + x.euclidean_norm() * y.euclidean_norm())
                }
            }
        })
    })
}
