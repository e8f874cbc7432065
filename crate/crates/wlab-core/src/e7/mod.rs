//! The split real form of E7 in Adams's model `sl(8) ⊕ Λ⁴(8)`.
//!
//! Brackets:
//! * `[a, b]` on `sl(8)` is the matrix commutator;
//! * `[a, x]` is the derivation action of `a` on 4-vectors, slot by slot;
//! * `[x, y] ∈ sl(8)` is defined by duality, `(a, [x, y]) = ([a, x], y)` for
//!   every `a`, where `(a, b) = tr(ab)` on `sl(8)` and `(α, β) vol = α ∧ β`
//!   on `Λ⁴`.
//!
//! The invariant form `(u, v)` is the orthogonal sum of these two pairings;
//! the Killing form is `36 (u, v)`.

mod centralizer;
mod matrix;

use std::fmt;

use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exterior::{shuffle_sign, KForm, MultiIndex};
use crate::scalar::{Rational, Scalar};

pub use centralizer::{centralizer_in_lambda4plus, is_abelian, lambda4plus_basis};
pub use matrix::{Mat8, DIM};

/// A traceless 8×8 matrix.
#[derive(Clone, PartialEq)]
pub struct SL8<S>(Mat8<S>);

impl<S: Scalar> SL8<S> {
    pub fn new(m: Mat8<S>) -> Result<Self> {
        let t = m.trace();
        let ok = match S::KIND {
            crate::ScalarKind::Rational => t.is_zero(),
            crate::ScalarKind::Float => t.to_f64().abs() <= 1e-12 * (1.0 + m.frobenius()),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "sl(8) element has trace {}",
                t.to_literal()
            )));
        }
        Ok(SL8(m))
    }

    pub fn zero() -> Self {
        SL8(Mat8::zero())
    }

    /// `E_ij` for `i ≠ j` (1-based).
    pub fn elementary(i: usize, j: usize) -> Result<Self> {
        if i == j {
            return Err(Error::InvalidArgument("E_ii is not traceless".into()));
        }
        Ok(SL8(Mat8::elementary(i, j)))
    }

    pub fn matrix(&self) -> &Mat8<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Mat8<S> {
        self.0
    }
}

/// `(a, x)` with `a ∈ sl(8)` and `x ∈ Λ⁴(R^8)`.
#[derive(Clone, PartialEq)]
pub struct E7Element<S> {
    pub a: SL8<S>,
    pub x: KForm<S>,
}

impl<S: Scalar> E7Element<S> {
    pub fn new(a: SL8<S>, x: KForm<S>) -> Result<Self> {
        if x.n() != DIM || x.k() != 4 {
            return Err(Error::Degree(format!(
                "Λ⁴ component must be a 4-form on R^8, got a {}-form on R^{}",
                x.k(),
                x.n()
            )));
        }
        Ok(E7Element { a, x })
    }

    pub fn zero() -> Self {
        E7Element {
            a: SL8::zero(),
            x: KForm::zero(DIM, 4).expect("R^8"),
        }
    }

    pub fn from_matrix(a: SL8<S>) -> Self {
        E7Element {
            a,
            x: KForm::zero(DIM, 4).expect("R^8"),
        }
    }

    pub fn from_form(x: KForm<S>) -> Result<Self> {
        Self::new(SL8::zero(), x)
    }

    pub fn is_zero(&self) -> bool {
        self.a.0.is_zero() && self.x.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        E7Element {
            a: SL8(self.a.0.add(&o.a.0)),
            x: &self.x + &o.x,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        E7Element {
            a: SL8(self.a.0.sub(&o.a.0)),
            x: &self.x - &o.x,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        E7Element {
            a: SL8(self.a.0.scale(c)),
            x: self.x.scale(c),
        }
    }

    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Vec<Value>> = self
            .a
            .0
            .rows()
            .into_iter()
            .map(|r| r.iter().map(|v| v.to_json()).collect())
            .collect();
        json!({ "a": rows, "x": self.x })
    }

    pub fn to_json_string(&self) -> String {
        self.to_json_value().to_string()
    }

    /// `{"a": [[..8 entries..] × 8], "x": <form>}`; either part may be omitted.
    pub fn from_json_value(v: &Value) -> Result<Self> {
        let a = match v.get("a") {
            None | Some(Value::Null) => SL8::zero(),
            Some(Value::Array(rows)) => {
                let rows = rows
                    .iter()
                    .map(|r| {
                        r.as_array()
                            .ok_or_else(|| Error::Json("matrix row must be an array".into()))?
                            .iter()
                            .map(S::from_json)
                            .collect::<Result<Vec<S>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                SL8::new(Mat8::from_rows(rows)?)?
            }
            Some(other) => return Err(Error::Json(format!("bad matrix part {other}"))),
        };
        let x = match v.get("x") {
            None | Some(Value::Null) => KForm::zero(DIM, 4)?,
            Some(f) => KForm::from_json_str(&f.to_string())?,
        };
        Self::new(a, x)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(&v)
    }
}

impl E7Element<Rational> {
    pub fn to_float(&self) -> E7Element<f64> {
        let rows = self.a.0.rows().into_iter().map(|r| r.iter().map(Scalar::to_f64).collect()).collect();
        E7Element {
            a: SL8(Mat8::from_rows(rows).expect("8x8 rows")),
            x: self.x.to_float(),
        }
    }
}

impl<S: Scalar> fmt::Debug for SL8<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<S: Scalar> fmt::Debug for E7Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("E7Element").field("a", &self.a).field("x", &self.x).finish()
    }
}

impl<S: Scalar> fmt::Debug for CartanParts<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CartanParts")
            .field("k_part", &self.k_part)
            .field("p_part", &self.p_part)
            .finish()
    }
}

/// Derivation action of a matrix on 4-vectors: `a · (v₁∧…∧v₄) = Σ v₁∧…∧a v_s∧…∧v₄`.
pub fn act<S: Scalar>(a: &Mat8<S>, x: &KForm<S>) -> KForm<S> {
    let mut out = KForm::zero(x.n(), x.k()).expect("same shape");
    for (set, c) in x.terms() {
        for j in set.iter() {
            // move e_j to the front: e_I = σ e_j ∧ e_{I∖j}
            let rest = set.without(j);
            let sigma = if set.count_below(j) % 2 == 0 { 1 } else { -1 };
            for i in 1..=DIM {
                let aij = a.get(i - 1, j - 1);
                if aij.is_zero() {
                    continue;
                }
                if i != j && rest.contains(i) {
                    continue;
                }
                let target = rest.with(i);
                let sign = sigma * if rest.count_below(i) % 2 == 0 { 1 } else { -1 };
                let v = aij.clone() * c.clone();
                out.add_term(target, if sign < 0 { -v } else { v });
            }
        }
    }
    out
}

/// `(α, β)` with `α ∧ β = (α, β) vol`.
pub fn wedge_pairing<S: Scalar>(x: &KForm<S>, y: &KForm<S>) -> S {
    let mut acc = S::zero();
    for (i, cx) in x.terms() {
        let comp = i.complement(x.n());
        let cy = y.coeff(comp);
        if !cy.is_zero() {
            let v = cx.clone() * cy;
            acc = acc + if shuffle_sign(i, comp) < 0 { -v } else { v };
        }
    }
    acc
}

/// `[x, y] ∈ sl(8)` for 4-vectors, from `(E_ij, [x, y]) = ([E_ij, x], y)`.
pub fn bracket_forms<S: Scalar>(x: &KForm<S>, y: &KForm<S>) -> Mat8<S> {
    let n = x.n();
    let mut m = Mat8::zero();
    for (i_set, cx) in x.terms() {
        for (j_set, cy) in y.terms() {
            let common = i_set.intersection(j_set);
            match common.len() {
                0 => {
                    // y must be the complement: [E_ii, e_I] = e_I for i ∈ I
                    if i_set.union(j_set).len() != n {
                        continue;
                    }
                    let v = cx.clone() * cy.clone();
                    let v = if shuffle_sign(i_set, j_set) < 0 { -v } else { v };
                    for i in i_set.iter() {
                        m.add_to(i - 1, i - 1, v.clone());
                    }
                }
                1 => {
                    // [E_ij, e_I] = ±e_{I−j+i} pairs with e_J only for
                    // {j} = I ∩ J and i the index outside I ∪ J
                    let j = common.iter().next().expect("one element");
                    let outside = i_set.union(j_set).complement(n);
                    if outside.len() != 1 {
                        continue;
                    }
                    let i = outside.iter().next().expect("one element");
                    let rest = i_set.without(j);
                    let moved = rest.with(i);
                    let sign = (if i_set.count_below(j) % 2 == 0 { 1 } else { -1 })
                        * (if rest.count_below(i) % 2 == 0 { 1 } else { -1 })
                        * shuffle_sign(moved, j_set);
                    let v = cx.clone() * cy.clone();
                    // (E_ij, M) = tr(E_ij M) = M_ji
                    m.add_to(j - 1, i - 1, if sign < 0 { -v } else { v });
                }
                _ => {}
            }
        }
    }
    m.traceless_part()
}

pub fn bracket<S: Scalar>(u: &E7Element<S>, v: &E7Element<S>) -> E7Element<S> {
    let a = u
        .a
        .0
        .commutator(&v.a.0)
        .add(&bracket_forms(&u.x, &v.x));
    let x = &act(&u.a.0, &v.x) - &act(&v.a.0, &u.x);
    E7Element { a: SL8(a), x }
}

/// The invariant form `tr(a_u a_v) + (x_u, x_v)`.
pub fn inner<S: Scalar>(u: &E7Element<S>, v: &E7Element<S>) -> S {
    u.a.0.trace_product(&v.a.0) + wedge_pairing(&u.x, &v.x)
}

/// `(​[u, v], w) + (v, [u, w])`, zero for an invariant form.
pub fn ad_invariance_check<S: Scalar>(u: &E7Element<S>, v: &E7Element<S>, w: &E7Element<S>) -> S {
    inner(&bracket(u, v), w) + inner(v, &bracket(u, w))
}

/// Jacobi sum `[[u,v],w] + [[v,w],u] + [[w,u],v]`.
pub fn jacobi<S: Scalar>(u: &E7Element<S>, v: &E7Element<S>, w: &E7Element<S>) -> E7Element<S> {
    bracket(&bracket(u, v), w)
        .add(&bracket(&bracket(v, w), u))
        .add(&bracket(&bracket(w, u), v))
}

/// `u = k + p` with `k ∈ so(8) ⊕ Λ⁴₋` and `p ∈ sym₀(8) ⊕ Λ⁴₊`.
#[derive(Clone, PartialEq)]
pub struct CartanParts<S> {
    pub k_part: E7Element<S>,
    pub p_part: E7Element<S>,
}

pub fn cartan_decompose<S: Scalar>(u: &E7Element<S>) -> CartanParts<S> {
    let (plus, minus) = u.x.selfdual_split().expect("4-form on R^8");
    CartanParts {
        k_part: E7Element {
            a: SL8(u.a.0.skew_part()),
            x: minus,
        },
        p_part: E7Element {
            a: SL8(u.a.0.sym_part()),
            x: plus,
        },
    }
}

/// Every nonzero bracket `[dx_I, dx_J]` of basis 4-vectors with `I < J`.
/// Sparse random element with small integer entries: four random matrix
/// entries (trace removed) and five random monomials, coefficients in -3..=3.
pub fn random_integer_element(rng: &mut rand_chacha::ChaCha8Rng) -> E7Element<Rational> {
    use rand::Rng;
    let mut a = Mat8::zero();
    for _ in 0..4 {
        let (i, j) = (rng.gen_range(0..8), rng.gen_range(0..8));
        a.add_to(i, j, Rational::from_i64(rng.gen_range(-3..=3)));
    }
    let basis = crate::exterior::subsets(8, 4);
    let mut x = KForm::zero(8, 4).expect("R^8");
    for _ in 0..5 {
        let m = basis[rng.gen_range(0..basis.len())];
        x.add_term(m, Rational::from_i64(rng.gen_range(-3..=3)));
    }
    E7Element::new(SL8(a.traceless_part()), x).expect("4-form on R^8")
}

pub fn structure_constants() -> Value {
    use crate::scalar::Rational;
    let basis = crate::exterior::subsets(DIM, 4);
    let mut entries = Vec::new();
    for (a, &i_set) in basis.iter().enumerate() {
        for &j_set in &basis[a + 1..] {
            let x = unit(i_set);
            let y = unit(j_set);
            let m: Mat8<Rational> = bracket_forms(&x, &y);
            if m.is_zero() {
                continue;
            }
            let mut nz = Vec::new();
            for r in 0..DIM {
                for c in 0..DIM {
                    let v = m.get(r, c);
                    if !v.is_zero() {
                        nz.push(json!([r + 1, c + 1, v.to_literal()]));
                    }
                }
            }
            entries.push(json!({ "x": i_set.indices(), "y": j_set.indices(), "bracket": nz }));
        }
    }
    json!({
        "model": "sl(8) + Lambda^4(8)",
        "pairing": "(a,b) = tr(ab); (x,y) vol = x ^ y",
        "convention": "entry [i, j, c] means c * E_ij, E_ij e_j = e_i",
        "brackets": entries,
    })
}

fn unit(m: MultiIndex) -> KForm<crate::scalar::Rational> {
    KForm::monomial(DIM, &m.indices(), crate::scalar::Rational::from_i64(1)).expect("basis monomial")
}
