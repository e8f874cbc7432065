//! Closed-form systolic constants, as exact rationals.

use num_bigint::BigInt;
use serde::Serialize;

use super::ser_rational;
use crate::scalar::{factorial, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystolicConstant {
    pub name: String,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
    /// What the number is, in words.
    pub description: String,
}

fn ratio(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

/// Systolic ratio of the symmetric metric on `HP^{2n}`: `(4n+1)! / ((2n+1)!)²`.
pub fn hp_symmetric_ratio(n: u32) -> Rational {
    let d = factorial(2 * n + 1);
    ratio(factorial(4 * n + 1), &d * &d)
}

/// Systolic ratio of the Fubini–Study metric on `CP^{4n}`: `(4n)! / ((2n)!)²`.
pub fn cp_symmetric_ratio(n: u32) -> Rational {
    let d = factorial(2 * n);
    ratio(factorial(4 * n), &d * &d)
}

/// Optimal constant `n!` in `stsys₂^n ≤ n! vol` on `CP^n`.
pub fn gromov_constant(n: u32) -> Rational {
    Rational::from_integer(factorial(n))
}

/// `6^b / (2b+1)!`.
pub fn s4b(b: u32) -> Rational {
    ratio(BigInt::from(6).pow(b), factorial(2 * b + 1))
}

fn entry(name: impl Into<String>, value: Rational, description: impl Into<String>) -> SystolicConstant {
    SystolicConstant {
        name: name.into(),
        value,
        description: description.into(),
    }
}

/// The catalog, in a fixed order.
pub fn systolic_constants() -> Vec<SystolicConstant> {
    let mut out = vec![
        entry(
            "SR(HP^2, symmetric)",
            hp_symmetric_ratio(1),
            "stable 4-systolic ratio stsys4^2/vol8 of the symmetric metric on HP^2",
        ),
        entry(
            "SR(CP^4, symmetric)",
            cp_symmetric_ratio(1),
            "stable 4-systolic ratio of the Fubini-Study metric on CP^4",
        ),
        entry(
            "SR4 lower bound",
            Rational::from_i64(6),
            "lower end of the interval for the common optimal ratio of HP^2 and CP^4",
        ),
        entry(
            "SR4 upper bound",
            Rational::from_i64(14),
            "upper end of that interval: twice the dimension of the Cartan subspace",
        ),
        entry("W2", Rational::from_i64(2), "Wirtinger constant for 2-forms on R^4"),
        entry("W4", Rational::from_i64(14), "Wirtinger constant for 4-forms on R^8"),
    ];
    for n in 2..=3 {
        out.push(entry(
            format!("SR(HP^{}, symmetric)", 2 * n),
            hp_symmetric_ratio(n),
            format!("(4n+1)!/((2n+1)!)^2 at n = {n}"),
        ));
        out.push(entry(
            format!("SR(CP^{}, symmetric)", 4 * n),
            cp_symmetric_ratio(n),
            format!("(4n)!/((2n)!)^2 at n = {n}"),
        ));
    }
    for n in 1..=10 {
        out.push(entry(
            format!("Gromov CP^{n}"),
            gromov_constant(n),
            format!("optimal constant in stsys2^{n} <= {n}! vol on CP^{n}"),
        ));
    }
    for b in 1..=5 {
        out.push(entry(format!("s_4,{b}"), s4b(b), format!("6^{b}/({}!)", 2 * b + 1)));
    }
    out
}
