//! The JSON interchange format for forms:
//! `{"n":8,"k":4,"scalar":"rational","terms":[{"idx":[1,2,3,4],"c":"1"}]}`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::form::{ExactForm, FloatForm, KForm};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, ScalarKind};

#[derive(Serialize, Deserialize)]
struct WireForm {
    n: usize,
    k: usize,
    scalar: ScalarKind,
    terms: Vec<WireTerm>,
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    idx: Vec<usize>,
    c: serde_json::Value,
}

impl<S: Scalar> KForm<S> {
    fn to_wire(&self) -> WireForm {
        WireForm {
            n: self.n(),
            k: self.k(),
            scalar: S::KIND,
            terms: self
                .terms()
                .map(|(m, c)| WireTerm {
                    idx: m.indices(),
                    c: c.to_json(),
                })
                .collect(),
        }
    }

    fn from_wire(w: WireForm) -> Result<Self> {
        if w.scalar != S::KIND {
            return Err(Error::Json(format!(
                "expected {} scalars, found {}",
                S::KIND,
                w.scalar
            )));
        }
        let mut terms = Vec::with_capacity(w.terms.len());
        for t in w.terms {
            terms.push((t.idx, S::from_json(&t.c)?));
        }
        KForm::from_terms(w.n, w.k, terms)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_wire()).expect("form serialization is infallible")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_wire()).expect("form serialization is infallible")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let w: WireForm = serde_json::from_str(text)?;
        Self::from_wire(w)
    }
}

impl<S: Scalar> Serialize for KForm<S> {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for KForm<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = WireForm::deserialize(d)?;
        KForm::from_wire(w).map_err(D::Error::custom)
    }
}

/// A form whose scalar kind is only known at run time (e.g. read from disk).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyForm {
    Exact(ExactForm),
    Float(FloatForm),
}

impl AnyForm {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let w: WireForm = serde_json::from_str(text)?;
        Ok(match w.scalar {
            ScalarKind::Rational => AnyForm::Exact(KForm::from_wire(w)?),
            ScalarKind::Float => AnyForm::Float(KForm::from_wire(w)?),
        })
    }

    pub fn to_json_string(&self) -> String {
        match self {
            AnyForm::Exact(f) => f.to_json_string(),
            AnyForm::Float(f) => f.to_json_string(),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyForm::Exact(_) => ScalarKind::Rational,
            AnyForm::Float(_) => ScalarKind::Float,
        }
    }

    pub fn to_float(&self) -> FloatForm {
        match self {
            AnyForm::Exact(f) => f.to_float(),
            AnyForm::Float(f) => f.clone(),
        }
    }

    pub fn as_exact(&self) -> Result<&ExactForm> {
        match self {
            AnyForm::Exact(f) => Ok(f),
            AnyForm::Float(_) => Err(Error::InvalidArgument(
                "an exact (rational) form is required".into(),
            )),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            AnyForm::Exact(f) => f.n(),
            AnyForm::Float(f) => f.n(),
        }
    }

    pub fn k(&self) -> usize {
        match self {
            AnyForm::Exact(f) => f.k(),
            AnyForm::Float(f) => f.k(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn exact_wire_format() {
        let f = ExactForm::from_terms(
            8,
            4,
            [
                (vec![1, 2, 3, 4], Rational::from_i64(1)),
                (vec![5, 6, 7, 8], Rational::from_ratio(-1, 2)),
            ],
        )
        .unwrap();
        let s = f.to_json_string();
        assert_eq!(
            s,
            r#"{"n":8,"k":4,"scalar":"rational","terms":[{"idx":[1,2,3,4],"c":"1"},{"idx":[5,6,7,8],"c":"-1/2"}]}"#
        );
        assert_eq!(ExactForm::from_json_str(&s).unwrap(), f);
    }

    #[test]
    fn float_wire_format_and_kind_dispatch() {
        let text = r#"{"n":4,"k":2,"scalar":"float","terms":[{"idx":[2,1],"c":0.5}]}"#;
        let any = AnyForm::from_json_str(text).unwrap();
        assert_eq!(any.kind(), ScalarKind::Float);
        let f = any.to_float();
        assert_eq!(f.coeff_of(&[1, 2]).unwrap(), -0.5);
        assert!(ExactForm::from_json_str(text).is_err());
    }

    #[test]
    fn rejects_malformed_terms() {
        let bad = r#"{"n":4,"k":2,"scalar":"rational","terms":[{"idx":[1,5],"c":"1"}]}"#;
        assert!(AnyForm::from_json_str(bad).is_err());
        let bad = r#"{"n":4,"k":2,"scalar":"rational","terms":[{"idx":[1,2,3],"c":"1"}]}"#;
        assert!(AnyForm::from_json_str(bad).is_err());
        let bad = r#"{"n":4,"k":2,"scalar":"rational","terms":[{"idx":[1,2],"c":0.5}]}"#;
        assert!(AnyForm::from_json_str(bad).is_err());
    }
}
