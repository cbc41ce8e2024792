//! JSON boundary. Rationals are written as `"p"` or `"p/q"` strings and read
//! from integers, `"p/q"` strings, or finite decimals (string or number
//! token), always exactly.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::polyhedron::{HRep, VRep};
use crate::rational::{format_rational, parse_rational, Rational, Vector};
use crate::{Error, Result};

pub fn rational_from_value(v: &Value) -> Result<Rational> {
    match v {
        // With exact number tokens, `to_string` reproduces the literal as written.
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => Err(Error::Parse(format!("expected a rational, found {other}"))),
    }
}

pub fn vector_from_value(v: &Value) -> Result<Vector> {
    match v {
        Value::Array(items) => items.iter().map(rational_from_value).collect(),
        other => Err(Error::Parse(format!("expected an array of rationals, found {other}"))),
    }
}

pub fn rational_to_value(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

pub fn vector_to_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_to_value).collect())
}

/// Parses a point given as a JSON array, e.g. `[1, "1/2", 0.25]`.
pub fn parse_point(text: &str) -> Result<Vector> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("point: {e}")))?;
    vector_from_value(&v)
}

/// `#[serde(with = ...)]` adapters for rational fields.
pub mod serde_rational {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub mod scalar {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&format_rational(x))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
            let v = Value::deserialize(d)?;
            rational_from_value(&v).map_err(D::Error::custom)
        }
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            vector_to_value(x).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vector, D::Error> {
            let v = Value::deserialize(d)?;
            vector_from_value(&v).map_err(D::Error::custom)
        }
    }

    pub mod mat {
        use super::*;

        pub fn serialize<S: Serializer>(x: &[Vector], s: S) -> std::result::Result<S::Ok, S::Error> {
            Value::Array(x.iter().map(|r| vector_to_value(r)).collect()).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vector>, D::Error> {
            match Value::deserialize(d)? {
                Value::Array(rows) => rows
                    .iter()
                    .map(vector_from_value)
                    .collect::<Result<_>>()
                    .map_err(D::Error::custom),
                other => Err(D::Error::custom(format!("expected an array of vectors, found {other}"))),
            }
        }
    }
}

/// A set given either by inequalities or by generators.
#[derive(Debug, Clone, PartialEq)]
pub enum SetDescription {
    H(HRep),
    V(VRep),
}

impl SetDescription {
    pub fn dim(&self) -> usize {
        match self {
            SetDescription::H(h) => h.dim,
            SetDescription::V(v) => v.dim,
        }
    }
}

/// Reads an HRep (`ineqs`/`eqs` keys) or a VRep (`vertices`/`rays` keys).
pub fn parse_set(text: &str) -> Result<SetDescription> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("set: {e}")))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("set description must be a JSON object".into()))?;
    let is_v = obj.contains_key("vertices") || obj.contains_key("rays");
    let is_h = obj.contains_key("ineqs") || obj.contains_key("eqs");
    let desc = match (is_h, is_v) {
        (true, false) => {
            SetDescription::H(serde_json::from_value(v).map_err(|e| Error::Parse(format!("inequality system: {e}")))?)
        }
        (false, true) => {
            SetDescription::V(serde_json::from_value(v).map_err(|e| Error::Parse(format!("generator system: {e}")))?)
        }
        _ => {
            return Err(Error::Parse(
                "set needs either `ineqs`/`eqs` or `vertices`/`rays`, not both or neither".into(),
            ))
        }
    };
    match &desc {
        SetDescription::H(h) => {
            h.validate().map_err(as_parse)?;
            if h.ineqs
                .iter()
                .chain(&h.eqs)
                .any(|c| crate::rational::is_zero(&c.normal))
            {
                return Err(Error::Parse("constraint normals must be nonzero".into()));
            }
        }
        SetDescription::V(v) => v.validate().map_err(as_parse)?,
    }
    Ok(desc)
}

fn as_parse(e: Error) -> Error {
    match e {
        Error::Parse(_) => e,
        other => Error::Parse(other.to_string()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FaceDoc {
    /// Indices into the parent's canonical inequality list (0-based).
    pub active: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<isize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateDoc {
    #[serde(with = "serde_rational::mat")]
    pub normals: Vec<Vector>,
    #[serde(default, with = "serde_rational::vec")]
    pub lambdas: Vector,
    #[serde(default)]
    pub faces: Vec<FaceDoc>,
    #[serde(default)]
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceDoc {
    #[serde(with = "serde_rational::vec")]
    pub c: Vector,
    #[serde(default = "zero", with = "serde_rational::scalar")]
    pub d: Rational,
}

fn zero() -> Rational {
    Rational::from_integer(0.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentDoc {
    pub pieces: Vec<PieceDoc>,
    #[serde(with = "serde_rational::vec")]
    pub endowment: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EconomyDoc {
    pub goods: usize,
    pub agents: Vec<AgentDoc>,
}

pub fn parse_certificate(text: &str) -> Result<CertificateDoc> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
}

pub fn parse_economy(text: &str) -> Result<EconomyDoc> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("economy: {e}")))
}

/// Reads a list of normals given as a JSON array of vectors.
pub fn parse_normals(text: &str) -> Result<Vec<Vector>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(format!("normals: {e}")))?;
    match v {
        Value::Array(rows) => rows.iter().map(vector_from_value).collect(),
        _ => Err(Error::Parse("normals must be an array of vectors".into())),
    }
}
