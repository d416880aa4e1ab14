//! Machine-readable reports.
//!
//! Integers that fit in 64 bits are written as JSON numbers, larger ones as
//! decimal strings; rationals are always strings (`"-7/3"`, `"5"`), so every
//! value survives a round trip exactly.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::linalg::Rational;

pub fn bigint_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn rational_value(x: &Rational) -> Value {
    Value::from(x.to_string())
}

pub fn bigints_value(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(bigint_value).collect())
}

pub fn rationals_value(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational_value).collect())
}

pub fn ser_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    bigint_value(x).serialize(s)
}

pub fn ser_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    bigints_value(v).serialize(s)
}

pub fn ser_bigint_rows<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&bigints_value(row))?;
    }
    seq.end()
}

pub fn ser_rational<S: Serializer>(x: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    rationals_value(v).serialize(s)
}

pub fn ser_rational_rows<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&rationals_value(row))?;
    }
    seq.end()
}

pub fn ser_opt_rational<S: Serializer>(x: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

/// Parses a rational written as `"p/q"`, `"p"`, or a JSON integer.
pub fn parse_rational(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(BigInt::from(i))),
        Value::String(s) => s.trim().parse::<Rational>().ok(),
        _ => None,
    }
}

pub fn parse_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse::<BigInt>().ok(),
        _ => None,
    }
}

/// Outcome of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Certified,
    Refuted,
    Failed,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Certified => 0,
            Status::Refuted | Status::Failed => 1,
            Status::Error => 2,
        }
    }
}

/// One command's result: fixed field order `command, input_digest, status, payload`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str, input: &[u8], status: Status, payload: Value) -> Self {
        Self {
            command: command.to_string(),
            input_digest: digest(input),
            status,
            payload,
            exit_code: status.exit_code(),
        }
    }

    pub fn from_error(command: &str, input: &[u8], err: &Error) -> Self {
        let payload = json!({
            "error": err.kind(),
            "message": err.to_string(),
        });
        Self {
            command: command.to_string(),
            input_digest: digest(input),
            status: Status::Error,
            payload,
            exit_code: err.exit_code(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Hex SHA-256 of the input bytes.
pub fn digest(input: &[u8]) -> String {
    let h = Sha256::digest(input);
    h.iter().map(|b| format!("{b:02x}")).collect()
}
