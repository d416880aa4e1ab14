//! Configuration files and divisor arguments.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::{CurveConfiguration, Divisor};
use crate::error::{Error, Result};
use crate::linalg::Rational;
use crate::report::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub name: String,
    #[serde(default)]
    pub genus: u64,
}

/// On-disk form of a configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub name: String,
    pub curves: Vec<CurveEntry>,
    pub gram: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_rank: Option<usize>,
}

impl ConfigFile {
    pub fn from_config(c: &CurveConfiguration) -> Self {
        Self {
            name: c.name().to_string(),
            curves: c
                .curves()
                .iter()
                .map(|k| CurveEntry {
                    name: k.name.clone(),
                    genus: k.genus,
                })
                .collect(),
            gram: c.gram().rows(),
            ambient_rank: c.ambient_rank(),
        }
    }

    pub fn into_config(self) -> Result<CurveConfiguration> {
        CurveConfiguration::new(
            self.name,
            self.curves.into_iter().map(|c| (c.name, c.genus)).collect(),
            self.gram,
            self.ambient_rank,
        )
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::input(format!("line {} column {}", e.line(), e.column()), e.to_string())
}

pub fn parse_config(text: &str) -> Result<CurveConfiguration> {
    let file: ConfigFile = serde_json::from_str(text).map_err(json_error)?;
    file.into_config()
}

pub fn serialize_config(c: &CurveConfiguration) -> String {
    serde_json::to_string_pretty(&ConfigFile::from_config(c)).expect("config serializes")
}

fn rationals_from_value(v: &Value, path: &str) -> Result<Vec<Rational>> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::input(path, "expected an array of coefficients"))?;
    arr.iter()
        .enumerate()
        .map(|(i, x)| {
            parse_rational(x).ok_or_else(|| Error::input(format!("{path}[{i}]"), "not a rational"))
        })
        .collect()
}

/// A divisor given as a JSON array (`[1, "1/2", -3]`) or a comma-separated
/// list (`1,1/2,-3`).
pub fn parse_divisor(text: &str, expected_len: usize) -> Result<Divisor> {
    let t = text.trim();
    let coeffs = if t.starts_with('[') {
        let v: Value = serde_json::from_str(t).map_err(json_error)?;
        rationals_from_value(&v, "divisor")?
    } else {
        t.split(',')
            .enumerate()
            .map(|(i, s)| {
                s.trim()
                    .parse::<Rational>()
                    .map_err(|_| Error::input(format!("divisor[{i}]"), format!("`{s}` is not a rational")))
            })
            .collect::<Result<_>>()?
    };
    if coeffs.len() != expected_len {
        return Err(Error::input(
            "divisor",
            format!("{} coefficients for {expected_len} curves", coeffs.len()),
        ));
    }
    Ok(Divisor::new(coeffs))
}

/// A JSON array of divisors.
pub fn parse_divisor_list(text: &str, expected_len: usize) -> Result<Vec<Divisor>> {
    let v: Value = serde_json::from_str(text).map_err(json_error)?;
    let arr = v
        .as_array()
        .ok_or_else(|| Error::input("generators", "expected an array of divisors"))?;
    arr.iter()
        .enumerate()
        .map(|(i, d)| {
            let c = rationals_from_value(d, &format!("generators[{i}]"))?;
            if c.len() != expected_len {
                return Err(Error::input(
                    format!("generators[{i}]"),
                    format!("{} coefficients for {expected_len} curves", c.len()),
                ));
            }
            Ok(Divisor::new(c))
        })
        .collect()
}
