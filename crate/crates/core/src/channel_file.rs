//! JSON channel files.
//!
//! A file holds `dim` and exactly one of
//! - `kraus`: list of matrices,
//! - `choi`: the `n²×n²` Choi matrix,
//! - `builder`: a named family with its parameters at top level,
//!   e.g. `{"builder": "amplitude_damping", "gamma": 0.5}`.
//!
//! Matrices are lists of rows; each entry is `[re, im]` or a bare real number.

use serde_json::{json, Map, Value};

use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numkit::{c, CMat};

/// Representation used when writing a channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ChannelEncoding {
    Kraus,
    Choi,
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    /// Line of the first occurrence of `"key"`, for diagnostics.
    fn line_of(&self, key: &str) -> usize {
        let needle = format!("\"{key}\"");
        self.text.find(&needle).map_or(1, |pos| self.text[..pos].matches('\n').count() + 1)
    }

    fn err(&self, key: &str, path: &str, msg: impl std::fmt::Display) -> Error {
        Error::Parse(format!("line {}: field `{path}`: {msg}", self.line_of(key)))
    }
}

fn entry(src: &Source, key: &str, path: &str, v: &Value) -> Result<num_complex::Complex64> {
    match v {
        Value::Number(n) => Ok(c(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64().ok_or_else(|| src.err(key, path, "real part is not a number"))?;
            let im = pair[1].as_f64().ok_or_else(|| src.err(key, path, "imaginary part is not a number"))?;
            Ok(c(re, im))
        }
        _ => Err(src.err(key, path, "expected a number or an [re, im] pair")),
    }
}

fn matrix(src: &Source, key: &str, path: &str, v: &Value) -> Result<CMat> {
    let rows = v.as_array().ok_or_else(|| src.err(key, path, "expected a list of rows"))?;
    if rows.is_empty() {
        return Err(src.err(key, path, "matrix has no rows"));
    }
    let mut data: Vec<Vec<num_complex::Complex64>> = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let cols = row.as_array().ok_or_else(|| src.err(key, &row_path, "expected a row list"))?;
        if !data.is_empty() && cols.len() != data[0].len() {
            return Err(src.err(key, &row_path, format!("row has {} entries, expected {}", cols.len(), data[0].len())));
        }
        let parsed = cols
            .iter()
            .enumerate()
            .map(|(j, x)| entry(src, key, &format!("{row_path}[{j}]"), x))
            .collect::<Result<Vec<_>>>()?;
        data.push(parsed);
    }
    Ok(CMat::from_fn(data.len(), data[0].len(), |i, j| data[i][j]))
}

fn number(src: &Source, obj: &Map<String, Value>, key: &str) -> Result<f64> {
    obj.get(key)
        .ok_or_else(|| src.err("builder", key, "missing parameter"))?
        .as_f64()
        .ok_or_else(|| src.err(key, key, "expected a number"))
}

fn builder(src: &Source, obj: &Map<String, Value>, name: &str, dim: Option<usize>) -> Result<Channel> {
    let n = dim.unwrap_or(2);
    let qubit_only = |ch: Result<Channel>| {
        if n != 2 {
            Err(src.err("dim", "dim", format!("builder `{name}` is defined for dim 2 only")))
        } else {
            ch
        }
    };
    match name {
        "identity" => Ok(Channel::identity(n)),
        "completely_depolarizing" => Ok(Channel::completely_depolarizing(n)),
        "depolarizing" => Channel::depolarizing_n(n, number(src, obj, "p")?),
        "amplitude_damping" => qubit_only(Channel::amplitude_damping(number(src, obj, "gamma")?)),
        "phase_flip" => qubit_only(Channel::phase_flip(number(src, obj, "p")?)),
        "bit_flip" => qubit_only(Channel::bit_flip(number(src, obj, "p")?)),
        "unitary" => {
            let v = obj.get("matrix").ok_or_else(|| src.err("builder", "matrix", "missing parameter"))?;
            Channel::unitary(&matrix(src, "matrix", "matrix", v)?)
        }
        other => Err(src.err(
            "builder",
            "builder",
            format!(
                "unknown builder `{other}` (known: identity, unitary, depolarizing, completely_depolarizing, \
                 amplitude_damping, phase_flip, bit_flip)"
            ),
        )),
    }
}

/// Parses a channel file. The channel must be trace preserving.
pub fn parse_channel(text: &str) -> Result<Channel> {
    let src = Source { text };
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = value.as_object().ok_or_else(|| Error::Parse("line 1: top level must be an object".into()))?;
    let dim = match obj.get("dim") {
        None => None,
        Some(v) => {
            Some(v.as_u64().filter(|&d| d >= 1).ok_or_else(|| src.err("dim", "dim", "expected a positive integer"))?
                as usize)
        }
    };
    let present: Vec<&str> = ["kraus", "choi", "builder"].into_iter().filter(|k| obj.contains_key(*k)).collect();
    if present.len() != 1 {
        return Err(Error::Parse(format!(
            "line 1: exactly one of `kraus`, `choi`, `builder` is required, found {}",
            if present.is_empty() { "none".to_string() } else { present.join(", ") }
        )));
    }
    let ch = match present[0] {
        "kraus" => {
            let list =
                obj["kraus"].as_array().ok_or_else(|| src.err("kraus", "kraus", "expected a list of matrices"))?;
            if list.is_empty() {
                return Err(src.err("kraus", "kraus", "no Kraus operators"));
            }
            let ops = list
                .iter()
                .enumerate()
                .map(|(k, m)| matrix(&src, "kraus", &format!("kraus[{k}]"), m))
                .collect::<Result<Vec<_>>>()?;
            let n = ops[0].ncols();
            if let Some(d) = dim.filter(|&d| d != n) {
                return Err(src.err("dim", "dim", format!("dim {d} but Kraus operators act on dimension {n}")));
            }
            Channel::from_kraus(ops, true)
        }
        "choi" => {
            let m = matrix(&src, "choi", "choi", &obj["choi"])?;
            let n = (m.nrows() as f64).sqrt().round() as usize;
            if n * n != m.nrows() || !m.is_square() {
                return Err(src.err("choi", "choi", format!("{}x{} is not n²×n²", m.nrows(), m.ncols())));
            }
            if let Some(d) = dim.filter(|&d| d != n) {
                return Err(src.err("dim", "dim", format!("dim {d} but the Choi matrix is for dimension {n}")));
            }
            Channel::from_choi_matrix(m, n, true)
        }
        _ => {
            let name = obj["builder"].as_str().ok_or_else(|| src.err("builder", "builder", "expected a string"))?;
            builder(&src, obj, name, dim)
        }
    };
    let field = present[0];
    ch.map_err(|e| match e {
        Error::Parse(_) => e,
        other => src.err(field, field, format!("channel rejected: {other}")),
    })
}

pub fn matrix_json(m: &CMat) -> Value {
    Value::Array(
        (0..m.nrows())
            .map(|i| Value::Array((0..m.ncols()).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

/// The channel as a file value.
pub fn channel_json(ch: &Channel, encoding: ChannelEncoding) -> Value {
    match encoding {
        ChannelEncoding::Kraus => json!({
            "dim": ch.dim(),
            "kraus": ch.kraus().iter().map(matrix_json).collect::<Vec<_>>(),
        }),
        ChannelEncoding::Choi => json!({ "dim": ch.dim(), "choi": matrix_json(&ch.choi().choi) }),
    }
}

pub fn write_channel(ch: &Channel, encoding: ChannelEncoding) -> String {
    serde_json::to_string_pretty(&channel_json(ch, encoding)).expect("JSON values serialise")
}
