//! Text grammars for models, interval unions, number lists and complex grids.

use std::fmt;

use herglotz_core::jacobi::{CoeffModel, Frequency};
use herglotz_core::SetUnion;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const MODEL_GRAMMAR: &str = "model descriptors:
  free
  periodic:a=A1,A2,...;b=B1,B2,...
  qp:lambda=L,alpha=golden|ALPHA,theta=T
  random:seed=S,a=LO..HI,b=LO..HI       (defaults a=0.5..1.5, b=-1..1)
  table:a=A1,...;b=B1,...               (free coefficients beyond the table)
  {\"kind\":\"quasiperiodic\",\"lambda\":2.0,\"alpha\":\"golden\",\"theta\":0.0}
  @path/to/model.json";

pub const SET_GRAMMAR: &str = "interval unions: \"[a,b],[c,d]\", \"[[a,b],[c,d]]\" or \"empty\"";

pub const GRID_GRAMMAR: &str = "complex grids: \"default\" or \"x1,y1;x2,y2;...\" with y > 0";

/// Malformed input; the command line maps it to exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>, grammar: &str) -> UsageError {
    UsageError(format!("{}\n{grammar}", msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedFrequency {
    Golden,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Named(NamedFrequency),
    Value(f64),
}

impl Default for AlphaSpec {
    fn default() -> Self {
        Self::Named(NamedFrequency::Golden)
    }
}

fn default_a_range() -> (f64, f64) {
    (0.5, 1.5)
}

fn default_b_range() -> (f64, f64) {
    (-1.0, 1.0)
}

/// JSON model descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Free {},
    Periodic {
        a: Vec<f64>,
        b: Vec<f64>,
    },
    #[serde(alias = "qp")]
    Quasiperiodic {
        lambda: f64,
        #[serde(default)]
        alpha: AlphaSpec,
        #[serde(default)]
        theta: f64,
    },
    Random {
        seed: u64,
        #[serde(default = "default_a_range")]
        a: (f64, f64),
        #[serde(default = "default_b_range")]
        b: (f64, f64),
    },
    Table {
        a: Vec<f64>,
        b: Vec<f64>,
    },
}

impl ModelSpec {
    pub fn build(&self) -> Result<CoeffModel, UsageError> {
        let built = match self.clone() {
            Self::Free {} => Ok(CoeffModel::free()),
            Self::Periodic { a, b } => CoeffModel::periodic(a, b),
            Self::Quasiperiodic { lambda, alpha, theta } => {
                let alpha = match alpha {
                    AlphaSpec::Named(NamedFrequency::Golden) => Frequency::Golden,
                    AlphaSpec::Value(v) => Frequency::Value(v),
                };
                CoeffModel::quasiperiodic(lambda, alpha, theta)
            }
            Self::Random { seed, a, b } => CoeffModel::random(seed, a, b),
            Self::Table { a, b } => CoeffModel::table(a, b),
        };
        built.map_err(|e| usage(e.to_string(), MODEL_GRAMMAR))
    }
}

fn number(s: &str, grammar: &str) -> Result<f64, UsageError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| usage(format!("not a number: {s:?}"), grammar))
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, UsageError> {
    s.split(',').map(|v| number(v, "expected comma-separated numbers")).collect()
}

fn parse_range(s: &str) -> Result<(f64, f64), UsageError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| usage(format!("expected LO..HI, got {s:?}"), MODEL_GRAMMAR))?;
    Ok((number(lo, MODEL_GRAMMAR)?, number(hi, MODEL_GRAMMAR)?))
}

/// `key=value` pairs separated by `sep`.
fn pairs<'a>(body: &'a str, sep: char) -> Result<Vec<(&'a str, &'a str)>, UsageError> {
    body.split(sep)
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| usage(format!("expected key=value, got {p:?}"), MODEL_GRAMMAR))
        })
        .collect()
}

fn tables(body: &str) -> Result<(Vec<f64>, Vec<f64>), UsageError> {
    let (mut a, mut b) = (None, None);
    for (k, v) in pairs(body, ';')? {
        let list = parse_list(v).map_err(|e| usage(e.0, MODEL_GRAMMAR))?;
        match k {
            "a" => a = Some(list),
            "b" => b = Some(list),
            _ => return Err(usage(format!("unknown key {k:?}"), MODEL_GRAMMAR)),
        }
    }
    match (a, b) {
        (Some(a), Some(b)) => Ok((a, b)),
        (Some(a), None) => {
            let n = a.len();
            Ok((a, vec![0.0; n]))
        }
        (None, Some(b)) => Ok((vec![1.0; b.len()], b)),
        (None, None) => Err(usage("table needs a= or b=", MODEL_GRAMMAR)),
    }
}

/// Parses the compact grammar, a JSON descriptor, or `@file` holding JSON.
pub fn parse_model_spec(spec: &str) -> Result<ModelSpec, UsageError> {
    let spec = spec.trim();
    if let Some(path) = spec.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {path}: {e}"), MODEL_GRAMMAR))?;
        return parse_model_spec(&text);
    }
    if spec.starts_with('{') {
        return serde_json::from_str(spec)
            .map_err(|e| usage(format!("bad model JSON: {e}"), MODEL_GRAMMAR));
    }
    let (head, body) = spec.split_once(':').unwrap_or((spec, ""));
    match head {
        "free" if body.is_empty() => Ok(ModelSpec::Free {}),
        "periodic" => {
            let (a, b) = tables(body)?;
            Ok(ModelSpec::Periodic { a, b })
        }
        "table" => {
            let (a, b) = tables(body)?;
            Ok(ModelSpec::Table { a, b })
        }
        "qp" | "quasiperiodic" => {
            let (mut lambda, mut alpha, mut theta) = (None, AlphaSpec::default(), 0.0);
            for (k, v) in pairs(body, ',')? {
                match k {
                    "lambda" => lambda = Some(number(v, MODEL_GRAMMAR)?),
                    "alpha" if v == "golden" => alpha = AlphaSpec::default(),
                    "alpha" => alpha = AlphaSpec::Value(number(v, MODEL_GRAMMAR)?),
                    "theta" => theta = number(v, MODEL_GRAMMAR)?,
                    _ => return Err(usage(format!("unknown key {k:?}"), MODEL_GRAMMAR)),
                }
            }
            let lambda = lambda.ok_or_else(|| usage("qp needs lambda=", MODEL_GRAMMAR))?;
            Ok(ModelSpec::Quasiperiodic { lambda, alpha, theta })
        }
        "random" => {
            let (mut seed, mut a, mut b) = (None, default_a_range(), default_b_range());
            for (k, v) in pairs(body, ',')? {
                match k {
                    "seed" => {
                        seed = Some(v.parse::<u64>().map_err(|_| {
                            usage(format!("seed must be an unsigned integer, got {v:?}"), MODEL_GRAMMAR)
                        })?)
                    }
                    "a" => a = parse_range(v)?,
                    "b" => b = parse_range(v)?,
                    _ => return Err(usage(format!("unknown key {k:?}"), MODEL_GRAMMAR)),
                }
            }
            let seed = seed.ok_or_else(|| usage("random needs seed=", MODEL_GRAMMAR))?;
            Ok(ModelSpec::Random { seed, a, b })
        }
        _ => Err(usage(format!("unknown model {spec:?}"), MODEL_GRAMMAR)),
    }
}

pub fn parse_model(spec: &str) -> Result<CoeffModel, UsageError> {
    parse_model_spec(spec)?.build()
}

pub fn parse_set(spec: &str) -> Result<SetUnion, UsageError> {
    let s: String = spec.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() || s == "empty" || s == "[]" {
        return Ok(SetUnion::empty());
    }
    let pairs: Vec<(f64, f64)> = if s.starts_with("[[") {
        serde_json::from_str(&s).map_err(|e| usage(format!("bad set JSON: {e}"), SET_GRAMMAR))?
    } else {
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| usage(format!("bad set {spec:?}"), SET_GRAMMAR))?;
        inner
            .split("],[")
            .map(|iv| {
                let (lo, hi) = iv
                    .split_once(',')
                    .ok_or_else(|| usage(format!("bad interval {iv:?}"), SET_GRAMMAR))?;
                Ok((number(lo, SET_GRAMMAR)?, number(hi, SET_GRAMMAR)?))
            })
            .collect::<Result<_, UsageError>>()?
    };
    SetUnion::from_pairs(&pairs).map_err(|e| usage(e.to_string(), SET_GRAMMAR))
}

/// Points `x + iy` with `y > 0`; `default` expands to `fallback`.
pub fn parse_grid(spec: &str, fallback: impl FnOnce() -> Vec<Complex64>) -> Result<Vec<Complex64>, UsageError> {
    if spec.trim() == "default" {
        return Ok(fallback());
    }
    spec.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p
                .split_once(',')
                .ok_or_else(|| usage(format!("bad grid point {p:?}"), GRID_GRAMMAR))?;
            let z = Complex64::new(number(x, GRID_GRAMMAR)?, number(y, GRID_GRAMMAR)?);
            if !(z.im > 0.0) {
                return Err(usage(format!("grid point {p:?} is not in the upper half plane"), GRID_GRAMMAR));
            }
            Ok(z)
        })
        .collect()
}

pub fn parse_point(spec: &str) -> Result<Complex64, UsageError> {
    let g = parse_grid(spec, Vec::new)?;
    match g.as_slice() {
        [z] => Ok(*z),
        _ => Err(usage(format!("expected a single point x,y, got {spec:?}"), GRID_GRAMMAR)),
    }
}
