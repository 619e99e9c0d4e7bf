//! Problem files: versioned JSON with exact rationals.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "l": 1, "k": 1,
//!   "xbar": ["0"], "ybar": ["0"],
//!   "Jf": [["0", "-1"]], "Jg": [["-1", "1"]],
//!   "f0": ["0"], "g0": ["0"],
//!   "D": { "A": [["-1"]], "b": ["0"] }
//! }
//! ```
//!
//! Numbers are `"p/q"` strings, integers, or decimals; decimals are read by
//! their literal digits, so `0.1` is exactly `1/10`. Smooth problems without
//! affine constants give `"fbar"` and `"gbar"`, the values of `f` and `g` at
//! the reference point, instead of `"f0"` and `"g0"`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::polyhedra::{matrix_from_json, matrix_to_json, vector_from_json, PolyhedralSet};
use crate::problem::GeProblem;
use crate::rational::{format_vec, QVec};

pub const SCHEMA_VERSION: u64 = 1;

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> Result<&'a Value> {
    obj.get(name).ok_or_else(|| Error::Parse(format!("missing field `{name}`")))
}

fn with_field<T>(name: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("field `{name}`: {m}")),
        Error::Dimension(m) => Error::Dimension(format!("field `{name}`: {m}")),
        other => other,
    })
}

fn dim(obj: &Map<String, Value>, name: &str) -> Result<usize> {
    field(obj, name)?
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| Error::Parse(format!("field `{name}`: expected a nonnegative integer")))
}

fn vector(obj: &Map<String, Value>, name: &str) -> Result<QVec> {
    with_field(name, vector_from_json(field(obj, name)?))
}

fn optional_vector(obj: &Map<String, Value>, name: &str) -> Result<Option<QVec>> {
    obj.get(name).map(|v| with_field(name, vector_from_json(v))).transpose()
}

pub fn problem_from_json(value: &Value) -> Result<GeProblem> {
    let obj = value.as_object().ok_or_else(|| Error::Parse("expected a JSON object at top level".into()))?;
    let schema = field(obj, "schema")?;
    if schema.as_u64() != Some(SCHEMA_VERSION) {
        return Err(Error::Parse(format!("field `schema`: unsupported version {schema}, expected {SCHEMA_VERSION}")));
    }
    let l = dim(obj, "l")?;
    let k = dim(obj, "k")?;
    let xbar = vector(obj, "xbar")?;
    let ybar = vector(obj, "ybar")?;
    let jf = with_field("Jf", matrix_from_json(field(obj, "Jf")?, Some(l + k)))?;
    let jg = with_field("Jg", matrix_from_json(field(obj, "Jg")?, Some(l + k)))?;
    let d_obj = field(obj, "D")?;
    let d = with_field("D", PolyhedralSet::from_json(d_obj, Some(k)))?;
    let f0 = optional_vector(obj, "f0")?;
    let g0 = optional_vector(obj, "g0")?;
    match (f0, g0) {
        (Some(f0), Some(g0)) => GeProblem::affine(l, k, xbar, ybar, jf, jg, f0, g0, d),
        (f0, g0) => {
            let fbar = optional_vector(obj, "fbar")?;
            let gbar = optional_vector(obj, "gbar")?;
            match (fbar, gbar) {
                (Some(fbar), Some(gbar)) => GeProblem::at_point(l, k, xbar, ybar, jf, jg, fbar, gbar, d),
                _ => Err(Error::Parse(
                    match (f0.is_some(), g0.is_some()) {
                        (false, true) => "missing field `f0` (or give both `fbar` and `gbar`)",
                        (true, false) => "missing field `g0` (or give both `fbar` and `gbar`)",
                        _ => "missing fields `f0` and `g0` (or `fbar` and `gbar`)",
                    }
                    .into(),
                )),
            }
        }
    }
}

/// Parses a problem file; syntax errors carry line and column.
pub fn problem_from_str(text: &str) -> Result<GeProblem> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse(e.to_string()))?;
    problem_from_json(&value)
}

pub fn problem_to_json(p: &GeProblem) -> Value {
    let mut obj = json!({
        "schema": SCHEMA_VERSION,
        "l": p.l(),
        "k": p.k(),
        "xbar": format_vec(p.xbar()),
        "ybar": format_vec(p.ybar()),
        "Jf": matrix_to_json(p.jf()),
        "Jg": matrix_to_json(p.jg()),
        "D": p.d().to_json(),
    });
    let m = obj.as_object_mut().expect("object literal");
    match (p.f0(), p.g0()) {
        (Some(f0), Some(g0)) => {
            m.insert("f0".into(), json!(format_vec(f0)));
            m.insert("g0".into(), json!(format_vec(g0)));
        }
        _ => {
            m.insert("fbar".into(), json!(format_vec(p.fbar())));
            m.insert("gbar".into(), json!(format_vec(p.gbar())));
        }
    }
    obj
}
