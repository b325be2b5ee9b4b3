//! JSON input and output.
//!
//! Every number travels as a string: integers and rationals as `"-3"` or
//! `"1/2"`, truncated p-adics as `"u*p^v+O(p^a)"`, `"O(p^a)"` or `"0"`, and
//! infinite norms as `"inf"`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::coefficients::padic::{parse_padic, PadicDisplay};
use crate::coefficients::{CoefficientModel, NormValue, RingElement};
use crate::mahler::FunctionTable;
use crate::series::{Basis, BiTruncatedSeries, TruncatedSeries};
use crate::weights::{Tail, TailDescriptor, Weight, WeightMatrix};

/// Malformed input, located by a JSON path such as `$.coeffs[2]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for SchemaError {}

pub type SchemaResult<T> = std::result::Result<T, SchemaError>;

/// `"n"` or `"n/d"` with `d ≠ 0`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn join(path: &str, key: &str) -> String {
    format!("{path}.{key}")
}

fn index(path: &str, i: usize) -> String {
    format!("{path}[{i}]")
}

fn object<'a>(v: &'a Value, path: &str) -> SchemaResult<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| SchemaError::new(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> SchemaResult<&'a Value> {
    obj.get(key)
        .ok_or_else(|| SchemaError::new(join(path, key), "missing field"))
}

fn array<'a>(v: &'a Value, path: &str) -> SchemaResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| SchemaError::new(path, "expected an array"))
}

fn string<'a>(v: &'a Value, path: &str) -> SchemaResult<&'a str> {
    v.as_str().ok_or_else(|| SchemaError::new(path, "expected a string"))
}

fn natural(v: &Value, path: &str) -> SchemaResult<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| SchemaError::new(path, "expected a nonnegative integer"))
}

/// A rational given as a string or a JSON integer.
pub fn rational_from_json(v: &Value, path: &str) -> SchemaResult<BigRational> {
    if let Some(n) = v.as_i64() {
        return Ok(BigRational::from_integer(n.into()));
    }
    let s = string(v, path)?;
    parse_rational(s).ok_or_else(|| SchemaError::new(path, format!("invalid rational {s:?}")))
}

pub fn model_from_json(v: &Value, path: &str) -> SchemaResult<CoefficientModel> {
    let s = string(v, path)?;
    s.parse()
        .map_err(|e: crate::Error| SchemaError::new(path, e.to_string()))
}

pub fn element_from_json(model: &CoefficientModel, v: &Value, path: &str) -> SchemaResult<RingElement> {
    if let Some(ctx) = model.padic_context() {
        if let Some(n) = v.as_i64() {
            return Ok(model.from_i64(n));
        }
        let s = string(v, path)?;
        return parse_padic(&ctx, s)
            .map(RingElement::Padic)
            .ok_or_else(|| SchemaError::new(path, format!("invalid p-adic number {s:?}")));
    }
    let q = rational_from_json(v, path)?;
    model.from_rational(&q).map_err(|_| {
        SchemaError::new(
            path,
            format!("{} is not in the carrier of {model}", rational_to_string(&q)),
        )
    })
}

pub fn element_to_json(model: &CoefficientModel, x: &RingElement) -> Value {
    match x {
        RingElement::Padic(a) => Value::String(
            PadicDisplay {
                p: model.prime().expect("p-adic model"),
                value: a,
            }
            .to_string(),
        ),
        _ => Value::String(rational_to_string(&model.to_rational(x).expect("rational carrier"))),
    }
}

fn elements_from_json(model: &CoefficientModel, v: &Value, path: &str) -> SchemaResult<Vec<RingElement>> {
    array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| element_from_json(model, x, &index(path, i)))
        .collect()
}

fn elements_to_json(model: &CoefficientModel, xs: &[RingElement]) -> Value {
    Value::Array(xs.iter().map(|x| element_to_json(model, x)).collect())
}

pub fn norm_to_json(n: &NormValue) -> Value {
    match n {
        NormValue::Finite(q) => Value::String(rational_to_string(q)),
        NormValue::Infinite => Value::String("inf".into()),
    }
}

/// Tail field of a series: absent for a zero tail, `"unknown"`, or
/// `{"start", "C", "r", "sharp"?}`.
pub fn tail_from_json(v: Option<&Value>, path: &str) -> SchemaResult<Tail> {
    let Some(v) = v else {
        return Ok(Tail::Zero);
    };
    let path = &join(path, "tail");
    match v {
        Value::Null => Ok(Tail::Zero),
        Value::String(s) if s == "unknown" => Ok(Tail::Unknown),
        Value::String(s) if s == "zero" => Ok(Tail::Zero),
        Value::Object(obj) => {
            let start = natural(field(obj, "start", path)?, &join(path, "start"))?;
            let bound = rational_from_json(field(obj, "C", path)?, &join(path, "C"))?;
            let ratio = rational_from_json(field(obj, "r", path)?, &join(path, "r"))?;
            let sharp = match obj.get("sharp") {
                None => false,
                Some(b) => b
                    .as_bool()
                    .ok_or_else(|| SchemaError::new(join(path, "sharp"), "expected a boolean"))?,
            };
            let td =
                TailDescriptor::new(start, bound, ratio).map_err(|e| SchemaError::new(path.clone(), e.to_string()))?;
            Ok(Tail::Geometric(TailDescriptor { sharp, ..td }))
        }
        _ => Err(SchemaError::new(path.clone(), "expected \"unknown\" or a tail object")),
    }
}

pub fn tail_to_json(tail: &Tail) -> Option<Value> {
    match tail {
        Tail::Zero => None,
        Tail::Unknown => Some(Value::String("unknown".into())),
        Tail::Geometric(td) => {
            let mut obj = json!({
                "start": td.start,
                "C": rational_to_string(&td.bound),
                "r": rational_to_string(&td.ratio),
            });
            if td.sharp {
                obj["sharp"] = Value::Bool(true);
            }
            Some(obj)
        }
    }
}

pub fn series_from_json(v: &Value, path: &str) -> SchemaResult<TruncatedSeries> {
    let obj = object(v, path)?;
    let model = model_from_json(field(obj, "model", path)?, &join(path, "model"))?;
    let basis = match obj.get("basis") {
        None => Basis::Monomial,
        Some(b) => string(b, &join(path, "basis"))?
            .parse()
            .map_err(|e: String| SchemaError::new(join(path, "basis"), e))?,
    };
    let coeffs = elements_from_json(&model, field(obj, "coeffs", path)?, &join(path, "coeffs"))?;
    let tail = tail_from_json(obj.get("tail"), path)?;
    TruncatedSeries::new(model, basis, coeffs, tail).map_err(|e| SchemaError::new(path, e.to_string()))
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let mut obj = Map::new();
    obj.insert("model".into(), Value::String(s.model().to_string()));
    obj.insert("basis".into(), Value::String(s.basis().to_string()));
    obj.insert("coeffs".into(), elements_to_json(s.model(), s.coeffs()));
    if let Some(t) = tail_to_json(s.tail()) {
        obj.insert("tail".into(), t);
    }
    Value::Object(obj)
}

pub fn weight_from_json(v: &Value, path: &str) -> SchemaResult<Weight> {
    let obj = object(v, path)?;
    let kind = string(field(obj, "kind", path)?, &join(path, "kind"))?;
    let ratio = rational_from_json(field(obj, "ratio", path)?, &join(path, "ratio"))?;
    let w = match kind {
        "geometric" => Weight::geometric(ratio),
        "table" => {
            let p = join(path, "prefix");
            let prefix = array(field(obj, "prefix", path)?, &p)?
                .iter()
                .enumerate()
                .map(|(i, x)| rational_from_json(x, &index(&p, i)))
                .collect::<SchemaResult<Vec<_>>>()?;
            Weight::table(prefix, ratio)
        }
        other => {
            return Err(SchemaError::new(
                join(path, "kind"),
                format!("unknown weight kind {other:?}"),
            ))
        }
    };
    w.map_err(|e| SchemaError::new(path, e.to_string()))
}

pub fn weight_to_json(w: &Weight) -> Value {
    match w {
        Weight::Geometric { ratio } => json!({"kind": "geometric", "ratio": rational_to_string(ratio)}),
        Weight::Table { prefix, ratio } => json!({
            "kind": "table",
            "prefix": prefix.iter().map(rational_to_string).collect::<Vec<_>>(),
            "ratio": rational_to_string(ratio),
        }),
    }
}

pub fn matrix_from_json(v: &Value, path: &str) -> SchemaResult<WeightMatrix> {
    let obj = object(v, path)?;
    let p = join(path, "rows");
    let rows = array(field(obj, "rows", path)?, &p)?
        .iter()
        .enumerate()
        .map(|(i, w)| weight_from_json(w, &index(&p, i)))
        .collect::<SchemaResult<Vec<_>>>()?;
    let na = match obj.get("na") {
        None => false,
        Some(b) => b
            .as_bool()
            .ok_or_else(|| SchemaError::new(join(path, "na"), "expected a boolean"))?,
    };
    WeightMatrix::new(rows, na).map_err(|e| SchemaError::new(p, e.to_string()))
}

pub fn matrix_to_json(w: &WeightMatrix) -> Value {
    json!({"rows": w.rows().iter().map(weight_to_json).collect::<Vec<_>>(), "na": w.na()})
}

pub fn table_from_json(v: &Value, path: &str) -> SchemaResult<FunctionTable> {
    let obj = object(v, path)?;
    let model = model_from_json(field(obj, "model", path)?, &join(path, "model"))?;
    let p = join(path, "values");
    let values = elements_from_json(&model, field(obj, "values", path)?, &p)?;
    FunctionTable::new(model, values).map_err(|e| SchemaError::new(p, e.to_string()))
}

pub fn table_to_json(t: &FunctionTable) -> Value {
    json!({"model": t.model().to_string(), "values": elements_to_json(t.model(), t.values())})
}

/// `{"model", "moments", "tail"?}`.
pub fn moments_from_json(v: &Value, path: &str) -> SchemaResult<(CoefficientModel, Vec<RingElement>, Tail)> {
    let obj = object(v, path)?;
    let model = model_from_json(field(obj, "model", path)?, &join(path, "model"))?;
    let moments = elements_from_json(&model, field(obj, "moments", path)?, &join(path, "moments"))?;
    let tail = tail_from_json(obj.get("tail"), path)?;
    Ok((model, moments, tail))
}

pub fn tensor_to_json(t: &BiTruncatedSeries) -> Value {
    let entries: Vec<Value> = t
        .entries()
        .map(|(&(i, j), c)| json!({"i": i, "j": j, "c": element_to_json(t.model(), c)}))
        .collect();
    let mut obj = json!({
        "model": t.model().to_string(),
        "rows": t.rows(),
        "cols": t.cols(),
        "entries": entries,
    });
    if let Some(d) = t.diag() {
        obj["diag"] = json!(d);
    }
    obj
}

pub fn tensor_from_json(v: &Value, path: &str) -> SchemaResult<BiTruncatedSeries> {
    let obj = object(v, path)?;
    let model = model_from_json(field(obj, "model", path)?, &join(path, "model"))?;
    let p = join(path, "entries");
    let mut entries = Vec::new();
    let mut extent = 0;
    for (k, e) in array(field(obj, "entries", path)?, &p)?.iter().enumerate() {
        let ep = index(&p, k);
        let eo = object(e, &ep)?;
        let i = natural(field(eo, "i", &ep)?, &join(&ep, "i"))?;
        let j = natural(field(eo, "j", &ep)?, &join(&ep, "j"))?;
        let c = element_from_json(&model, field(eo, "c", &ep)?, &join(&ep, "c"))?;
        extent = extent.max(i + 1).max(j + 1);
        entries.push(((i, j), c));
    }
    let size = |key: &str| -> SchemaResult<usize> { obj.get(key).map_or(Ok(extent), |v| natural(v, &join(path, key))) };
    let diag = obj.get("diag").map(|v| natural(v, &join(path, "diag"))).transpose()?;
    BiTruncatedSeries::new(model, size("rows")?, size("cols")?, diag, entries)
        .map_err(|e| SchemaError::new(p, e.to_string()))
}
