// SPDX-License-Identifier: Apache-2.0
//! JSON instance and solution files.
//!
//! ```json
//! {"format": 1, "type": "areltp", "n": 3, "qmax": 10, "tmax": null,
//!  "cost": [[null, 2, 5], [null, null, 2], [null, null, null]],
//!  "profit": [{"breakpoints": [[0, 0]]}, ...]}
//! ```
//!
//! Numbers are read exactly when every number in the file is an integer or a
//! `"p/q"` string, and as `f64` otherwise. Continuous functions are written as
//! `breakpoints`; anything with jumps, gaps or isolated points as `segments`
//! of `[lo, hi, value_at_lo, value_at_hi]`. A missing `time` matrix means
//! time equals cost.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::lswrc::LotSizingInstance;
use crate::model::{ArcMatrix, Instance, Solution};
use crate::pwl::{PwlFunction, Segment};
use crate::scalar::{Rational, Scalar};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Document<S> {
    Areltp(Instance<S>),
    Lswrc(LotSizingInstance<S>),
}

/// An instance together with its free-form `meta` block.
#[derive(Clone, Debug, PartialEq)]
pub struct InstanceFile<S> {
    pub document: Document<S>,
    pub meta: Option<Value>,
}

impl<S> InstanceFile<S> {
    pub fn new(document: Document<S>) -> Self {
        InstanceFile { document, meta: None }
    }

    pub fn with_meta(mut self, meta: Value) -> Self {
        self.meta = Some(meta);
        self
    }
}

/// A parsed file in the numeric backend its data calls for.
#[derive(Clone, Debug, PartialEq)]
pub enum Loaded {
    Exact(InstanceFile<Rational>),
    Float(InstanceFile<f64>),
}

#[doc(hidden)]
#[derive(Clone, Copy, Debug)]
pub enum Num {
    Int(i128),
    Ratio(i128, i128),
    Float(f64),
}

/// Numeric backends that can be read from and written to files.
pub trait FileScalar: Scalar {
    #[doc(hidden)]
    fn from_num(n: Num) -> Self;
    fn to_value(self) -> Value;
}

impl FileScalar for Rational {
    fn from_num(n: Num) -> Self {
        match n {
            Num::Int(v) => Rational::from_integer(v),
            Num::Ratio(p, q) => Rational::new(p, q),
            Num::Float(_) => unreachable!("exact files hold no floats"),
        }
    }

    fn to_value(self) -> Value {
        if self.is_integer() {
            let v = self.to_integer();
            i64::try_from(v).map(Value::from).unwrap_or_else(|_| Value::String(v.to_string()))
        } else {
            Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }
}

impl FileScalar for f64 {
    fn from_num(n: Num) -> Self {
        match n {
            Num::Int(v) => v as f64,
            Num::Ratio(p, q) => p as f64 / q as f64,
            Num::Float(v) => v,
        }
    }

    fn to_value(self) -> Value {
        serde_json::Number::from_f64(self).map(Value::Number).unwrap_or(Value::Null)
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::InvalidInstance(message.into())
}

fn num(v: &Value, what: &str) -> Result<Num> {
    match v {
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                Ok(Num::Int(i as i128))
            } else if let Some(u) = x.as_u64() {
                Ok(Num::Int(u as i128))
            } else {
                x.as_f64().map(Num::Float).ok_or_else(|| bad(format!("{what}: unreadable number")))
            }
        }
        Value::String(s) => {
            let parse = |t: &str| t.trim().parse::<i128>().map_err(|_| bad(format!("{what}: not a fraction {s:?}")));
            match s.split_once('/') {
                Some((p, q)) => {
                    let (p, q) = (parse(p)?, parse(q)?);
                    if q == 0 {
                        return Err(bad(format!("{what}: zero denominator")));
                    }
                    Ok(Num::Ratio(p, q))
                }
                None => Ok(Num::Int(parse(s)?)),
            }
        }
        _ => Err(bad(format!("{what}: expected a number"))),
    }
}

fn has_float(v: &Value) -> bool {
    match v {
        Value::Number(x) => !(x.is_i64() || x.is_u64()),
        Value::Array(a) => a.iter().any(has_float),
        Value::Object(o) => o.iter().filter(|(k, _)| k.as_str() != "meta").any(|(_, v)| has_float(v)),
        _ => false,
    }
}

struct Reader<'a> {
    obj: &'a Map<String, Value>,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        self.obj.get(key).filter(|v| !v.is_null())
    }

    fn need(&self, key: &str) -> Result<&Value> {
        self.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
    }

    fn scalar<S: FileScalar>(&self, key: &str) -> Result<S> {
        Ok(S::from_num(num(self.need(key)?, key)?))
    }

    fn optional<S: FileScalar>(&self, key: &str) -> Result<Option<S>> {
        self.get(key).map(|v| num(v, key).map(S::from_num)).transpose()
    }

    fn vector<S: FileScalar>(&self, key: &str, n: usize) -> Result<Vec<S>> {
        let arr = self.need(key)?.as_array().ok_or_else(|| bad(format!("{key} must be an array")))?;
        if arr.len() != n {
            return Err(bad(format!("{key} must have {n} entries, found {}", arr.len())));
        }
        arr.iter()
            .enumerate()
            .map(|(i, v)| num(v, &format!("{key}[{i}]")).map(S::from_num))
            .collect()
    }

    fn matrix<S: FileScalar>(&self, key: &str, n: usize) -> Result<Option<ArcMatrix<S>>> {
        let Some(v) = self.get(key) else { return Ok(None) };
        let rows = v.as_array().ok_or_else(|| bad(format!("{key} must be an array of rows")))?;
        if rows.len() != n {
            return Err(bad(format!("{key} must have {n} rows, found {}", rows.len())));
        }
        let mut m = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| bad(format!("{key}[{i}] must be an array")))?;
            if row.len() != n {
                return Err(bad(format!("{key}[{i}] must have {n} entries, found {}", row.len())));
            }
            let parsed = row
                .iter()
                .enumerate()
                .map(|(j, v)| match v {
                    Value::Null => Ok(None),
                    _ if j <= i => Ok(None),
                    _ => num(v, &format!("{key}[{i}][{j}]")).map(|x| Some(S::from_num(x))),
                })
                .collect::<Result<Vec<_>>>()?;
            m.push(parsed);
        }
        Ok(Some(m))
    }

    fn functions<S: FileScalar>(&self, key: &str, n: usize) -> Result<Vec<PwlFunction<S>>> {
        let arr = self.need(key)?.as_array().ok_or_else(|| bad(format!("{key} must be an array")))?;
        if arr.len() != n {
            return Err(bad(format!("{key} must have {n} entries, found {}", arr.len())));
        }
        arr.iter().enumerate().map(|(i, v)| function(v, &format!("{key}[{i}]"))).collect()
    }
}

fn pairs<'a>(v: &'a Value, what: &str, width: usize) -> Result<Vec<&'a [Value]>> {
    let arr = v.as_array().ok_or_else(|| bad(format!("{what} must be an array")))?;
    arr.iter()
        .map(|p| {
            p.as_array()
                .filter(|p| p.len() == width)
                .map(|p| p.as_slice())
                .ok_or_else(|| bad(format!("{what}: every entry needs {width} numbers")))
        })
        .collect()
}

fn function<S: FileScalar>(v: &Value, what: &str) -> Result<PwlFunction<S>> {
    let obj = v.as_object().ok_or_else(|| bad(format!("{what} must be an object")))?;
    let x = |v: &Value| num(v, what).map(S::from_num);
    let f = if let Some(b) = obj.get("breakpoints") {
        let pts = pairs(b, what, 2)?
            .into_iter()
            .map(|p| Ok((x(&p[0])?, x(&p[1])?)))
            .collect::<Result<Vec<_>>>()?;
        PwlFunction::from_breakpoints(&pts)
    } else if let Some(s) = obj.get("segments") {
        let segs = pairs(s, what, 4)?
            .into_iter()
            .map(|p| Ok(Segment::through(x(&p[0])?, x(&p[2])?, x(&p[1])?, x(&p[3])?)))
            .collect::<Result<Vec<_>>>()?;
        PwlFunction::new(segs)
    } else {
        return Err(bad(format!("{what} needs breakpoints or segments")));
    };
    f.map_err(|e| bad(format!("{what}: {e}")))
}

fn function_value<S: FileScalar>(f: &PwlFunction<S>) -> Value {
    let continuous = f.is_continuous() && !(f.len() > 1 && f.segments().iter().any(|s| s.is_point()));
    match f.breakpoints().filter(|_| continuous) {
        Some(pts) => json!({
            "breakpoints": pts.iter().map(|(x, y)| json!([x.to_value(), y.to_value()])).collect::<Vec<_>>()
        }),
        None => json!({
            "segments": f
                .segments()
                .iter()
                .map(|s| json!([s.lo.to_value(), s.hi.to_value(), s.at(s.lo).to_value(), s.at(s.hi).to_value()]))
                .collect::<Vec<_>>()
        }),
    }
}

fn matrix_value<S: FileScalar>(m: &ArcMatrix<S>) -> Value {
    Value::Array(
        m.iter()
            .map(|row| Value::Array(row.iter().map(|c| c.map_or(Value::Null, |c| c.to_value())).collect()))
            .collect(),
    )
}

fn vector_value<S: FileScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(|x| x.to_value()).collect())
}

fn build<S: FileScalar>(obj: &Map<String, Value>) -> Result<InstanceFile<S>> {
    let r = Reader { obj };
    if let Some(v) = r.get("format") {
        if v.as_u64() != Some(FORMAT_VERSION) {
            return Err(bad(format!("unsupported format version {v}")));
        }
    }
    let kind = r.need("type")?.as_str().ok_or_else(|| bad("type must be a string"))?;
    let n = r
        .need("n")?
        .as_u64()
        .ok_or_else(|| bad("n must be a non-negative integer"))? as usize;
    let cost: ArcMatrix<S> = r.matrix("cost", n)?.ok_or_else(|| bad("missing field \"cost\""))?;
    let time = r.matrix("time", n)?;
    let qmax = r.scalar("qmax")?;
    let tmax = r.optional("tmax")?;
    let document = match kind {
        "areltp" => {
            let profit = r.functions("profit", n)?;
            let time = time.unwrap_or_else(|| cost.clone());
            let mut inst = Instance::new(cost, time, profit, qmax, tmax)?;
            if r.get("skip_load").is_some() || r.get("skip_cost").is_some() {
                let load = if r.get("skip_load").is_some() { r.vector("skip_load", n)? } else { vec![S::zero(); n] };
                let kost = if r.get("skip_cost").is_some() { r.vector("skip_cost", n)? } else { vec![S::zero(); n] };
                inst = inst.with_skip_terms(load, kost)?;
            }
            Document::Areltp(inst)
        }
        "lswrc" => {
            let production = r.functions("production", n)?;
            Document::Lswrc(LotSizingInstance::new(
                r.vector("demand", n)?,
                r.vector("holding", n)?,
                production,
                cost,
                time,
                qmax,
                tmax,
            )?)
        }
        other => return Err(bad(format!("unknown instance type {other:?}"))),
    };
    Ok(InstanceFile {
        document,
        meta: obj.get("meta").cloned(),
    })
}

pub fn parse_instance(text: &str) -> Result<Loaded> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| bad("an instance file holds a JSON object"))?;
    if has_float(&value) {
        build(obj).map(Loaded::Float)
    } else {
        build(obj).map(Loaded::Exact)
    }
}

pub fn instance_value<S: FileScalar>(file: &InstanceFile<S>) -> Value {
    let mut out = Map::new();
    out.insert("format".into(), json!(FORMAT_VERSION));
    let tmax = |t: Option<S>| t.map_or(Value::Null, |t| t.to_value());
    match &file.document {
        Document::Areltp(inst) => {
            out.insert("type".into(), json!("areltp"));
            out.insert("n".into(), json!(inst.n));
            out.insert("qmax".into(), inst.qmax.to_value());
            out.insert("tmax".into(), tmax(inst.tmax));
            out.insert("cost".into(), matrix_value(&inst.cost));
            if inst.time != inst.cost {
                out.insert("time".into(), matrix_value(&inst.time));
            }
            out.insert("profit".into(), Value::Array(inst.profit.iter().map(function_value).collect()));
            if inst.skip_load.iter().chain(&inst.skip_cost).any(|v| *v != S::zero()) {
                out.insert("skip_load".into(), vector_value(&inst.skip_load));
                out.insert("skip_cost".into(), vector_value(&inst.skip_cost));
            }
        }
        Document::Lswrc(ls) => {
            out.insert("type".into(), json!("lswrc"));
            out.insert("n".into(), json!(ls.n));
            out.insert("qmax".into(), ls.qmax.to_value());
            out.insert("tmax".into(), tmax(ls.tmax));
            out.insert("cost".into(), matrix_value(&ls.setup_cost));
            if ls.setup_time != ls.setup_cost {
                out.insert("time".into(), matrix_value(&ls.setup_time));
            }
            out.insert("demand".into(), vector_value(&ls.demand));
            out.insert("holding".into(), vector_value(&ls.holding));
            out.insert("production".into(), Value::Array(ls.production.iter().map(function_value).collect()));
        }
    }
    if let Some(meta) = &file.meta {
        out.insert("meta".into(), meta.clone());
    }
    Value::Object(out)
}

/// Pretty JSON with a trailing newline.
pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn write_instance<S: FileScalar>(file: &InstanceFile<S>) -> String {
    pretty(&instance_value(file))
}

pub fn write_loaded(file: &Loaded) -> String {
    match file {
        Loaded::Exact(f) => write_instance(f),
        Loaded::Float(f) => write_instance(f),
    }
}

/// Extra solver facts recorded next to a solution.
#[derive(Clone, Debug, Default)]
pub struct SolveReport<S> {
    pub method: String,
    pub dual_bound: Option<S>,
    pub nodes_expanded: Option<usize>,
}

/// Solution file contents.
pub fn solution_value<S: FileScalar>(sol: &Solution<S>, report: &SolveReport<S>) -> Value {
    let mut out = Map::new();
    out.insert("objective".into(), sol.objective.to_value());
    out.insert("visits".into(), json!(sol.visits));
    out.insert("y".into(), vector_value(&sol.y));
    out.insert("duration".into(), sol.duration.to_value());
    out.insert("load_profile".into(), vector_value(&sol.load_profile));
    out.insert("method".into(), json!(report.method));
    if let Some(b) = report.dual_bound {
        out.insert("dual_bound".into(), b.to_value());
    }
    if let Some(k) = report.nodes_expanded {
        out.insert("nodes_expanded".into(), json!(k));
    }
    Value::Object(out)
}

pub fn write_solution<S: FileScalar>(sol: &Solution<S>, report: &SolveReport<S>) -> String {
    pretty(&solution_value(sol, report))
}

/// Display form of a number as it appears in files: integers plain, fractions as `p/q`.
pub fn number_text(v: Rational) -> String {
    match v.to_value() {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

/// Objective read back from a solution file, as `f64`.
pub fn solution_objective(text: &str) -> Result<f64> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let v = value.get("objective").ok_or_else(|| bad("missing field \"objective\""))?;
    Ok(f64::from_num(num(v, "objective")?))
}
