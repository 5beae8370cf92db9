//! JSON encoding of records, scenarios and derived structures.
//!
//! Exact scalars are strings such as `"3/2-1/4i"`. Floating scalars are JSON
//! numbers when real and strings `"<re>±<im>i"` otherwise. Filtrations are
//! written as the new basis vectors at each jump, so `W_k` is spanned by the
//! vectors listed at keys `≤ k` and `F^p` by those at keys `≥ p`. Subspaces
//! are stored in reduced echelon form, which makes the encoding canonical.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::{Endo, Gq, Matrix, Scalar, Subspace, C64};
use crate::mhs::{Bigrading, DecFiltration, IncFiltration, PolarizationSystem};
use crate::orbits::{OrbitScenario, Samples};
use crate::record::Record;
use crate::weights::Sl2Triple;

pub trait JsonScalar: Scalar {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonScalar for Gq {
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => s.parse(),
            Value::Number(n) => match n.as_i64() {
                Some(k) => Ok(Gq::int(k)),
                None => Err(Error::Parse(format!("non-exact scalar {n}"))),
            },
            other => Err(Error::Parse(format!("expected a scalar, found {other}"))),
        }
    }
}

fn parse_c64_string(s: &str) -> Result<C64> {
    if let Ok(q) = s.parse::<Gq>() {
        return Ok(q.to_c64());
    }
    let bad = || Error::Parse(format!("invalid scalar '{s}'"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|x| C64::new(x, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => Ok(C64::new(body[..k].parse().map_err(|_| bad())?, num(&body[k..])?)),
        None => Ok(C64::new(0.0, num(body)?)),
    }
}

impl JsonScalar for C64 {
    fn to_json(&self) -> Value {
        if self.im == 0.0 {
            json!(self.re)
        } else {
            let sign = if self.im.is_sign_negative() { "-" } else { "+" };
            Value::String(format!("{}{}{}i", self.re, sign, self.im.abs()))
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_c64_string(s),
            Value::Number(n) => n
                .as_f64()
                .map(|x| C64::new(x, 0.0))
                .ok_or_else(|| Error::Parse(format!("invalid number {n}"))),
            other => Err(Error::Parse(format!("expected a scalar, found {other}"))),
        }
    }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing field '{key}'")))
}

fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| Error::Parse(format!("{what}: expected an object")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::Parse(format!("{what}: expected an array")))
}

fn int_key(k: &str) -> Result<i32> {
    k.trim().parse().map_err(|_| Error::Parse(format!("invalid integer key '{k}'")))
}

fn pair_key(k: &str) -> Result<(i32, i32)> {
    let (p, q) = k
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("invalid key '{k}', expected \"p,q\"")))?;
    Ok((int_key(p)?, int_key(q)?))
}

pub fn vector_to_json<S: JsonScalar>(v: &[S]) -> Value {
    Value::Array(v.iter().map(JsonScalar::to_json).collect())
}

pub fn vector_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str) -> Result<Vec<S>> {
    let a = as_array(v, what)?;
    if a.len() != n {
        return Err(Error::Parse(format!("{what}: vector of length {} in dimension {n}", a.len())));
    }
    a.iter().map(S::from_json).collect()
}

fn vectors_to_json<S: JsonScalar>(vs: &[Vec<S>]) -> Value {
    Value::Array(vs.iter().map(|v| vector_to_json(v)).collect())
}

fn vectors_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str) -> Result<Vec<Vec<S>>> {
    as_array(v, what)?.iter().map(|x| vector_from_json(x, n, what)).collect()
}

pub fn matrix_to_json<S: JsonScalar>(m: &Matrix<S>) -> Value {
    Value::Array((0..m.rows()).map(|i| vector_to_json(m.row(i))).collect())
}

pub fn matrix_from_json<S: JsonScalar>(v: &Value, what: &str) -> Result<Matrix<S>> {
    let rows = as_array(v, what)?;
    let parsed = rows
        .iter()
        .map(|r| as_array(r, what)?.iter().map(S::from_json).collect::<Result<Vec<S>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(parsed).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn square_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str) -> Result<Endo<S>> {
    if v.as_array().is_some_and(|a| a.is_empty()) && n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let m = matrix_from_json(v, what)?;
    if m.rows() != n || m.cols() != n {
        return Err(Error::Parse(format!("{what}: expected a {n}x{n} matrix")));
    }
    Ok(m)
}

fn indexed_to_json<S: JsonScalar>(gens: BTreeMap<i32, Vec<Vec<S>>>) -> Value {
    Value::Object(gens.into_iter().map(|(k, vs)| (k.to_string(), vectors_to_json(&vs))).collect())
}

fn indexed_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str) -> Result<BTreeMap<i32, Vec<Vec<S>>>> {
    as_object(v, what)?
        .iter()
        .map(|(k, vs)| Ok((int_key(k)?, vectors_from_json(vs, n, what)?)))
        .collect()
}

/// New basis vectors of `W_k` over `W_{k-1}` at each jump.
pub fn inc_filtration_to_json<S: JsonScalar>(w: &IncFiltration<S>, ctx: S::Ctx) -> Result<Value> {
    let n = w.ambient_dim();
    let mut prev = Subspace::zero(n);
    let mut gens = BTreeMap::new();
    for (&k, s) in w.steps() {
        gens.insert(k, s.complement_of(&prev, ctx)?);
        prev = s.clone();
    }
    Ok(indexed_to_json(gens))
}

pub fn inc_filtration_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str, ctx: S::Ctx) -> Result<IncFiltration<S>> {
    IncFiltration::from_generators(n, &indexed_from_json(v, n, what)?, ctx)
}

/// New basis vectors of `F^p` over `F^{p+1}` at each jump.
pub fn dec_filtration_to_json<S: JsonScalar>(f: &DecFiltration<S>, ctx: S::Ctx) -> Result<Value> {
    let n = f.ambient_dim();
    let mut prev = Subspace::zero(n);
    let mut gens = BTreeMap::new();
    for (&p, s) in f.steps().iter().rev() {
        gens.insert(p, s.complement_of(&prev, ctx)?);
        prev = s.clone();
    }
    Ok(indexed_to_json(gens))
}

pub fn dec_filtration_from_json<S: JsonScalar>(v: &Value, n: usize, what: &str, ctx: S::Ctx) -> Result<DecFiltration<S>> {
    DecFiltration::from_generators(n, &indexed_from_json(v, n, what)?, ctx)
}

pub fn bigrading_to_json<S: JsonScalar>(b: &Bigrading<S>) -> Value {
    Value::Object(
        b.pieces()
            .iter()
            .map(|((p, q), s)| (format!("{p},{q}"), vectors_to_json(&s.basis())))
            .collect(),
    )
}

pub fn bigrading_from_json<S: JsonScalar>(v: &Value, n: usize, ctx: S::Ctx) -> Result<Bigrading<S>> {
    let pieces = as_object(v, "bigrading")?
        .iter()
        .map(|(k, vs)| Ok((pair_key(k)?, Subspace::span(n, &vectors_from_json(vs, n, "bigrading")?, ctx)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Bigrading::from_pieces(n, pieces, ctx)
}

pub fn sl2_to_json<S: JsonScalar>(t: &Sl2Triple<S>) -> Value {
    json!({
        "n_minus": matrix_to_json(&t.n_minus),
        "y": matrix_to_json(&t.y),
        "n_plus": matrix_to_json(&t.n_plus),
    })
}

pub fn sl2_from_json<S: JsonScalar>(v: &Value, n: usize) -> Result<Sl2Triple<S>> {
    let o = as_object(v, "sl2_triple")?;
    Ok(Sl2Triple {
        n_minus: square_from_json(field(o, "n_minus")?, n, "n_minus")?,
        y: square_from_json(field(o, "y")?, n, "y")?,
        n_plus: square_from_json(field(o, "n_plus")?, n, "n_plus")?,
    })
}

pub fn record_to_json<S: JsonScalar>(r: &Record<S>, ctx: S::Ctx) -> Result<Map<String, Value>> {
    let mut o = Map::new();
    o.insert("dimension".into(), json!(r.dim()));
    o.insert("weight_filtration".into(), inc_filtration_to_json(&r.w, ctx)?);
    o.insert("hodge_filtration".into(), dec_filtration_to_json(&r.f, ctx)?);
    o.insert("graded_lifts".into(), indexed_to_json(r.pol.lifts.clone()));
    o.insert(
        "polarizations".into(),
        Value::Object(r.pol.forms.iter().map(|(k, m)| (k.to_string(), matrix_to_json(m))).collect()),
    );
    o.insert(
        "hodge_numbers".into(),
        Value::Object(
            r.pol
                .hodge_numbers
                .iter()
                .map(|((p, q), h)| (format!("{p},{q}"), json!(h)))
                .collect(),
        ),
    );
    if let Some(n) = &r.n {
        o.insert("nilpotent".into(), matrix_to_json(n));
    }
    Ok(o)
}

pub fn record_from_json<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Record<S>> {
    let o = as_object(v, "record")?;
    let n = field(o, "dimension")?
        .as_u64()
        .ok_or_else(|| Error::Parse("dimension: expected a nonnegative integer".into()))? as usize;
    let w = inc_filtration_from_json(field(o, "weight_filtration")?, n, "weight_filtration", ctx)?;
    let f = dec_filtration_from_json(field(o, "hodge_filtration")?, n, "hodge_filtration", ctx)?;
    let lifts = indexed_from_json(field(o, "graded_lifts")?, n, "graded_lifts")?;
    let forms = as_object(field(o, "polarizations")?, "polarizations")?
        .iter()
        .map(|(k, m)| Ok((int_key(k)?, matrix_from_json(m, "polarizations")?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let hodge_numbers = as_object(field(o, "hodge_numbers")?, "hodge_numbers")?
        .iter()
        .map(|(k, h)| {
            let h = h
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("hodge_numbers[{k}]: expected a nonnegative integer")))?;
            Ok((pair_key(k)?, h as usize))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let nil = match o.get("nilpotent") {
        None | Some(Value::Null) => None,
        Some(m) => Some(square_from_json(m, n, "nilpotent")?),
    };
    Ok(Record {
        f,
        w,
        pol: PolarizationSystem {
            hodge_numbers,
            lifts,
            forms,
        },
        n: nil,
    })
}

pub fn scenario_to_json<S: JsonScalar>(sc: &OrbitScenario<S>, ctx: S::Ctx) -> Result<Value> {
    let mut o = record_to_json(&sc.base, ctx)?;
    o.insert("gamma".into(), Value::Array(sc.gamma.iter().map(matrix_to_json).collect()));
    if let Some(s) = &sc.sigma {
        o.insert("sigma".into(), matrix_to_json(s));
    }
    let samples = match &sc.samples {
        Samples::SAbs(v) => json!({ "s_abs": vector_to_json(v) }),
        Samples::Y(v) => json!({ "y": vector_to_json(v) }),
    };
    o.insert("samples".into(), samples);
    Ok(Value::Object(o))
}

pub fn scenario_from_json<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<OrbitScenario<S>> {
    let base = record_from_json(v, ctx)?;
    let n = base.dim();
    let o = as_object(v, "scenario")?;
    let gamma = match o.get("gamma") {
        None => Vec::new(),
        Some(g) => as_array(g, "gamma")?
            .iter()
            .map(|m| square_from_json(m, n, "gamma"))
            .collect::<Result<Vec<_>>>()?,
    };
    let sigma = match o.get("sigma") {
        None | Some(Value::Null) => None,
        Some(m) => Some(square_from_json(m, n, "sigma")?),
    };
    let so = as_object(field(o, "samples")?, "samples")?;
    let scalars = |v: &Value, what: &str| -> Result<Vec<S>> { as_array(v, what)?.iter().map(S::from_json).collect() };
    let samples = match (so.get("s_abs"), so.get("y")) {
        (Some(v), None) => Samples::SAbs(scalars(v, "samples.s_abs")?),
        (None, Some(v)) => Samples::Y(scalars(v, "samples.y")?),
        _ => return Err(Error::Parse("samples: expected exactly one of 's_abs' or 'y'".into())),
    };
    Ok(OrbitScenario {
        base,
        gamma,
        sigma,
        samples,
    })
}

/// Canonical, byte-stable rendering: indented objects and nested arrays,
/// with arrays of scalars kept on one line.
pub fn to_pretty(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn leaf(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |d: usize| "  ".repeat(d);
    match v {
        Value::Object(o) if !o.is_empty() => {
            out.push_str("{\n");
            for (i, (k, x)) in o.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&leaf(&Value::String(k.clone())));
                out.push_str(": ");
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < o.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, x, depth + 1);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Array(a) => {
            let items: Vec<String> = a.iter().map(leaf).collect();
            out.push('[');
            out.push_str(&items.join(", "));
            out.push(']');
        }
        other => out.push_str(&leaf(other)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::field::{Exact, Tolerance};

    #[test]
    fn record_round_trips() {
        let r = corpus::tensor(&corpus::hodge_tate_pair(Gq::complex(1, 2, -1, 3)), &corpus::weight_one_block()).unwrap();
        let v = Value::Object(record_to_json(&r, Exact).unwrap());
        let back: Record<Gq> = record_from_json(&v, Exact).unwrap();
        assert_eq!(back, r);
        assert_eq!(to_pretty(&v), to_pretty(&Value::Object(record_to_json(&back, Exact).unwrap())));
        let reparsed: Value = serde_json::from_str(&to_pretty(&v)).unwrap();
        assert_eq!(reparsed, v);
    }

    #[test]
    fn float_scalars_round_trip() {
        for z in [C64::new(0.1, 0.0), C64::new(-1.5e-7, 2.25), C64::new(3.0, -1e300)] {
            assert_eq!(C64::from_json(&z.to_json()).unwrap(), z);
        }
        assert_eq!(C64::from_json(&json!("1/2-i")).unwrap(), C64::new(0.5, -1.0));
    }

    #[test]
    fn exact_parser_rejects_floats() {
        assert!(Gq::from_json(&json!(0.5)).is_err());
        assert_eq!(Gq::from_json(&json!(3)).unwrap(), Gq::int(3));
    }

    #[test]
    fn float_record_parses_exact_strings() {
        let r = corpus::hodge_tate_pair(Gq::ratio(1, 2));
        let v = Value::Object(record_to_json(&r, Exact).unwrap());
        let f: Record<C64> = record_from_json(&v, Tolerance(1e-9)).unwrap();
        assert_eq!(f.dim(), 2);
    }

    #[test]
    fn bad_keys_are_parse_errors() {
        let r = corpus::hodge_tate_pair(Gq::ratio(1, 2));
        let mut v = record_to_json(&r, Exact).unwrap();
        v.insert("hodge_numbers".into(), json!({"1;1": 1}));
        assert!(matches!(record_from_json::<Gq>(&Value::Object(v), Exact), Err(Error::Parse(_))));
    }
}
