//! One function per verb. Structure verbs echo the input record and append
//! their output blocks.

use std::fmt::Write as _;

use hodgekit::field::{Endo, Exact, Gq, Scalar};
use hodgekit::io::{self, JsonScalar};
use hodgekit::mhs::{classify_membership, deligne_bigrading, delta_split, mixed_hodge_metric, Membership};
use hodgekit::orbits::{self, connection_shape, decay_scan, format_float, horizontality_with, scan_csv, Scan};
use hodgekit::record::Record;
use hodgekit::weights::{
    admissible_pipeline, check_component_heights, check_monodromy, monodromy_filtration, relative_weight_filtration,
    verify_relative_weight_filtration, AdmissibleTriple,
};
use hodgekit::{Error, Result};
use serde_json::{json, Map, Value};

use crate::{Format, Report};

fn nilpotent<S: Scalar>(rec: &Record<S>) -> Result<Endo<S>> {
    rec.n
        .clone()
        .ok_or_else(|| Error::Invalid("the record has no \"nilpotent\" field".into()))
}

fn load<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<(Record<S>, Map<String, Value>)> {
    let rec: Record<S> = io::record_from_json(v, ctx)?;
    rec.validate(ctx)?;
    let out = io::record_to_json(&rec, ctx)?;
    Ok((rec, out))
}

fn finish(o: Map<String, Value>, failure: Option<Value>) -> Result<Report> {
    Ok(Report::json(&Value::Object(o), failure))
}

pub fn mhs_check<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let rep = classify_membership(&rec.f, &rec.w, &rec.pol, ctx);
    let reason = rep.reason.clone().map_or(Value::Null, Value::String);
    o.insert("membership".into(), json!(rep.stratum.to_string()));
    o.insert("reason".into(), reason.clone());
    let failure = (rep.stratum != Membership::InM).then(|| json!({ "membership": rep.stratum.to_string(), "reason": reason }));
    finish(o, failure)
}

pub fn mhs_bigrading<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let b = deligne_bigrading(&rec.f, &rec.w, ctx)?;
    let verified = b.verify(&rec.f, &rec.w, ctx);
    o.insert("bigrading".into(), io::bigrading_to_json(&b));
    finish(o, verified.err().map(|r| json!({ "bigrading": r })))
}

pub fn mhs_metric<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let gc = rec.validate(ctx)?;
    let b = deligne_bigrading(&rec.f, &rec.w, ctx)?;
    let h = mixed_hodge_metric(&b, &rec.pol, &gc, ctx)?;
    o.insert("bigrading".into(), io::bigrading_to_json(&b));
    o.insert("metric".into(), io::matrix_to_json(&h.gram));
    finish(o, None)
}

pub fn mhs_delta_split<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let d = delta_split(&rec.f, &rec.w, ctx)?;
    o.insert("delta".into(), io::matrix_to_json(&d.delta));
    o.insert("split_hodge_filtration".into(), io::dec_filtration_to_json(&d.f_hat, ctx)?);
    o.insert("split_bigrading".into(), io::bigrading_to_json(&d.split_bigrading));
    finish(o, None)
}

pub fn weights_monodromy<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let n = nilpotent(&rec)?;
    let wn = monodromy_filtration(&n, ctx)?;
    let bad = check_monodromy(&wn, &n, ctx)?;
    o.insert("monodromy_weight_filtration".into(), io::inc_filtration_to_json(&wn, ctx)?);
    finish(o, bad.map(|j| json!({ "monodromy_weight_filtration": format!("fails at index {j}") })))
}

pub fn weights_relative<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let n = nilpotent(&rec)?;
    let m = relative_weight_filtration(&n, &rec.w, ctx)?;
    let rep = verify_relative_weight_filtration(&m, &n, &rec.w, ctx)?;
    let verification = json!({
        "degree_witness": rep.degree_witness,
        "graded_witness": rep.graded_witness.map(|(j, k)| json!([j, k])),
    });
    o.insert("relative_weight_filtration".into(), io::inc_filtration_to_json(&m, ctx)?);
    o.insert("verification".into(), verification.clone());
    finish(o, (!rep.ok()).then_some(verification))
}

fn pipeline<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<(AdmissibleTriple<S>, Map<String, Value>)> {
    let (rec, mut o) = load::<S>(v, ctx)?;
    let n = nilpotent(&rec)?;
    let a = admissible_pipeline(&rec.f, &rec.w, &n, ctx)?;
    o.insert("relative_weight_filtration".into(), io::inc_filtration_to_json(&a.rel_w, ctx)?);
    Ok((a, o))
}

pub fn weights_sl2<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (a, mut o) = pipeline::<S>(v, ctx)?;
    let t = &a.grading.triple;
    o.insert("sl2_triple".into(), io::sl2_to_json(t));
    finish(o, t.check(ctx).map(|bad| json!({ "sl2_triple": bad })))
}

/// Properties Deligne's grading must have; the first failure, if any.
pub fn grading_failure<S: Scalar>(a: &AdmissibleTriple<S>, ctx: S::Ctx) -> Result<Option<String>> {
    let t = &a.grading.triple;
    if !a.n.sub(&t.n_minus).commutator(&t.n_plus).is_zero(ctx) {
        return Ok(Some("[N - N0, N0+] != 0".into()));
    }
    if let Some(k) = check_component_heights(&a.grading, ctx) {
        return Ok(Some(format!("component N_{} has the wrong height", -k)));
    }
    if !a.f.preserved_by(a.y(), ctx)? {
        return Ok(Some("Y does not preserve F".into()));
    }
    Ok(None)
}

fn grading_blocks<S: JsonScalar>(a: &AdmissibleTriple<S>, o: &mut Map<String, Value>) {
    o.insert("relative_grading".into(), io::matrix_to_json(&a.rel_y));
    o.insert("deligne_grading".into(), io::matrix_to_json(a.y()));
    o.insert("sl2_triple".into(), io::sl2_to_json(&a.grading.triple));
    o.insert(
        "nilpotent_components".into(),
        Value::Object(
            a.grading
                .components
                .iter()
                .map(|(k, m)| (k.to_string(), io::matrix_to_json(m)))
                .collect(),
        ),
    );
}

pub fn weights_deligne_grading<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (a, mut o) = pipeline::<S>(v, ctx)?;
    grading_blocks(&a, &mut o);
    let failure = grading_failure(&a, ctx)?.map(|r| json!({ "deligne_grading": r }));
    finish(o, failure)
}

pub fn weights_admissible<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let (a, mut o) = pipeline::<S>(v, ctx)?;
    grading_blocks(&a, &mut o);
    o.insert("relative_bigrading".into(), io::bigrading_to_json(&a.bigrading));
    o.insert("admissible".into(), json!(true));
    let failure = grading_failure(&a, ctx)?.map(|r| json!({ "deligne_grading": r }));
    finish(o, failure)
}

pub fn orbit_eval<S: JsonScalar>(v: &Value, ctx: S::Ctx, z: &str) -> Result<Report> {
    let (rec, _) = load::<S>(v, ctx)?;
    let z = S::from_json(&Value::String(z.to_string()))?;
    let f = orbits::orbit_eval(&rec.f, &rec.nilpotent(), &z, ctx)?;
    let moved = Record { f, ..rec };
    let rep = classify_membership(&moved.f, &moved.w, &moved.pol, ctx);
    let mut o = io::record_to_json(&moved, ctx)?;
    o.insert("z".into(), z.to_json());
    o.insert("membership".into(), json!(rep.stratum.to_string()));
    finish(o, None)
}

fn cells(c: &[(i32, i32)]) -> Value {
    Value::Array(c.iter().map(|(a, b)| json!([a, b])).collect())
}

pub fn orbit_horizontality<S: JsonScalar>(v: &Value, ctx: S::Ctx) -> Result<Report> {
    let sc = io::scenario_from_json::<S>(v, ctx)?;
    let data = sc.validate(ctx)?;
    let rep = horizontality_with(&sc, &data, ctx)?;
    let mut connection = Vec::new();
    let mut violations = Vec::new();
    for &(p, q) in data.triple.bigrading.pieces().keys() {
        let c = connection_shape(&sc, &data, p, q, ctx)?;
        for (part, cell) in &c.violations {
            violations.push(json!({ "piece": [p, q], "part": part, "cell": [cell.0, cell.1] }));
        }
        connection.push(json!({
            "piece": [p, q],
            "holomorphic_cells": cells(&c.holomorphic_cells),
            "antiholomorphic_cells": cells(&c.antiholomorphic_cells),
            "violations": c.violations.iter().map(|(part, cell)| json!({ "part": part, "cell": [cell.0, cell.1] })).collect::<Vec<_>>(),
        }));
    }
    let witness = rep.witness.as_ref().map(|w| w.to_string());
    let out = json!({
        "horizontal": rep.horizontal,
        "witness": witness,
        "connection": connection,
    });
    let failure = if !rep.horizontal {
        Some(json!({ "horizontality": witness }))
    } else if !violations.is_empty() {
        Some(json!({ "connection_shape": violations }))
    } else {
        None
    };
    Ok(Report::json(&out, failure))
}

pub fn scan_json(scan: &Scan) -> Value {
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|r| {
            json!({
                "y": format_float(r.y),
                "s_abs": format_float(r.s_abs),
                "dist": format_float(r.dist),
                "log_dist": format_float(r.log_dist),
                "dist_sq_exact": r.dist_sq_exact.as_ref().map(|d| d.to_string()),
                "out_of_chart": r.out_of_chart,
            })
        })
        .collect();
    let fit = scan.fit.map(|f| {
        json!({
            "slope": format_float(f.slope),
            "log_coeff": format_float(f.log_coeff),
            "intercept": format_float(f.intercept),
            "rows_used": f.rows_used,
        })
    });
    json!({ "rows": rows, "fit": fit, "x_shift_invariant": scan.x_shift_invariant })
}

/// CSV rows followed by `#`-prefixed lines carrying the fit.
pub fn scan_csv_with_fit(scan: &Scan, exact: bool) -> String {
    let mut out = scan_csv(scan, exact);
    if let Some(f) = scan.fit {
        let _ = writeln!(out, "# slope,{}", format_float(f.slope));
        let _ = writeln!(out, "# log_coeff,{}", format_float(f.log_coeff));
        let _ = writeln!(out, "# intercept,{}", format_float(f.intercept));
        let _ = writeln!(out, "# rows_used,{}", f.rows_used);
    }
    out
}

pub fn scan_failure(scan: &Scan) -> Option<Value> {
    let off: Vec<Value> = scan
        .rows
        .iter()
        .filter_map(|r| r.out_of_chart.as_ref().map(|e| json!({ "y": format_float(r.y), "error": e })))
        .collect();
    if !off.is_empty() {
        Some(json!({ "out_of_chart": off }))
    } else if scan.fit.is_none() {
        Some(json!({ "fit": "fewer than three usable rows" }))
    } else {
        None
    }
}

pub fn orbit_scan(v: &Value, format: Format, exact_column: bool) -> Result<Report> {
    let sc = io::scenario_from_json::<Gq>(v, Exact)?;
    let scan = decay_scan(&sc)?;
    let body = match format {
        Format::Json => io::to_pretty(&scan_json(&scan)),
        Format::Csv => scan_csv_with_fit(&scan, exact_column),
    };
    Ok(Report {
        body,
        failure: scan_failure(&scan),
        notes: Vec::new(),
    })
}
