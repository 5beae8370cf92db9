//! `scenario list` and `scenario run`.
//!
//! Stdout only carries deterministic data; timings go to the notes.

use std::f64::consts::PI;

use hodgekit::field::{Exact, Gq, Matrix, Scalar};
use hodgekit::mhs::{classify_membership, deligne_bigrading, graded_frame, mixed_hodge_metric, Membership};
use hodgekit::orbits::{decay_scan, format_float, horizontality_with, Samples};
use hodgekit::record::Record;
use hodgekit::weights::admissible_pipeline;
use hodgekit::{io, scenarios, suite, Error, Result};
use serde_json::{json, Value};

use crate::commands::{grading_failure, scan_failure};
use crate::{Format, Report};

struct Check {
    name: String,
    passed: bool,
    value: Value,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, value: impl Into<Value>) -> Self {
        Check {
            name: name.into(),
            passed,
            value: value.into(),
        }
    }
}

struct ScenarioRun {
    name: String,
    kind: &'static str,
    checks: Vec<Check>,
}

impl ScenarioRun {
    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "kind": self.kind,
            "passed": self.passed(),
            "checks": self.checks.iter().map(|c| json!({ "check": c.name, "passed": c.passed, "value": c.value })).collect::<Vec<_>>(),
        })
    }
}

fn kind(v: &Value) -> &'static str {
    if scenarios::is_orbit(v) {
        "orbit"
    } else {
        "structure"
    }
}

pub fn list(format: Format) -> Result<Report> {
    let mut rows = Vec::new();
    for name in scenarios::names()? {
        let k = kind(&scenarios::value(&name)?);
        rows.push((name, k));
    }
    let body = match format {
        Format::Json => io::to_pretty(&json!({
            "scenarios": rows.iter().map(|(n, k)| json!({ "name": n, "kind": k })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("name,kind\n");
            for (n, k) in &rows {
                s.push_str(&format!("{n},{k}\n"));
            }
            s
        }
    };
    Ok(Report {
        body,
        failure: None,
        notes: Vec::new(),
    })
}

fn run_record(rec: &Record<Gq>, expect: &serde_json::Map<String, Value>, checks: &mut Vec<Check>) -> Result<()> {
    let gc = rec.validate(Exact)?;
    let m = classify_membership(&rec.f, &rec.w, &rec.pol, Exact);
    checks.push(Check::new("membership", m.stratum == Membership::InM, m.stratum.to_string()));
    if let Some(n) = &rec.n {
        let a = admissible_pipeline(&rec.f, &rec.w, n, Exact)?;
        let bad = grading_failure(&a, Exact)?;
        checks.push(Check::new("deligne_grading", bad.is_none(), bad.unwrap_or_else(|| "ok".into())));
        if expect.get("grading_equals_relative") == Some(&json!(true)) {
            checks.push(Check::new("grading_equals_relative", *a.y() == a.rel_y, *a.y() == a.rel_y));
        }
    }
    if expect.get("unitary_graded_frame") == Some(&json!(true)) {
        let b = deligne_bigrading(&rec.f, &rec.w, Exact)?;
        let h = mixed_hodge_metric(&b, &rec.pol, &gc, Exact)?;
        let gram = h.gram_of(&graded_frame(&b, &gc, Exact)?);
        let unit = gram == Matrix::<Gq>::identity(gram.rows());
        checks.push(Check::new("unitary_graded_frame", unit, io::matrix_to_json(&gram)));
    }
    Ok(())
}

fn run_orbit(v: &Value, expect: &serde_json::Map<String, Value>, checks: &mut Vec<Check>) -> Result<()> {
    let sc = io::scenario_from_json::<Gq>(v, Exact)?;
    let data = sc.validate(Exact)?;
    let h = horizontality_with(&sc, &data, Exact)?;
    checks.push(Check::new(
        "horizontal",
        h.horizontal,
        h.witness.map_or(Value::Null, |w| w.to_string().into()),
    ));
    let scan = decay_scan(&sc)?;
    let off = scan_failure(&scan);
    checks.push(Check::new("scan", off.is_none(), off.unwrap_or_else(|| json!(scan.rows.len()))));
    let slope = scan.fit.map(|f| f.slope);
    let slope_json = slope.map_or(Value::Null, |a| format_float(a).into());
    match expect.get("decay").and_then(Value::as_str) {
        Some("exponential") => {
            let ok = slope.is_some_and(|a| (a + 2.0 * PI).abs() <= 1e-3 * 2.0 * PI);
            checks.push(Check::new("slope_minus_two_pi", ok, slope_json));
            checks.push(Check::new(
                "x_shift_invariant",
                scan.x_shift_invariant != Some(false),
                scan.x_shift_invariant,
            ));
        }
        Some("constant") => {
            let first = scan.rows.first().and_then(|r| r.dist_sq_exact.clone());
            let same = first.is_some() && scan.rows.iter().all(|r| r.dist_sq_exact == first);
            checks.push(Check::new(
                "constant_distance",
                same,
                first.map_or(Value::Null, |d| d.to_string().into()),
            ));
            checks.push(Check::new("flat_slope", slope.is_none_or(|a| a.abs() <= 1e-9), slope_json));
        }
        Some(other) => return Err(Error::Invalid(format!("unknown decay expectation '{other}'"))),
        None => {}
    }
    if expect.get("dist_equals_s_abs") == Some(&json!(true)) {
        let Samples::SAbs(ss) = &sc.samples else {
            return Err(Error::Invalid("dist_equals_s_abs needs |s| samples".into()));
        };
        let ok = ss.len() == scan.rows.len()
            && ss
                .iter()
                .zip(&scan.rows)
                .all(|(s, r)| r.dist_sq_exact.as_ref() == Some(&s.mul(s)));
        checks.push(Check::new("dist_equals_s_abs", ok, ok));
    }
    Ok(())
}

fn run_one(name: &str) -> Result<ScenarioRun> {
    let v = scenarios::value(name)?;
    let expect = scenarios::expectations(&v);
    let mut checks = Vec::new();
    if scenarios::is_orbit(&v) {
        run_orbit(&v, &expect, &mut checks)?;
    } else {
        let rec = io::record_from_json::<Gq>(&v, Exact)?;
        run_record(&rec, &expect, &mut checks)?;
    }
    Ok(ScenarioRun {
        name: name.to_string(),
        kind: kind(&v),
        checks,
    })
}

fn csv_rows(runs: &[ScenarioRun]) -> String {
    let mut s = String::from("scenario,check,passed,value\n");
    for r in runs {
        for c in &r.checks {
            let value = match &c.value {
                Value::String(x) => x.clone(),
                other => other.to_string(),
            };
            s.push_str(&format!("{},{},{},\"{}\"\n", r.name, c.name, c.passed, value.replace('"', "\"\"")));
        }
    }
    s
}

pub fn run(name: &str, format: Format) -> Result<Report> {
    if name != "all" {
        let r = run_one(name)?;
        let failure = (!r.passed()).then(|| {
            json!({ "failed_checks": r.checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect::<Vec<_>>() })
        });
        let body = match format {
            Format::Json => io::to_pretty(&r.to_json()),
            Format::Csv => csv_rows(std::slice::from_ref(&r)),
        };
        return Ok(Report {
            body,
            failure,
            notes: Vec::new(),
        });
    }
    let mut runs = Vec::new();
    for n in scenarios::names()? {
        runs.push(run_one(&n)?);
    }
    let criteria = suite::run_all(suite::DEFAULT_SEED);
    let notes: Vec<String> = criteria.iter().map(|c| c.to_string()).collect();
    let crit_json: Vec<Value> = criteria
        .iter()
        .map(|c| {
            json!({
                "id": c.id,
                "name": c.name,
                "passed": c.passed(),
                "checks_passed": c.checks_passed,
                "within_budget": c.elapsed <= c.budget,
            })
        })
        .collect();
    let failed: Vec<Value> = runs
        .iter()
        .filter(|r| !r.passed())
        .map(|r| json!(r.name))
        .chain(criteria.iter().filter(|c| !c.passed()).map(|c| json!(format!("criterion {}", c.id))))
        .collect();
    let passed = failed.is_empty();
    let body = match format {
        Format::Json => io::to_pretty(&json!({
            "scenarios": runs.iter().map(ScenarioRun::to_json).collect::<Vec<_>>(),
            "criteria": crit_json,
            "passed": passed,
        })),
        Format::Csv => {
            let mut s = csv_rows(&runs);
            for c in &criteria {
                s.push_str(&format!("criterion-{},{},{},\"\"\n", c.id, c.name, c.passed()));
            }
            s
        }
    };
    Ok(Report {
        body,
        failure: (!passed).then(|| json!({ "failed": failed })),
        notes,
    })
}
