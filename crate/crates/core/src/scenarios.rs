//! Bundled structures and orbit scenarios.
//!
//! The JSON files under `scenarios/` are compiled into the library. Setting
//! `HODGEKIT_SCENARIO_DIR` replaces the bundled set by the `*.json` files of
//! that directory.

use std::path::PathBuf;

use serde_json::{json, Map, Value};

use crate::corpus;
use crate::error::{Error, Result};
use crate::field::{Exact, Gq, Matrix, Scalar};
use crate::io;
use crate::orbits::{OrbitScenario, Samples};
use crate::record::Record;

pub const SCENARIO_DIR_ENV: &str = "HODGEKIT_SCENARIO_DIR";

const BUNDLED: &[(&str, &str)] = &[
    ("example-2-7", include_str!("../scenarios/example-2-7.json")),
    ("closing5", include_str!("../scenarios/closing5.json")),
    ("flat-hodge-tate", include_str!("../scenarios/flat-hodge-tate.json")),
    ("sharpness-L3", include_str!("../scenarios/sharpness-L3.json")),
    ("tensor-4", include_str!("../scenarios/tensor-4.json")),
    ("tensor-6", include_str!("../scenarios/tensor-6.json")),
];

fn override_dir() -> Option<PathBuf> {
    std::env::var_os(SCENARIO_DIR_ENV).map(PathBuf::from)
}

/// Names of the available scenarios, sorted.
pub fn names() -> Result<Vec<String>> {
    let mut out: Vec<String> = match override_dir() {
        Some(dir) => std::fs::read_dir(&dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .filter_map(|p| p.file_stem().map(|s| s.to_string_lossy().into_owned()))
            .collect(),
        None => BUNDLED.iter().map(|(n, _)| n.to_string()).collect(),
    };
    out.sort();
    Ok(out)
}

pub fn source(name: &str) -> Result<String> {
    match override_dir() {
        Some(dir) => {
            let path = dir.join(format!("{name}.json"));
            if !path.is_file() {
                return Err(Error::UnknownScenario(name.into()));
            }
            Ok(std::fs::read_to_string(path)?)
        }
        None => BUNDLED
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s.to_string())
            .ok_or_else(|| Error::UnknownScenario(name.into())),
    }
}

pub fn value(name: &str) -> Result<Value> {
    Ok(serde_json::from_str(&source(name)?)?)
}

/// True when the scenario carries orbit data (`samples`).
pub fn is_orbit(v: &Value) -> bool {
    v.get("samples").is_some()
}

pub fn record(name: &str) -> Result<Record<Gq>> {
    io::record_from_json(&value(name)?, Exact)
}

pub fn orbit_scenario(name: &str) -> Result<OrbitScenario<Gq>> {
    let v = value(name)?;
    if !is_orbit(&v) {
        return Err(Error::Invalid(format!("scenario '{name}' has no orbit samples")));
    }
    io::scenario_from_json(&v, Exact)
}

fn dyadic_samples(range: std::ops::RangeInclusive<u32>) -> Samples<Gq> {
    Samples::SAbs(range.map(|m| Gq::ratio(1, 1i64 << m)).collect())
}

/// The Hodge–Tate pair at `λ = 1/2 + i/3`.
pub fn example_2_7() -> Record<Gq> {
    let mut r = corpus::hodge_tate_pair(Gq::complex(1, 2, 1, 3));
    r.n = None;
    r
}

/// The Hodge–Tate pair at `λ = 1/2 + i` with `N(e₂) = e₀`.
pub fn closing5() -> Record<Gq> {
    corpus::hodge_tate_pair(Gq::complex(1, 2, 1, 1))
}

/// `Γ(s) = sN` on the real Hodge–Tate pair, `|s| = 2^{-m}`, `m = 2..40`.
pub fn flat_hodge_tate() -> OrbitScenario<Gq> {
    let base = corpus::hodge_tate_pair(Gq::ratio(1, 2));
    let n = base.nilpotent();
    OrbitScenario {
        gamma: vec![Matrix::zeros(2, 2), n],
        base,
        sigma: None,
        samples: dyadic_samples(2..=40),
    }
}

/// `e^{zN}F̂` against `e^{zN}F` on the closing pair, `F = e^{iN}F̂`.
pub fn sharpness_l3() -> OrbitScenario<Gq> {
    let base = closing5();
    let sigma = base.nilpotent().scale(&Gq::i());
    OrbitScenario {
        base,
        gamma: Vec::new(),
        sigma: Some(sigma),
        samples: Samples::Y((2..=12).map(|k| Gq::ratio(k * k, 4)).collect()),
    }
}

fn tensor_scenario(block: &Record<Gq>, lambda: Gq, samples: Samples<Gq>) -> Result<OrbitScenario<Gq>> {
    let base = corpus::tensor(&corpus::hodge_tate_pair(lambda), block)?;
    let n = base.nilpotent();
    Ok(OrbitScenario {
        gamma: vec![Matrix::zeros(n.rows(), n.rows()), n],
        base,
        sigma: None,
        samples,
    })
}

/// Hodge–Tate pair tensored with a weight-one block.
pub fn tensor_4() -> Result<OrbitScenario<Gq>> {
    tensor_scenario(&corpus::weight_one_block(), Gq::ratio(1, 3), dyadic_samples(2..=30))
}

/// Hodge–Tate pair tensored with a Tate line plus a weight-one block.
pub fn tensor_6() -> Result<OrbitScenario<Gq>> {
    let block = corpus::direct_sum(&corpus::hodge_tate_line(1), &corpus::weight_one_block())?;
    tensor_scenario(&block, Gq::ratio(-1, 4), dyadic_samples(2..=30))
}

/// Expected outcomes a bundled scenario declares under `"expect"`:
///
/// - `unitary_graded_frame`: the Gram matrix of [`graded_frame`] is `I`;
/// - `grading_equals_relative`: Deligne's `Y` equals `relY`;
/// - `decay`: `"exponential"` (fitted slope `-2π` within 0.1%) or
///   `"constant"` (every exact `d̂²` equal, slope within `1e-9` of zero);
/// - `dist_equals_s_abs`: `d̂² = |s|²` exactly at every sample.
///
/// [`graded_frame`]: crate::mhs::graded_frame
pub fn expectations(v: &Value) -> Map<String, Value> {
    v.get("expect").and_then(Value::as_object).cloned().unwrap_or_default()
}

fn with_expect(mut v: Value, expect: Value) -> Value {
    if let (Some(o), Value::Object(e)) = (v.as_object_mut(), expect) {
        o.insert("expect".into(), Value::Object(e));
    }
    v
}

/// JSON of every bundled scenario, as produced by the builders.
pub fn builder_json() -> Result<Vec<(&'static str, Value)>> {
    let rec = |r: Record<Gq>| -> Result<Value> { Ok(Value::Object(io::record_to_json(&r, Exact)?)) };
    let orbit = |sc: OrbitScenario<Gq>| io::scenario_to_json(&sc, Exact);
    Ok(vec![
        ("example-2-7", with_expect(rec(example_2_7())?, json!({ "unitary_graded_frame": true }))),
        ("closing5", with_expect(rec(closing5())?, json!({ "grading_equals_relative": true }))),
        (
            "flat-hodge-tate",
            with_expect(
                orbit(flat_hodge_tate())?,
                json!({ "decay": "exponential", "dist_equals_s_abs": true }),
            ),
        ),
        ("sharpness-L3", with_expect(orbit(sharpness_l3())?, json!({ "decay": "constant" }))),
        ("tensor-4", with_expect(orbit(tensor_4()?)?, json!({ "decay": "exponential" }))),
        ("tensor-6", with_expect(orbit(tensor_6()?)?, json!({ "decay": "exponential" }))),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_match_builders() {
        for (name, v) in builder_json().unwrap() {
            let bundled = BUNDLED.iter().find(|(n, _)| *n == name).unwrap().1;
            assert_eq!(bundled, io::to_pretty(&v), "{name} is stale");
        }
    }

    /// Rewrites the bundled files from the builders.
    #[test]
    #[ignore]
    fn regenerate_bundled_files() {
        let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios");
        for (name, v) in builder_json().unwrap() {
            std::fs::write(dir.join(format!("{name}.json")), io::to_pretty(&v)).unwrap();
        }
    }

    #[test]
    fn bundled_orbit_scenarios_validate() {
        for name in ["flat-hodge-tate", "sharpness-L3", "tensor-4", "tensor-6"] {
            let sc = OrbitScenario::clone(&match name {
                "flat-hodge-tate" => flat_hodge_tate(),
                "sharpness-L3" => sharpness_l3(),
                "tensor-4" => tensor_4().unwrap(),
                _ => tensor_6().unwrap(),
            });
            sc.validate(Exact).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
