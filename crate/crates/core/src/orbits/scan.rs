//! Decay scans: `d̂(F(z), e^{zN}·F_∞)` along `z = iy`.
//!
//! Every sample is evaluated in exact arithmetic. With `|s|` samples the
//! value of `s` is exact and `y = -log|s| / 2π` enters `e^{zN}` through its
//! nearest double; with `y` samples it is `s = e^{-2πy}` that is rounded to
//! a double. Either way the reported `dist²` is the exact surrogate of the
//! rounded inputs.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use super::chart::{orbit_eval, Chart};
use super::scenario::{OrbitScenario, Samples};
use crate::error::{Error, Result};
use crate::field::{Exact, Gq, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub y: f64,
    pub s_abs: f64,
    pub dist: f64,
    pub log_dist: f64,
    /// Exact `d̂²`; `None` when the sample fell outside the chart.
    pub dist_sq_exact: Option<Gq>,
    pub out_of_chart: Option<String>,
}

/// Least-squares fit `log d̂ ≈ a·y + b·log y + c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub log_coeff: f64,
    pub intercept: f64,
    pub rows_used: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    pub fit: Option<DecayFit>,
    /// `d̂` at `x = 1/2` equals `d̂` at `x = 0` on the last sample in the chart.
    pub x_shift_invariant: Option<bool>,
}

struct Sample {
    y: f64,
    s_abs: f64,
    y_exact: Gq,
    s_exact: Gq,
}

fn samples(sc: &OrbitScenario<Gq>) -> Result<Vec<Sample>> {
    sc.check_samples()?;
    let exact = |x: f64| Gq::from_f64_exact(x).ok_or_else(|| Error::Invalid(format!("non-finite sample {x}")));
    match &sc.samples {
        Samples::SAbs(v) => v
            .iter()
            .map(|s| {
                let s_abs = s.re_f64();
                let y = -s_abs.ln() / (2.0 * PI);
                Ok(Sample {
                    y,
                    s_abs,
                    y_exact: exact(y)?,
                    s_exact: s.clone(),
                })
            })
            .collect(),
        Samples::Y(v) => v
            .iter()
            .map(|y| {
                let yf = y.re_f64();
                let s_abs = (-2.0 * PI * yf).exp();
                Ok(Sample {
                    y: yf,
                    s_abs,
                    y_exact: y.clone(),
                    s_exact: exact(s_abs)?,
                })
            })
            .collect(),
    }
}

/// Exact `d̂²` between `e^{zN}e^{Γ(s)}·F_∞` and `e^{zN}·F_ref` at `z = x + iy`.
pub fn sample_dist_sq(sc: &OrbitScenario<Gq>, x: &Gq, y: &Gq, s: &Gq) -> Result<Gq> {
    let ctx = Exact;
    let n = sc.base.nilpotent();
    let z = x.add(&Gq::i().mul(y));
    let reference = orbit_eval(&sc.reference(ctx)?, &n, &z, ctx)?;
    let gamma = sc.gamma_poly()?.eval(s);
    let moved = sc.base.f.transform(&gamma.nilpotent_exp(ctx)?, ctx)?;
    let target = orbit_eval(&moved, &n, &z, ctx)?;
    let chart = Chart::at(&reference, &sc.base.w, &sc.base.pol, ctx)?;
    chart.dist_sq(&target, ctx)
}

pub fn decay_scan(sc: &OrbitScenario<Gq>) -> Result<Scan> {
    sc.validate(Exact)?;
    let pts = samples(sc)?;
    let zero = Gq::zero();
    let mut rows: Vec<ScanRow> = pts
        .par_iter()
        .map(|p| match sample_dist_sq(sc, &zero, &p.y_exact, &p.s_exact) {
            Ok(d2) => {
                let dist = d2.re_f64().max(0.0).sqrt();
                ScanRow {
                    y: p.y,
                    s_abs: p.s_abs,
                    dist,
                    log_dist: dist.ln(),
                    dist_sq_exact: Some(d2),
                    out_of_chart: None,
                }
            }
            Err(e) => ScanRow {
                y: p.y,
                s_abs: p.s_abs,
                dist: f64::NAN,
                log_dist: f64::NAN,
                dist_sq_exact: None,
                out_of_chart: Some(e.to_string()),
            },
        })
        .collect();
    rows.sort_by(|a, b| a.y.total_cmp(&b.y));
    let x_shift_invariant = rows.iter().rev().find(|r| r.dist_sq_exact.is_some()).map(|r| {
        let p = pts.iter().find(|p| p.y == r.y).expect("row comes from a sample");
        sample_dist_sq(sc, &Gq::ratio(1, 2), &p.y_exact, &p.s_exact).ok() == r.dist_sq_exact
    });
    let fit = fit_decay(&rows);
    Ok(Scan {
        rows,
        fit,
        x_shift_invariant,
    })
}

/// Fits the tail half of the rows with a positive finite distance.
pub fn fit_decay(rows: &[ScanRow]) -> Option<DecayFit> {
    let good: Vec<&ScanRow> = rows
        .iter()
        .filter(|r| r.dist > 0.0 && r.log_dist.is_finite() && r.y > 0.0)
        .collect();
    let tail = &good[good.len() / 2..];
    if tail.len() < 3 {
        return None;
    }
    let a = DMatrix::from_fn(tail.len(), 3, |i, j| match j {
        0 => tail[i].y,
        1 => tail[i].y.ln(),
        _ => 1.0,
    });
    let b = DVector::from_iterator(tail.len(), tail.iter().map(|r| r.log_dist));
    let sol = a.svd(true, true).solve(&b, 1e-14).ok()?;
    Some(DecayFit {
        slope: sol[0],
        log_coeff: sol[1],
        intercept: sol[2],
        rows_used: tail.len(),
    })
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "NaN".into()
    }
}

/// CSV with header `y,s_abs,dist,log_dist` (plus `dist_sq_exact` when
/// `exact`); floats carry 17 significant digits.
pub fn scan_csv(scan: &Scan, exact: bool) -> String {
    let mut out = String::from("y,s_abs,dist,log_dist");
    if exact {
        out.push_str(",dist_sq_exact");
    }
    out.push('\n');
    for r in &scan.rows {
        let _ = write!(out, "{},{},{},{}", format_float(r.y), format_float(r.s_abs), format_float(r.dist), format_float(r.log_dist));
        if exact {
            match &r.dist_sq_exact {
                Some(d) => {
                    let _ = write!(out, ",{d}");
                }
                None => out.push_str(",NaN"),
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(y: f64, log_dist: f64) -> ScanRow {
        ScanRow {
            y,
            s_abs: (-2.0 * PI * y).exp(),
            dist: log_dist.exp(),
            log_dist,
            dist_sq_exact: None,
            out_of_chart: None,
        }
    }

    #[test]
    fn fit_recovers_model() {
        let rows: Vec<ScanRow> = (1..40)
            .map(|m| {
                let y = m as f64 * 0.1;
                row(y, -2.0 * PI * y + 0.5 * y.ln() - 1.0)
            })
            .collect();
        let fit = fit_decay(&rows).unwrap();
        assert!((fit.slope + 2.0 * PI).abs() < 1e-9);
        assert!((fit.log_coeff - 0.5).abs() < 1e-9);
        assert!((fit.intercept + 1.0).abs() < 1e-9);
    }

    #[test]
    fn fit_needs_three_rows() {
        assert!(fit_decay(&[row(1.0, -1.0), row(2.0, -2.0)]).is_none());
    }

    #[test]
    fn csv_is_fixed_width_scientific() {
        let scan = Scan {
            rows: vec![row(0.25, -1.0)],
            fit: None,
            x_shift_invariant: None,
        };
        let csv = scan_csv(&scan, false);
        assert_eq!(csv.lines().next(), Some("y,s_abs,dist,log_dist"));
        assert!(csv.lines().nth(1).unwrap().starts_with("2.5000000000000000e-1,"));
    }
}
