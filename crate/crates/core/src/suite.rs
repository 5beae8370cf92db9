//! The verification suite: exact property checks over generated corpora and
//! the bundled scenarios, each with a wall-clock budget.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::Rng;

use crate::corpus::{self, CorpusRng};
use crate::error::Result;
use crate::field::{ad_eig_split, Endo, Exact, Gq, Matrix, Scalar};
use crate::mhs::{delta_split, deligne_bigrading, graded_frame, mixed_hodge_metric, Bigrading, IncFiltration};
use crate::orbits::{decay_scan, int_pow, scaling_operator, Samples};
use crate::record::Record;
use crate::scenarios;
use crate::weights::{
    admissible_pipeline, check_monodromy, deligne_grading, initial_grading, isometry_failure, joint_frame,
    monodromy_filtration, relative_weight_filtration, verify_relative_weight_filtration,
};

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub checks_passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.checks_passed && self.elapsed <= self.budget
    }
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<28} {} ({:.3}s of {}s) {}",
            self.id,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

/// Collects the first few failures of a run.
#[derive(Default)]
struct Tally {
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn error(&mut self, e: impl fmt::Display) {
        self.cases += 1;
        self.failures.push(e.to_string());
    }

    fn finish(self, summary: String) -> (bool, String) {
        if self.failures.is_empty() {
            (true, format!("{} checks; {summary}", self.cases))
        } else {
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            (
                false,
                format!("{} of {} checks failed: {}", self.failures.len(), self.cases, shown.join("; ")),
            )
        }
    }
}

fn timed(id: u8, name: &'static str, budget_secs: u64, body: impl FnOnce() -> (bool, String)) -> CriterionResult {
    let start = Instant::now();
    let (checks_passed, detail) = body();
    CriterionResult {
        id,
        name,
        checks_passed,
        detail,
        elapsed: start.elapsed(),
        budget: Duration::from_secs(budget_secs),
    }
}

/// Frame `(e₀, e₂ + λe₀)` of the Hodge–Tate pair is unitary.
pub fn unitary_frame(seed: u64) -> CriterionResult {
    timed(1, "hodge-tate unitary frame", 1, || {
        let mut rng = corpus::rng(seed);
        let mut t = Tally::default();
        for _ in 0..20 {
            let lambda = corpus::complex_rational(&mut rng);
            let rec = corpus::hodge_tate_pair(lambda.clone());
            match unitary_gram(&rec, &lambda) {
                Ok(g) => t.check(g == Matrix::identity(2), || format!("lambda = {lambda}: Gram {g:?}")),
                Err(e) => t.error(e),
            }
        }
        t.finish("Gram = I exactly".into())
    })
}

fn unitary_gram(rec: &Record<Gq>, lambda: &Gq) -> Result<Matrix<Gq>> {
    let gc = rec.validate(Exact)?;
    let b = deligne_bigrading(&rec.f, &rec.w, Exact)?;
    let h = mixed_hodge_metric(&b, &rec.pol, &gc, Exact)?;
    let frame = vec![vec![Gq::int(1), Gq::int(0)], vec![lambda.clone(), Gq::int(1)]];
    if graded_frame(&b, &gc, Exact)? != frame {
        return Err(crate::Error::Invalid("bigrading frame differs from (e0, e2 + lambda e0)".into()));
    }
    Ok(h.gram_of(&frame))
}

/// Replaces one basis vector of one piece by itself plus a random vector.
fn perturb(rng: &mut CorpusRng, b: &Bigrading<Gq>) -> Result<Option<Bigrading<Gq>>> {
    let n = b.ambient_dim();
    let keys: Vec<(i32, i32)> = b.pieces().keys().copied().collect();
    let key = keys[rng.gen_range(0..keys.len())];
    let mut basis = b.get(key.0, key.1).basis();
    let idx = rng.gen_range(0..basis.len());
    loop {
        let v: Vec<Gq> = (0..n).map(|_| corpus::small_rational(rng, 2, 3)).collect();
        if v.iter().all(Gq::is_exact_zero) {
            continue;
        }
        basis[idx] = basis[idx].iter().zip(&v).map(|(a, c)| a.add(c)).collect();
        break;
    }
    let mut pieces: BTreeMap<(i32, i32), _> = b.pieces().clone();
    let piece = crate::field::Subspace::span(n, &basis, Exact)?;
    if piece == pieces[&key] {
        return Ok(None);
    }
    pieces.insert(key, piece);
    Ok(Bigrading::from_pieces(n, pieces, Exact).ok())
}

/// Bigrading properties on generated mixed Hodge structures, and rejection
/// of perturbed bigradings.
pub fn bigrading_axioms(seed: u64) -> CriterionResult {
    timed(2, "bigrading axioms", 30, || {
        let mut rng = corpus::rng(seed);
        let mut t = Tally::default();
        let mut rejected = 0;
        let mut max_dim = 0;
        for i in 0..110 {
            let rec = match corpus::mhs_instance(&mut rng, 8) {
                Ok(r) => r,
                Err(e) => {
                    t.error(e);
                    continue;
                }
            };
            max_dim = max_dim.max(rec.dim());
            let (f, w) = if i % 3 == 2 {
                match corpus::dual_filtrations(&rec.f, &rec.w) {
                    Ok(fw) => fw,
                    Err(e) => {
                        t.error(e);
                        continue;
                    }
                }
            } else {
                (rec.f.clone(), rec.w.clone())
            };
            let b = match deligne_bigrading(&f, &w, Exact) {
                Ok(b) => b,
                Err(e) => {
                    t.error(format!("instance {i}: {e}"));
                    continue;
                }
            };
            t.check(b.verify(&f, &w, Exact).is_ok(), || format!("instance {i}: verifier rejects"));
            match perturb(&mut rng, &b) {
                Ok(Some(bad)) => {
                    let ok = bad.verify(&f, &w, Exact).is_err();
                    rejected += ok as usize;
                    t.check(ok, || format!("instance {i}: perturbation accepted"));
                }
                Ok(None) => rejected += 1,
                Err(e) => t.error(e),
            }
        }
        t.finish(format!("110 instances up to dim {max_dim}, {rejected} perturbations rejected"))
    })
}

/// Monodromy filtrations of random nilpotents, and `W(n₋)` of sl₂-modules.
pub fn monodromy_weight(seed: u64) -> CriterionResult {
    timed(3, "monodromy filtration", 30, || {
        let mut rng = corpus::rng(seed);
        let mut t = Tally::default();
        for i in 0..100 {
            let n = rng.gen_range(1..=8);
            let nil = corpus::random_nilpotent(&mut rng, n);
            match monodromy_filtration(&nil, Exact).and_then(|w| check_monodromy(&w, &nil, Exact)) {
                Ok(bad) => t.check(bad.is_none(), || format!("nilpotent {i}: fails at index {bad:?}")),
                Err(e) => t.error(e),
            }
        }
        for i in 0..50 {
            let n = rng.gen_range(1..=8);
            let (nm, y, _) = corpus::random_sl2_representation(&mut rng, n);
            let both = monodromy_filtration(&nm, Exact).and_then(|w| Ok((w, IncFiltration::from_grading(&y, Exact)?)));
            match both {
                Ok((w, e)) => t.check(w.same_as(&e, Exact), || format!("sl2 module {i}: W(n-) differs from E(y)")),
                Err(e) => t.error(e),
            }
        }
        t.finish("100 nilpotents, 50 sl2 modules".into())
    })
}

/// A random grading of `W` commuting with `relY`, obtained from `Y₀` by a
/// unipotent that commutes with `relY` and lowers `Y₀`-weights.
fn random_start(rng: &mut CorpusRng, rel_y: &Endo<Gq>, y0: &Endo<Gq>) -> Result<Endo<Gq>> {
    let frame = joint_frame(rel_y, y0, Exact)?;
    let n = frame.dim();
    let labels = frame.labels();
    let mut x = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if labels[i].0 == labels[j].0 && labels[i].1 < labels[j].1 {
                x[(i, j)] = Gq::int(rng.gen_range(-2..=2));
            }
        }
    }
    let g = Matrix::identity(n).add(&frame.from_frame(&x));
    y0.conjugate_by(&g, Exact)
}

fn admissible_corpus(seed: u64, count: usize) -> Vec<Result<Record<Gq>>> {
    let mut rng = corpus::rng(seed);
    let mut out: Vec<Result<Record<Gq>>> = (0..count).map(|_| corpus::admissible_instance(&mut rng, 8)).collect();
    out.push(Ok(corpus::hodge_tate_pair(Gq::complex(1, 2, 1, 3))));
    out.push(corpus::tensor(&corpus::hodge_tate_pair(Gq::ratio(1, 2)), &corpus::sl2_string(2)));
    out
}

/// Properties of Deligne's grading on the admissible corpus.
pub fn deligne_grading_properties(seed: u64) -> CriterionResult {
    timed(4, "deligne grading", 60, || {
        let mut rng = corpus::rng(seed ^ 0x5eed);
        let mut t = Tally::default();
        let corpus = admissible_corpus(seed, 30);
        let total = corpus.len();
        for (i, rec) in corpus.into_iter().enumerate() {
            let run = || -> Result<()> {
                let rec = rec?;
                let n = rec.nilpotent();
                let a = admissible_pipeline(&rec.f, &rec.w, &n, Exact)?;
                let y = a.y();
                let tr = &a.grading.triple;
                t.check(n.sub(&tr.n_minus).commutator(&tr.n_plus).is_zero(Exact), || {
                    format!("instance {i}: [N - N0, N0+] != 0")
                });
                let y0 = initial_grading(&a.rel_y, &a.w, Exact)?;
                for _ in 0..3 {
                    let start = random_start(&mut rng, &a.rel_y, &y0)?;
                    let other = deligne_grading(&a.rel_y, &n, &a.w, Some(&start), Exact)?;
                    t.check(&other.y == y, || format!("instance {i}: result depends on the initial grading"));
                }
                let n_minus_one = a.grading.components.get(&-1).is_none_or(|c| c.is_zero(Exact));
                t.check(n_minus_one, || format!("instance {i}: N_-1 != 0"));
                t.check(a.w.is_graded_by(y, Exact), || format!("instance {i}: Y does not grade W"));
                t.check(a.rel_w.preserved_by(y, Exact)?, || format!("instance {i}: Y does not preserve relW"));
                t.check(a.f.preserved_by(y, Exact)?, || format!("instance {i}: Y does not preserve F"));
                Ok(())
            };
            if let Err(e) = run() {
                t.error(format!("instance {i}: {e}"));
            }
        }
        t.finish(format!("{total} admissible triples, 3 initial gradings each"))
    })
}

/// `Y(F, W, N) = e^{iδ} Y(F̂, W, N) e^{-iδ}` on non-split instances.
pub fn splitting_equivariance(seed: u64) -> CriterionResult {
    timed(5, "grading vs delta splitting", 30, || {
        let mut rng = corpus::rng(seed);
        let mut t = Tally::default();
        let mut non_split = 0;
        for i in 0..24 {
            let run = |rng: &mut CorpusRng, t: &mut Tally| -> Result<bool> {
                let rec = corpus::non_split_instance(rng, 8)?;
                let n = rec.nilpotent();
                let a = admissible_pipeline(&rec.f, &rec.w, &n, Exact)?;
                let split = delta_split(&rec.f, &a.rel_w, Exact)?;
                let is_non_split = !split.delta.is_zero(Exact);
                let hat = admissible_pipeline(&split.f_hat, &rec.w, &n, Exact)?;
                let g = split.delta.scale(&Gq::i()).nilpotent_exp(Exact)?;
                let moved = hat.y().conjugate_by(&g, Exact)?;
                t.check(&moved == a.y(), || format!("instance {i}: Y(F) != e^(i delta) Y(F^) e^(-i delta)"));
                Ok(is_non_split)
            };
            match run(&mut rng, &mut t) {
                Ok(ns) => non_split += ns as usize,
                Err(e) => t.error(format!("instance {i}: {e}")),
            }
        }
        t.check(non_split >= 20, || format!("only {non_split} non-split instances"));
        t.finish(format!("{non_split} non-split instances"))
    })
}

/// `Gr(relY - Y)` is an infinitesimal isometry of every `S_k`.
pub fn graded_isometry(seed: u64) -> CriterionResult {
    timed(6, "relY - Y graded isometry", 10, || {
        let mut t = Tally::default();
        let corpus = admissible_corpus(seed, 30);
        let total = corpus.len();
        for (i, rec) in corpus.into_iter().enumerate() {
            let run = || -> Result<Option<i32>> {
                let rec = rec?;
                let gc = rec.validate(Exact)?;
                let a = admissible_pipeline(&rec.f, &rec.w, &rec.nilpotent(), Exact)?;
                Ok(isometry_failure(&a.rel_y.sub(a.y()), &rec.pol, &gc, &rec.w, Exact))
            };
            match run() {
                Ok(bad) => t.check(bad.is_none(), || format!("instance {i}: fails on Gr_{bad:?}")),
                Err(e) => t.error(format!("instance {i}: {e}")),
            }
        }
        t.finish(format!("{total} admissible triples"))
    })
}

/// Exact scaling of tangent norms under `y^{αY}`.
pub fn scaling_norms(seed: u64) -> CriterionResult {
    timed(7, "scaling norm identity", 10, || {
        let mut rng = corpus::rng(seed);
        let mut t = Tally::default();
        let mut components = 0;
        for i in 0..20 {
            let run = |rng: &mut CorpusRng, t: &mut Tally| -> Result<usize> {
                let rec = corpus::mhs_instance(rng, 6)?;
                let n = rec.dim();
                let gc = rec.validate(Exact)?;
                let b = deligne_bigrading(&rec.f, &rec.w, Exact)?;
                let h = mixed_hodge_metric(&b, &rec.pol, &gc, Exact)?;
                let y_f = b.grading();
                let grading = rec.w.any_grading(Exact)?;
                let x = Matrix::from_flat(
                    n,
                    n,
                    (0..n * n).map(|_| corpus::small_rational(rng, 2, 2).add(&corpus::small_rational(rng, 1, 1).mul(&Gq::i()))).collect(),
                );
                let parts = ad_eig_split(&y_f, &x, Exact)?;
                let mut count = 0;
                for t_root in [2i64, 3, 5] {
                    let tq = Gq::int(t_root);
                    let yv = tq.mul(&tq);
                    for alpha in [Rational64::new(-1, 2), Rational64::new(1, 2)] {
                        let g = scaling_operator(&grading, alpha, &tq, Exact)?;
                        let f2 = rec.f.transform(&g, Exact)?;
                        let b2 = deligne_bigrading(&f2, &rec.w, Exact)?;
                        let h2 = mixed_hodge_metric(&b2, &rec.pol, &gc, Exact)?;
                        for (&deg, comp) in &parts {
                            let ell = -deg as i64;
                            let lhs = h2.tangent_norm_sq(&comp.conjugate_by(&g, Exact)?);
                            // y^{-2αℓ} with 2α = ±1.
                            let factor = int_pow(&yv, -(alpha * 2).to_integer() * ell);
                            let rhs = factor.mul(&h.tangent_norm_sq(comp));
                            t.check(lhs == rhs, || format!("instance {i}: degree {deg}, y = {yv}, alpha = {alpha}"));
                            count += 1;
                        }
                    }
                }
                Ok(count)
            };
            match run(&mut rng, &mut t) {
                Ok(c) => components += c,
                Err(e) => t.error(format!("instance {i}: {e}")),
            }
        }
        t.finish(format!("20 instances, {components} component identities"))
    })
}

/// Decay scan of the flat Hodge–Tate scenario.
pub fn flat_scan() -> CriterionResult {
    timed(8, "flat hodge-tate decay scan", 5, || {
        let mut t = Tally::default();
        let sc = match scenarios::orbit_scenario("flat-hodge-tate") {
            Ok(sc) => sc,
            Err(e) => {
                t.error(e);
                return t.finish(String::new());
            }
        };
        let scan = match decay_scan(&sc) {
            Ok(s) => s,
            Err(e) => {
                t.error(e);
                return t.finish(String::new());
            }
        };
        let Samples::SAbs(ss) = &sc.samples else {
            t.error("flat scenario must be sampled in |s|");
            return t.finish(String::new());
        };
        let expected: Vec<u32> = (2..=40).collect();
        t.check(ss.len() == expected.len(), || format!("{} samples", ss.len()));
        for (m, s) in expected.iter().zip(ss) {
            t.check(*s == pow2_neg(*m), || {
                format!("sample {s} is not 2^-{m}")
            });
            let row = scan.rows.iter().find(|r| r.s_abs == s.re_f64());
            let exact = row.and_then(|r| r.dist_sq_exact.clone());
            t.check(exact == Some(s.mul(s)), || format!("d^2 at |s| = 2^-{m} is {exact:?}"));
        }
        let (ok, detail) = match scan.fit {
            Some(fit) => {
                let rel = (fit.slope + 2.0 * PI).abs() / (2.0 * PI);
                (
                    rel <= 1e-3 && fit.log_coeff.abs() <= 1e-6,
                    format!("slope {:.12} (rel. err {rel:.2e}), b = {:.2e}", fit.slope, fit.log_coeff),
                )
            }
            None => (false, "no fit".into()),
        };
        t.check(ok, || detail.clone());
        t.check(scan.x_shift_invariant == Some(true), || "x = 1/2 spot check differs".into());
        t.finish(detail)
    })
}

fn pow2_neg(m: u32) -> Gq {
    int_pow(&Gq::int(2), -(m as i64))
}

/// Sharpness scenario: the distance between the two orbits is constant.
pub fn sharpness_scan() -> CriterionResult {
    timed(9, "sharpness L=3 constant rows", 5, || {
        let mut t = Tally::default();
        let run = || -> Result<(Vec<Option<Gq>>, Option<f64>)> {
            let sc = scenarios::orbit_scenario("sharpness-L3")?;
            let scan = decay_scan(&sc)?;
            Ok((scan.rows.iter().map(|r| r.dist_sq_exact.clone()).collect(), scan.fit.map(|f| f.slope)))
        };
        match run() {
            Ok((vals, slope)) => {
                let first = vals.first().cloned().flatten();
                t.check(first.is_some(), || "no rows".into());
                t.check(vals.iter().all(|v| *v == first), || "rows differ".into());
                t.check(slope.is_none_or(|a| a.abs() <= 1e-9), || format!("slope {slope:?}"));
                let d = first.map(|v| v.to_string()).unwrap_or_default();
                t.finish(format!("{} rows, d^2 = {d}", vals.len()))
            }
            Err(e) => {
                t.error(e);
                t.finish(String::new())
            }
        }
    })
}

/// All single-step mutations of `M`: every jump is moved down to the
/// previous step or up to the next, and every nontrivial step gets one of
/// its new basis vectors pushed into the next step.
fn mutations(m: &IncFiltration<Gq>) -> Result<Vec<IncFiltration<Gq>>> {
    let n = m.ambient_dim();
    let (lo, hi) = (m.bottom() - 1, m.top() + 1);
    let dense: BTreeMap<i32, _> = (lo..=hi).map(|j| (j, m.get(j))).collect();
    let mut out = Vec::new();
    for j in lo..hi {
        for replacement in [dense[&(j - 1).max(lo)].clone(), dense[&(j + 1)].clone()] {
            if replacement != dense[&j] {
                let mut steps = dense.clone();
                steps.insert(j, replacement);
                out.push(IncFiltration::from_steps(n, steps, Exact)?);
            }
        }
        if j > lo {
            let below = &dense[&(j - 1)];
            let cur = &dense[&j];
            let above = &dense[&(j + 1)];
            let new = cur.complement_of(below, Exact)?;
            let extra = above.complement_of(cur, Exact)?;
            if let (Some(v), Some(u)) = (new.first(), extra.first()) {
                let mut vs = below.basis();
                vs.extend(new.iter().skip(1).cloned());
                vs.push(v.iter().zip(u).map(|(a, b)| a.add(b)).collect());
                let mut steps = dense.clone();
                steps.insert(j, crate::field::Subspace::span(n, &vs, Exact)?);
                out.push(IncFiltration::from_steps(n, steps, Exact)?);
            }
        }
    }
    Ok(out)
}

/// Soundness of the relative weight filtration verifier and constructor.
pub fn relative_weight_soundness(seed: u64) -> CriterionResult {
    timed(10, "relative weight soundness", 30, || {
        let mut t = Tally::default();
        let mut rng = corpus::rng(seed ^ 0xabc);
        let mut mutated = 0;
        let mut rejected = 0;
        let corpus = admissible_corpus(seed, 30);
        for (i, rec) in corpus.into_iter().enumerate() {
            let run = || -> Result<()> {
                let rec = rec?;
                let n = rec.nilpotent();
                let m = relative_weight_filtration(&n, &rec.w, Exact)?;
                t.check(verify_relative_weight_filtration(&m, &n, &rec.w, Exact)?.ok(), || {
                    format!("instance {i}: verifier rejects relW")
                });
                for bad in mutations(&m)? {
                    mutated += 1;
                    let ok = !verify_relative_weight_filtration(&bad, &n, &rec.w, Exact)?.ok();
                    rejected += ok as usize;
                    t.check(ok, || format!("instance {i}: mutation accepted"));
                }
                Ok(())
            };
            if let Err(e) = run() {
                t.error(format!("instance {i}: {e}"));
            }
        }
        let closing = corpus::hodge_tate_pair(Gq::complex(1, 3, 2, 5));
        match relative_weight_filtration(&closing.nilpotent(), &closing.w, Exact) {
            Ok(m) => t.check(m == closing.w, || "closing example: relW != W".into()),
            Err(e) => t.error(e),
        }
        for i in 0..20 {
            let d = rng.gen_range(1..=8);
            let k = rng.gen_range(-3..=3);
            let nil = corpus::random_nilpotent(&mut rng, d);
            let w = IncFiltration::pure(d, k);
            let got = relative_weight_filtration(&nil, &w, Exact);
            let want = monodromy_filtration(&nil, Exact).map(|m| m.shift(-k));
            match (got, want) {
                (Ok(a), Ok(b)) => t.check(a == b, || format!("pure instance {i}: relW != W(N)[-k]")),
                (Err(e), _) | (_, Err(e)) => t.error(e),
            }
        }
        t.finish(format!("{rejected} of {mutated} mutations rejected"))
    })
}

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Runs every criterion in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        unitary_frame(seed),
        bigrading_axioms(seed),
        monodromy_weight(seed),
        deligne_grading_properties(seed),
        splitting_equivariance(seed),
        graded_isometry(seed),
        scaling_norms(seed),
        flat_scan(),
        sharpness_scan(),
        relative_weight_soundness(seed),
    ]
}
