use std::collections::BTreeSet;
use std::fmt;

use super::scenario::{LimitData, OrbitScenario, Samples};
use crate::error::Result;
use crate::field::{Scalar, Subspace};
use crate::mhs::lie::{bidegree_part, bidegree_split};

/// First violated horizontality condition.
#[derive(Clone, Debug, PartialEq)]
pub enum HorizontalityWitness {
    /// The linear term of `Γ` has a component of bidegree `(r, s)` with `r ≠ -1`.
    Linearization { r: i32, s: i32 },
    /// `d/ds (e^{Γ(s)} F^p) ⊄ F^{p-1}(s)` at the sample `s`.
    Derivative { p: i32, s: String },
    /// `N F^p_∞ ⊄ F^{p-1}_∞`.
    Monodromy { p: i32 },
}

impl fmt::Display for HorizontalityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HorizontalityWitness::Linearization { r, s } => {
                write!(f, "linear term of gamma has a component of bidegree ({r},{s})")
            }
            HorizontalityWitness::Derivative { p, s } => {
                write!(f, "derivative of F^{p}(s) leaves F^{}(s) at s = {s}", p - 1)
            }
            HorizontalityWitness::Monodromy { p } => write!(f, "N F^{p} is not contained in F^{}", p - 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HorizontalityReport {
    pub horizontal: bool,
    pub witness: Option<HorizontalityWitness>,
}

/// Points at which the derivative condition is tested: the exact `|s|`
/// samples, or a few fixed rationals when the scenario is sampled in `y`.
fn test_points<S: Scalar>(sc: &OrbitScenario<S>) -> Vec<S> {
    match &sc.samples {
        Samples::SAbs(v) => v.iter().take(6).cloned().collect(),
        Samples::Y(_) => vec![S::from_ratio(1, 2), S::from_ratio(1, 3), S::from_ratio(-2, 5)],
    }
}

pub fn horizontality_check<S: Scalar>(sc: &OrbitScenario<S>, ctx: S::Ctx) -> Result<HorizontalityReport> {
    let data = sc.validate(ctx)?;
    horizontality_with(sc, &data, ctx)
}

pub fn horizontality_with<S: Scalar>(
    sc: &OrbitScenario<S>,
    data: &LimitData<S>,
    ctx: S::Ctx,
) -> Result<HorizontalityReport> {
    let fail = |w| {
        Ok(HorizontalityReport {
            horizontal: false,
            witness: Some(w),
        })
    };
    let b = &data.triple.bigrading;
    for (r, s) in bidegree_split(b, &sc.linearization(), ctx).into_keys() {
        if r != -1 {
            return fail(HorizontalityWitness::Linearization { r, s });
        }
    }
    let f = &sc.base.f;
    let n = sc.base.nilpotent();
    for p in f.jumps() {
        if !f.get(p - 1).contains_space(&f.get(p).image(&n, ctx)?, ctx) {
            return fail(HorizontalityWitness::Monodromy { p });
        }
    }
    let e = sc.gamma_poly()?.exp(ctx)?;
    let de = e.derivative();
    for s in test_points(sc) {
        let es = e.eval(&s);
        let ds = de.eval(&s);
        for p in f.jumps() {
            let below = f.get(p - 1).image(&es, ctx)?;
            let moved = f.get(p).image(&ds, ctx)?;
            if !below.contains_space(&moved, ctx) {
                return fail(HorizontalityWitness::Derivative {
                    p,
                    s: format!("{s:?}"),
                });
            }
        }
    }
    Ok(HorizontalityReport {
        horizontal: true,
        witness: None,
    })
}

/// Bigrading cells hit by the first-order terms of the connection on a
/// section of `I^{p,q}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionReport {
    pub p: i32,
    pub q: i32,
    /// Cells hit by `dL|₀ σ(0)`.
    pub holomorphic_cells: Vec<(i32, i32)>,
    /// Cells hit by `dπ(conj L)|₀ σ(0)`.
    pub antiholomorphic_cells: Vec<(i32, i32)>,
    /// Cells outside `I^{p,q} + Σ_ℓ I^{p-1,q+1-ℓ}`, resp. `I^{p+1,q-1} + Σ_ℓ I^{p,q-ℓ}`.
    pub violations: Vec<(&'static str, (i32, i32))>,
}

impl ConnectionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Splits `L` and the projection of `conj L` onto `Lie(G_C^{F_∞})` along
/// `q_∞`, applies both to a basis of `I^{p,q}` and records which cells of
/// the bigrading of the limit the results meet.
pub fn connection_shape<S: Scalar>(
    sc: &OrbitScenario<S>,
    data: &LimitData<S>,
    p: i32,
    q: i32,
    ctx: S::Ctx,
) -> Result<ConnectionReport> {
    let b = &data.triple.bigrading;
    let frame = b.frame();
    let l = sc.linearization();
    let pi_bar = bidegree_part(b, &l.conj(), |r, _| r >= 0);
    let cells = |t: &crate::field::Endo<S>, piece: &Subspace<S>| -> BTreeSet<(i32, i32)> {
        let mut out = BTreeSet::new();
        for v in piece.basis() {
            let c = frame.coords(&t.apply(&v));
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero(ctx) {
                    out.insert(frame.labels()[i]);
                }
            }
        }
        out
    };
    let piece = b.get(p, q);
    let hol = cells(&l, &piece);
    let anti = cells(&pi_bar, &piece);
    let mut violations = Vec::new();
    for &(a, c) in &hol {
        if !((a, c) == (p, q) || (a == p - 1 && c <= q + 1)) {
            violations.push(("(1,0)", (a, c)));
        }
    }
    for &(a, c) in &anti {
        if !((a, c) == (p + 1, q - 1) || (a == p && c <= q)) {
            violations.push(("(0,1)", (a, c)));
        }
    }
    Ok(ConnectionReport {
        p,
        q,
        holomorphic_cells: hol.into_iter().collect(),
        antiholomorphic_cells: anti.into_iter().collect(),
        violations,
    })
}
