use std::fmt;

use super::bigrading::deligne_bigrading;
use super::filtration::{DecFiltration, IncFiltration};
use super::metric::mixed_hodge_metric;
use super::polarization::PolarizationSystem;
use crate::field::{Endo, Scalar};

/// Strata of filtrations, from the flag variety down to the classifying space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Membership {
    /// Graded dimensions of `F` do not match the Hodge numbers.
    NotInFlagCheck,
    /// Graded dimensions match, first bilinear relation fails.
    InCheckFW,
    /// First bilinear relation holds; not a graded-polarized MHS.
    InCheckM,
    /// Graded-polarized mixed Hodge structure.
    InM,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::NotInFlagCheck => "NotInFlagCheck",
            Membership::InCheckFW => "InCheckF_W",
            Membership::InCheckM => "InCheckM",
            Membership::InM => "InM",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub stratum: Membership,
    /// Why the next stratum was not reached.
    pub reason: Option<String>,
}

fn report(stratum: Membership, reason: impl Into<String>) -> MembershipReport {
    MembershipReport {
        stratum,
        reason: Some(reason.into()),
    }
}

/// Deepest stratum containing `F` relative to `(W, P)`.
pub fn classify_membership<S: Scalar>(
    f: &DecFiltration<S>,
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    ctx: S::Ctx,
) -> MembershipReport {
    let gc = match pol.validate(w, ctx) {
        Ok(gc) => gc,
        Err(e) => return report(Membership::NotInFlagCheck, format!("polarization data: {e}")),
    };
    let plo = f.bottom().min(pol.hodge_numbers.keys().map(|k| k.0).min().unwrap_or(0));
    let phi = f.top().max(pol.hodge_numbers.keys().map(|k| k.0).max().unwrap_or(0));
    for k in w.jumps() {
        let wk = w.get(k);
        let wk1 = w.get(k - 1);
        for p in plo..=phi + 1 {
            let fp = f.get(p);
            let (Ok(a), Ok(b)) = (fp.intersection(&wk, ctx), fp.intersection(&wk1, ctx)) else {
                return report(Membership::NotInFlagCheck, "dimension mismatch");
            };
            let got = a.dim() - b.dim();
            let want: usize = pol
                .hodge_numbers
                .iter()
                .filter(|(&(r, s), _)| r + s == k && r >= p)
                .map(|(_, h)| *h)
                .sum();
            if got != want {
                return report(
                    Membership::NotInFlagCheck,
                    format!("dim F^{p} Gr^W_{k} = {got}, expected {want}"),
                );
            }
        }
    }
    for k in w.jumps() {
        let wk = w.get(k);
        for p in plo..=phi + 1 {
            let a = f.get(p).intersection(&wk, ctx).expect("same ambient");
            let b = f.get(k - p + 1).intersection(&wk, ctx).expect("same ambient");
            for u in a.basis() {
                for v in b.basis() {
                    if !pol.pair(&gc, k, &u, &v).is_zero(ctx) {
                        return report(
                            Membership::InCheckFW,
                            format!("S_{k}(F^{p} Gr_{k}, F^{} Gr_{k}) is not zero", k - p + 1),
                        );
                    }
                }
            }
        }
    }
    let bigrading = match deligne_bigrading(f, w, ctx) {
        Ok(b) => b,
        Err(e) => return report(Membership::InCheckM, e.to_string()),
    };
    match mixed_hodge_metric(&bigrading, pol, &gc, ctx) {
        Ok(_) => MembershipReport {
            stratum: Membership::InM,
            reason: None,
        },
        Err(e) => report(Membership::InCheckM, e.to_string()),
    }
}

/// Strata of automorphisms relative to `(W, S)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GroupMembership {
    NotInGC,
    /// Preserves `W` and acts on `Gr^W` by complex isometries.
    InGC,
    /// As above with real graded action.
    InG,
    /// Real and in `G_C`.
    InGR,
}

impl fmt::Display for GroupMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupMembership::NotInGC => "NotInG_C",
            GroupMembership::InGC => "InG_C",
            GroupMembership::InG => "InG",
            GroupMembership::InGR => "InG_R",
        })
    }
}

pub fn group_membership<S: Scalar>(
    g: &Endo<S>,
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    ctx: S::Ctx,
) -> GroupMembership {
    let Ok(gc) = pol.validate(w, ctx) else {
        return GroupMembership::NotInGC;
    };
    if !g.is_square() || g.rows() != w.ambient_dim() || g.inverse(ctx).is_err() {
        return GroupMembership::NotInGC;
    }
    if !w.preserved_by(g, ctx).unwrap_or(false) {
        return GroupMembership::NotInGC;
    }
    let mut graded_real = true;
    for k in w.jumps() {
        let a = gc.graded_action(k, g);
        let s = &pol.forms[&k];
        if !a.transpose().mul(s).mul(&a).approx_eq(s, ctx) {
            return GroupMembership::NotInGC;
        }
        graded_real &= a.is_real(ctx);
    }
    if g.is_real(ctx) {
        GroupMembership::InGR
    } else if graded_real {
        GroupMembership::InG
    } else {
        GroupMembership::InGC
    }
}
