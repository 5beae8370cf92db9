use super::deligne::{deligne_grading, DeligneGrading};
use super::relative::relative_weight_filtration;
use crate::error::{AdmissibilityClause, Error, Result};
use crate::field::{Endo, Scalar};
use crate::mhs::{deligne_bigrading, Bigrading, DecFiltration, IncFiltration};

/// An admissible `(F, W, N)` with everything derived from it.
#[derive(Clone, Debug)]
pub struct AdmissibleTriple<S> {
    pub f: DecFiltration<S>,
    pub w: IncFiltration<S>,
    pub n: Endo<S>,
    pub rel_w: IncFiltration<S>,
    /// Bigrading of `(F, relW)`.
    pub bigrading: Bigrading<S>,
    pub rel_y: Endo<S>,
    pub grading: DeligneGrading<S>,
}

impl<S: Scalar> AdmissibleTriple<S> {
    pub fn y(&self) -> &Endo<S> {
        &self.grading.y
    }
}

fn reject<T>(clause: AdmissibilityClause) -> Result<T> {
    Err(Error::NotAdmissible(clause))
}

/// Decides admissibility of `(F, W, N)` and derives `relW`, `relY` and `Y`.
pub fn admissible_pipeline<S: Scalar>(
    f: &DecFiltration<S>,
    w: &IncFiltration<S>,
    n: &Endo<S>,
    ctx: S::Ctx,
) -> Result<AdmissibleTriple<S>> {
    let dim = w.ambient_dim();
    if f.ambient_dim() != dim || n.rows() != dim || !n.is_square() {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: n.rows(),
        });
    }
    if !n.is_nilpotent(ctx) {
        return reject(AdmissibilityClause::NotNilpotent);
    }
    for k in w.jumps() {
        if !w.get(k).contains_space(&w.get(k).image(n, ctx)?, ctx) {
            return reject(AdmissibilityClause::DoesNotPreserveWeight { k });
        }
    }
    let rel_w = match relative_weight_filtration(n, w, ctx) {
        Ok(m) => m,
        Err(Error::RelativeWeightDoesNotExist { k, primitive_weight }) => {
            return reject(AdmissibilityClause::RelativeWeightMissing { k, primitive_weight })
        }
        Err(e) => return reject(AdmissibilityClause::RelativeWeightUnresolved(e.to_string())),
    };
    if !w.is_real(ctx) {
        return reject(AdmissibilityClause::NotMixedOnStep {
            k: w.bottom(),
            reason: "W is not defined over the reals".into(),
        });
    }
    for k in w.jumps() {
        let basis = w.get(k).basis();
        let fk = f.restrict(&basis, ctx)?;
        let mk = rel_w.restrict(&basis, ctx)?;
        if let Err(e) = deligne_bigrading(&fk, &mk, ctx) {
            return reject(AdmissibilityClause::NotMixedOnStep {
                k,
                reason: e.to_string(),
            });
        }
    }
    let bigrading = deligne_bigrading(f, &rel_w, ctx).map_err(|e| {
        Error::NotAdmissible(AdmissibilityClause::NotMixedOnStep {
            k: w.top(),
            reason: e.to_string(),
        })
    })?;
    if let Some((p, q)) = bigrading.maps_with_bidegree(n, -1, -1, ctx)? {
        return reject(AdmissibilityClause::NotMinusOneMorphism { p, q });
    }
    let rel_y = bigrading.grading();
    if !w.preserved_by(&rel_y, ctx)? {
        return reject(AdmissibilityClause::GradingBreaksWeight);
    }
    let grading = deligne_grading(&rel_y, n, w, None, ctx)?;
    Ok(AdmissibleTriple {
        f: f.clone(),
        w: w.clone(),
        n: n.clone(),
        rel_w,
        bigrading,
        rel_y,
        grading,
    })
}
