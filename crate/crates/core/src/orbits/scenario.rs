use super::poly::MatrixPoly;
use crate::error::{Error, Result};
use crate::field::{Endo, Gq, Matrix, Scalar, Subspace};
use crate::mhs::lie::{endo_basis, flatten, isometry_algebra, stabilizer};
use crate::mhs::{ChartAlgebra, DecFiltration, GradedCoords, LieBigrading};
use crate::record::Record;
use crate::weights::{admissible_pipeline, AdmissibleTriple};

/// Sample points of a scan.
#[derive(Clone, Debug, PartialEq)]
pub enum Samples<S> {
    /// Exact values of `|s|`; `y = -log|s| / 2π`.
    SAbs(Vec<S>),
    /// Values of `y = Im z`; `|s| = e^{-2πy}`.
    Y(Vec<S>),
}

impl<S> Samples<S> {
    pub fn len(&self) -> usize {
        match self {
            Samples::SAbs(v) | Samples::Y(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A one-variable degeneration `F(z) = e^{zN} e^{Γ(s)}·F_∞`, `s = e^{2πiz}`.
///
/// With `sigma` set, scans compare against `e^{zN} e^{-σ}·F_∞` instead of the
/// nilpotent orbit of `F_∞` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitScenario<S> {
    pub base: Record<S>,
    /// `gamma[k]` is the coefficient of `s^k`; `gamma[0]` must vanish.
    pub gamma: Vec<Endo<S>>,
    pub sigma: Option<Endo<S>>,
    pub samples: Samples<S>,
}

/// Data derived from the limit `(F_∞, relW)` of a scenario.
#[derive(Clone, Debug)]
pub struct LimitData<S> {
    pub triple: AdmissibleTriple<S>,
    pub gc: GradedCoords<S>,
    /// `Lie(G_C)` split by the bigrading of `(F_∞, relW)`, with
    /// `q_∞ = ⊕_{a<0} ℘_a` and `Lie(G_C^{F_∞})`.
    pub chart: ChartAlgebra<S>,
}

impl<S: Scalar> OrbitScenario<S> {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn gamma_poly(&self) -> Result<MatrixPoly<S>> {
        MatrixPoly::new(self.dim(), self.gamma.clone())
    }

    /// The linear coefficient of `Γ`.
    pub fn linearization(&self) -> Endo<S> {
        self.gamma.get(1).cloned().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    /// Filtration the scan compares against before applying `e^{zN}`.
    pub fn reference(&self, ctx: S::Ctx) -> Result<DecFiltration<S>> {
        match &self.sigma {
            Some(s) => self.base.f.transform(&s.neg().nilpotent_exp(ctx)?, ctx),
            None => Ok(self.base.f.clone()),
        }
    }

    /// Runs the admissibility pipeline on `(F_∞, W, N)` and checks that `Γ`
    /// takes values in `q_∞` and that `σ ∈ ker(ad N) ∩ Λ^{-1,-1}`.
    pub fn validate(&self, ctx: S::Ctx) -> Result<LimitData<S>> {
        let n = self.dim();
        let gc = self.base.validate(ctx)?;
        let nil = self.base.nilpotent();
        let triple = admissible_pipeline(&self.base.f, &self.base.w, &nil, ctx)?;
        let algebra = isometry_algebra(&self.base.w, &self.base.pol, &gc, ctx)?;
        let lb = LieBigrading::new(&triple.bigrading, &algebra, ctx)?;
        let q = lb.sum_where(|r, _| r < 0, ctx);
        let stab = stabilizer(&algebra, &self.base.f, ctx)?;
        crate::mhs::lie::check_complement(&algebra, &q, &stab, ctx)?;
        match self.gamma.first() {
            Some(g0) if !g0.is_zero(ctx) => return Err(Error::Invalid("gamma[0] must be zero".into())),
            _ => {}
        }
        for (k, c) in self.gamma.iter().enumerate() {
            if c.rows() != n || c.cols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.rows(),
                });
            }
            if !q.contains(&flatten(c), ctx) {
                return Err(Error::Invalid(format!("gamma[{k}] is not in q_inf")));
            }
        }
        if let Some(s) = &self.sigma {
            if !s.commutator(&nil).is_zero(ctx) {
                return Err(Error::Invalid("sigma does not commute with N".into()));
            }
            if !lb.lambda(ctx).contains(&flatten(s), ctx) {
                return Err(Error::Invalid("sigma is not in Lambda^{-1,-1}".into()));
            }
        }
        if self.samples.is_empty() {
            return Err(Error::Invalid("no samples".into()));
        }
        Ok(LimitData {
            triple,
            gc,
            chart: ChartAlgebra {
                bigrading: lb,
                complement: q,
                stabilizer: stab,
            },
        })
    }
}

impl<S: Scalar> LimitData<S> {
    /// `q_∞` as a list of endomorphisms.
    pub fn q_basis(&self) -> Vec<Endo<S>> {
        endo_basis(self.triple.n.rows(), &self.chart.complement)
    }

    pub fn q(&self) -> &Subspace<S> {
        &self.chart.complement
    }
}

impl OrbitScenario<Gq> {
    /// Positivity and range checks on exact samples.
    pub fn check_samples(&self) -> Result<()> {
        let zero = num_rational::BigRational::from_integer(0.into());
        let one = num_rational::BigRational::from_integer(1.into());
        match &self.samples {
            Samples::SAbs(v) => {
                for s in v {
                    if !s.is_exact_real() || s.re <= zero || s.re >= one {
                        return Err(Error::Invalid(format!("|s| sample {s} must be real in (0, 1)")));
                    }
                }
            }
            Samples::Y(v) => {
                for y in v {
                    if !y.is_exact_real() || y.re <= zero {
                        return Err(Error::Invalid(format!("y sample {y} must be real and positive")));
                    }
                }
            }
        }
        Ok(())
    }
}
