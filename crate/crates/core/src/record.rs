use crate::error::{Error, Result};
use crate::field::{Endo, Matrix, Scalar};
use crate::mhs::{DecFiltration, GradedCoords, IncFiltration, PolarizationSystem};

/// `(V, W, F, S)` together with an optional nilpotent `N`: the unit of input
/// and output for every command.
#[derive(Clone, Debug, PartialEq)]
pub struct Record<S> {
    pub f: DecFiltration<S>,
    pub w: IncFiltration<S>,
    pub pol: PolarizationSystem<S>,
    pub n: Option<Endo<S>>,
}

impl<S: Scalar> Record<S> {
    pub fn dim(&self) -> usize {
        self.w.ambient_dim()
    }

    /// `N`, or zero when absent.
    pub fn nilpotent(&self) -> Endo<S> {
        self.n.clone().unwrap_or_else(|| Matrix::zeros(self.dim(), self.dim()))
    }

    /// Dimension checks and the graded coordinates of the polarization.
    pub fn validate(&self, ctx: S::Ctx) -> Result<GradedCoords<S>> {
        let d = self.dim();
        if self.f.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: self.f.ambient_dim(),
            });
        }
        if let Some(n) = &self.n {
            if !n.is_square() || n.rows() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: n.rows(),
                });
            }
        }
        self.pol.validate(&self.w, ctx)
    }

    /// Push-forward along an invertible `g`.
    pub fn transform(&self, g: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        Ok(Record {
            f: self.f.transform(g, ctx)?,
            w: self.w.transform(g, ctx)?,
            pol: self.pol.transform(g),
            n: match &self.n {
                Some(n) => Some(n.conjugate_by(g, ctx)?),
                None => None,
            },
        })
    }
}
