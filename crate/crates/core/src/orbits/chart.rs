//! Local charts `u ↦ e^u·F` on the classifying space and the chart-norm
//! surrogate for the distance.
//!
//! In a frame adapted to the bigrading of `(F, W)`, every filtration in the
//! big cell of `F` is `g·F` for a unique `g` that is unipotent and strictly
//! lowers the Hodge degree `p`. Its columns are read off one Hodge degree at
//! a time, from the top down: the column of a frame vector of degree `p` is
//! the unique vector of `G^p` whose coordinates of degree `≥ p` are those of
//! the frame vector. `u = log g` then lies in `⊕_{r<0} End^{r,*}`, and it lies
//! in `q_F` exactly when it is in `Lie(G_C)`.

use crate::error::{Error, Result};
use crate::field::{Endo, Matrix, Scalar};
use crate::mhs::{
    deligne_bigrading, mixed_hodge_metric, Bigrading, DecFiltration, GradedCoords, HodgeMetric, IncFiltration,
    PolarizationSystem,
};
use crate::weights::isometry_failure;

/// `e^{zN}·F`.
pub fn orbit_eval<S: Scalar>(f: &DecFiltration<S>, n: &Endo<S>, z: &S, ctx: S::Ctx) -> Result<DecFiltration<S>> {
    let g = n.scale(z).nilpotent_exp(ctx)?;
    f.transform(&g, ctx)
}

/// Everything about a base point `F` needed to solve charts and measure
/// tangent vectors there.
#[derive(Clone, Debug)]
pub struct Chart<S> {
    pub f: DecFiltration<S>,
    pub w: IncFiltration<S>,
    pub bigrading: Bigrading<S>,
    pub metric: HodgeMetric<S>,
    pol: PolarizationSystem<S>,
    gc: GradedCoords<S>,
}

impl<S: Scalar> Chart<S> {
    pub fn at(f: &DecFiltration<S>, w: &IncFiltration<S>, pol: &PolarizationSystem<S>, ctx: S::Ctx) -> Result<Self> {
        let gc = pol.validate(w, ctx)?;
        Self::with_coords(f, w, pol, &gc, ctx)
    }

    pub fn with_coords(
        f: &DecFiltration<S>,
        w: &IncFiltration<S>,
        pol: &PolarizationSystem<S>,
        gc: &GradedCoords<S>,
        ctx: S::Ctx,
    ) -> Result<Self> {
        let bigrading = deligne_bigrading(f, w, ctx)?;
        let metric = mixed_hodge_metric(&bigrading, pol, gc, ctx)?;
        Ok(Chart {
            f: f.clone(),
            w: w.clone(),
            bigrading,
            metric,
            pol: pol.clone(),
            gc: gc.clone(),
        })
    }

    /// The unique `u ∈ q_F` with `e^u·F = G`.
    pub fn solve(&self, g: &DecFiltration<S>, ctx: S::Ctx) -> Result<Endo<S>> {
        let frame = self.bigrading.frame();
        let n = frame.dim();
        if g.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.ambient_dim(),
            });
        }
        let labels = frame.labels();
        let mut degrees: Vec<i32> = labels.iter().map(|l| l.0).collect();
        degrees.sort_unstable();
        degrees.dedup();
        let mut gf = Matrix::zeros(n, n);
        for &p in degrees.iter().rev() {
            let rows: Vec<usize> = (0..n).filter(|&i| labels[i].0 >= p).collect();
            let gp = g.get(p);
            if gp.dim() != rows.len() {
                return Err(Error::OutOfChart(format!(
                    "G^{p} has dimension {}, expected {}",
                    gp.dim(),
                    rows.len()
                )));
            }
            let coords: Vec<Vec<S>> = gp.basis().iter().map(|v| frame.coords(v)).collect();
            let x = Matrix::from_columns(n, &coords);
            let xj = Matrix::from_rows(rows.iter().map(|&i| x.row(i).to_vec()).collect())?;
            let xj_inv = xj
                .inverse(ctx)
                .map_err(|_| Error::OutOfChart(format!("G^{p} is not transverse to the chart at degree {p}")))?;
            let z = x.mul(&xj_inv);
            for (c, &j) in rows.iter().enumerate() {
                if labels[j].0 == p {
                    for i in 0..n {
                        gf[(i, j)] = z[(i, c)].clone();
                    }
                }
            }
        }
        let uf = gf.nilpotent_log(ctx).map_err(|e| Error::OutOfChart(format!("chart element: {e}")))?;
        let u = frame.from_frame(&uf);
        if let Some(k) = isometry_failure(&u, &self.pol, &self.gc, &self.w, ctx) {
            return Err(Error::OutOfChart(format!(
                "chart element is not in Lie(G_C): fails on Gr^W_{k}"
            )));
        }
        if !self.f.transform(&u.nilpotent_exp(ctx)?, ctx)?.same_as(g, ctx) {
            return Err(Error::OutOfChart("e^u.F does not reproduce G".into()));
        }
        Ok(u)
    }

    /// `‖u‖²_F` for `u = solve(G)`.
    pub fn dist_sq(&self, g: &DecFiltration<S>, ctx: S::Ctx) -> Result<S> {
        let u = self.solve(g, ctx)?;
        Ok(self.metric.tangent_norm_sq(&u))
    }
}

/// The unique `u ∈ q_F` with `e^u·F = G`.
pub fn chart_solve<S: Scalar>(
    f: &DecFiltration<S>,
    g: &DecFiltration<S>,
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    ctx: S::Ctx,
) -> Result<Endo<S>> {
    Chart::at(f, w, pol, ctx)?.solve(g, ctx)
}

/// Squared chart-norm surrogate `d̂(F1, F2)² = ‖u‖²_{F1}`, `e^u·F1 = F2`.
/// This is a computable stand-in for the Riemannian distance, not the
/// distance itself; it is exact for exact inputs.
pub fn dist_surrogate_sq<S: Scalar>(
    f1: &DecFiltration<S>,
    f2: &DecFiltration<S>,
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    ctx: S::Ctx,
) -> Result<S> {
    Chart::at(f1, w, pol, ctx)?.dist_sq(f2, ctx)
}

/// `d̂(F1, F2)` as a float.
pub fn dist_surrogate<S: Scalar>(
    f1: &DecFiltration<S>,
    f2: &DecFiltration<S>,
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    ctx: S::Ctx,
) -> Result<f64> {
    Ok(dist_surrogate_sq(f1, f2, w, pol, ctx)?.re_f64().max(0.0).sqrt())
}
