//! Subalgebras of `End(V)`, stored as subspaces of the `n²`-dimensional
//! space of row-major flattened matrices.

use std::collections::BTreeMap;

use super::bigrading::Bigrading;
use super::filtration::{DecFiltration, IncFiltration};
use super::polarization::{GradedCoords, PolarizationSystem};
use crate::error::{Error, Result};
use crate::field::{Endo, Matrix, Scalar, Subspace};

pub fn flatten<S: Scalar>(a: &Endo<S>) -> Vec<S> {
    a.as_flat().to_vec()
}

pub fn unflatten<S: Scalar>(n: usize, v: &[S]) -> Endo<S> {
    Matrix::from_flat(n, n, v.to_vec())
}

pub fn endo_basis<S: Scalar>(n: usize, sp: &Subspace<S>) -> Vec<Endo<S>> {
    sp.basis().iter().map(|v| unflatten(n, v)).collect()
}

pub fn endo_span<S: Scalar>(n: usize, elems: &[Endo<S>], ctx: S::Ctx) -> Result<Subspace<S>> {
    Subspace::span(n * n, &elems.iter().map(flatten).collect::<Vec<_>>(), ctx)
}

/// Linear conditions on `X` (flattened) expressing `X · from ⊆ to`.
pub fn mapping_constraints<S: Scalar>(from: &Subspace<S>, to: &Subspace<S>, ctx: S::Ctx) -> Vec<Vec<S>> {
    let n = from.ambient_dim();
    let ann = to.annihilator(ctx);
    let mut rows = Vec::new();
    if to.is_full() {
        return rows;
    }
    for v in from.basis() {
        for a in &ann {
            let mut row = vec![S::zero(); n * n];
            for i in 0..n {
                if a[i].is_structural_zero() {
                    continue;
                }
                for j in 0..n {
                    row[i * n + j] = a[i].mul(&v[j]);
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Conditions making `Gr_k(X)` an infinitesimal isometry of `S_k`.
fn isometry_constraints<S: Scalar>(gc: &GradedCoords<S>, pol: &PolarizationSystem<S>, n: usize) -> Vec<Vec<S>> {
    let mut rows = Vec::new();
    for k in gc.weights() {
        let q = &gc.quotient[&k];
        let l = &gc.lifts[&k];
        let s = &pol.forms[&k];
        let d = q.rows();
        // A = Q X L, A_{ca} = Σ_ij Q_ci X_ij L_ja; require (A^T S + S A)_{ab} = 0.
        for a in 0..d {
            for b in a..d {
                let mut row = vec![S::zero(); n * n];
                for c in 0..d {
                    let w1 = &s[(c, b)];
                    let w2 = &s[(a, c)];
                    if w1.is_structural_zero() && w2.is_structural_zero() {
                        continue;
                    }
                    for i in 0..n {
                        if q[(c, i)].is_structural_zero() {
                            continue;
                        }
                        for j in 0..n {
                            let t1 = q[(c, i)].mul(&l[(j, a)]).mul(w1);
                            let t2 = q[(c, i)].mul(&l[(j, b)]).mul(w2);
                            row[i * n + j] = row[i * n + j].add(&t1).add(&t2);
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn solve_constraints<S: Scalar>(n: usize, rows: Vec<Vec<S>>, ctx: S::Ctx) -> Result<Subspace<S>> {
    if rows.is_empty() {
        return Ok(Subspace::full(n * n));
    }
    let m = Matrix::from_rows(rows)?;
    Subspace::span(n * n, &m.kernel(ctx), ctx)
}

/// `Lie(G_C)`: endomorphisms preserving `W` acting on each `Gr^W_k` by
/// infinitesimal isometries of `S_k`.
pub fn isometry_algebra<S: Scalar>(
    w: &IncFiltration<S>,
    pol: &PolarizationSystem<S>,
    gc: &GradedCoords<S>,
    ctx: S::Ctx,
) -> Result<Subspace<S>> {
    let n = w.ambient_dim();
    let mut rows = Vec::new();
    for s in w.steps().values() {
        rows.extend(mapping_constraints(s, s, ctx));
    }
    rows.extend(isometry_constraints(gc, pol, n));
    solve_constraints(n, rows, ctx)
}

/// Elements of `algebra` preserving every `F^p`.
pub fn stabilizer<S: Scalar>(algebra: &Subspace<S>, f: &DecFiltration<S>, ctx: S::Ctx) -> Result<Subspace<S>> {
    let n = f.ambient_dim();
    let mut rows = algebra.annihilator(ctx);
    for s in f.steps().values() {
        rows.extend(mapping_constraints(s, s, ctx));
    }
    solve_constraints(n, rows, ctx)
}

/// Bidegree components of `X` relative to a bigrading: `X_{r,s}` maps
/// `I^{p,q}` into `I^{p+r,q+s}`.
pub fn bidegree_split<S: Scalar>(b: &Bigrading<S>, x: &Endo<S>, ctx: S::Ctx) -> BTreeMap<(i32, i32), Endo<S>> {
    b.frame()
        .split_by(x, |(p1, q1), (p0, q0)| (p1 - p0, q1 - q0))
        .into_iter()
        .filter(|(_, m)| !m.is_zero(ctx))
        .collect()
}

/// Part of `X` with bidegrees satisfying `keep`.
pub fn bidegree_part<S: Scalar>(b: &Bigrading<S>, x: &Endo<S>, keep: impl Fn(i32, i32) -> bool) -> Endo<S> {
    b.frame().block_part(x, |(p1, q1), (p0, q0)| keep(p1 - p0, q1 - q0))
}

/// `X ∈ Λ^{-1,-1}` as an endomorphism of `V`: all bidegrees `(r, s)` have `r, s ≤ -1`.
pub fn in_lambda<S: Scalar>(b: &Bigrading<S>, x: &Endo<S>, ctx: S::Ctx) -> bool {
    bidegree_split(b, x, ctx).keys().all(|&(r, s)| r <= -1 && s <= -1)
}

/// Decomposition of a subalgebra of `End(V)` by the bigrading of `(F, W)`.
#[derive(Clone, Debug)]
pub struct LieBigrading<S> {
    n: usize,
    total: Subspace<S>,
    pieces: BTreeMap<(i32, i32), Subspace<S>>,
}

impl<S: Scalar> LieBigrading<S> {
    /// Splits `algebra` into `g^{r,s}`; fails if the algebra is not graded.
    pub fn new(b: &Bigrading<S>, algebra: &Subspace<S>, ctx: S::Ctx) -> Result<Self> {
        let n = b.ambient_dim();
        let mut parts: BTreeMap<(i32, i32), Vec<Vec<S>>> = BTreeMap::new();
        for x in endo_basis(n, algebra) {
            for (rs, comp) in bidegree_split(b, &x, ctx) {
                let v = flatten(&comp);
                if !algebra.contains(&v, ctx) {
                    return Err(Error::LieBigrading(format!(
                        "component of bidegree {rs:?} leaves the algebra"
                    )));
                }
                parts.entry(rs).or_default().push(v);
            }
        }
        let pieces = parts
            .into_iter()
            .map(|(rs, vs)| Ok((rs, Subspace::span(n * n, &vs, ctx)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let sum: usize = pieces.values().map(Subspace::dim).sum();
        if sum != algebra.dim() {
            return Err(Error::LieBigrading(format!(
                "pieces have total dimension {sum}, algebra has {}",
                algebra.dim()
            )));
        }
        Ok(LieBigrading {
            n,
            total: algebra.clone(),
            pieces,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Subspace<S> {
        &self.total
    }

    pub fn pieces(&self) -> &BTreeMap<(i32, i32), Subspace<S>> {
        &self.pieces
    }

    pub fn get(&self, r: i32, s: i32) -> Subspace<S> {
        self.pieces
            .get(&(r, s))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(self.n * self.n))
    }

    pub fn sum_where(&self, pred: impl Fn(i32, i32) -> bool, ctx: S::Ctx) -> Subspace<S> {
        Subspace::sum_all(
            self.n * self.n,
            self.pieces.iter().filter(|((r, s), _)| pred(*r, *s)).map(|(_, sp)| sp),
            ctx,
        )
        .expect("pieces share the ambient space")
    }

    /// `q_F = ⊕_{r<0, r+s≤0} g^{r,s}`.
    pub fn chart_complement(&self, ctx: S::Ctx) -> Subspace<S> {
        self.sum_where(|r, s| r < 0 && r + s <= 0, ctx)
    }

    /// `Λ^{-1,-1} = ⊕_{r,s≤-1} g^{r,s}`.
    pub fn lambda(&self, ctx: S::Ctx) -> Subspace<S> {
        self.sum_where(|r, s| r <= -1 && s <= -1, ctx)
    }

    /// `℘_a = ⊕_s g^{a,s}`.
    pub fn column(&self, a: i32, ctx: S::Ctx) -> Subspace<S> {
        self.sum_where(|r, _| r == a, ctx)
    }
}

/// Lie algebra data attached to a graded-polarized MHS.
#[derive(Clone, Debug)]
pub struct ChartAlgebra<S> {
    pub bigrading: LieBigrading<S>,
    /// `q_F`.
    pub complement: Subspace<S>,
    /// `Lie(G_C^F)`.
    pub stabilizer: Subspace<S>,
}

/// Computes `Lie(G_C)`, its bigrading, `q_F` and `Lie(G_C^F)`, and checks
/// that the latter two are complementary and `q_F` is nilpotent.
pub fn chart_algebra<S: Scalar>(
    f: &DecFiltration<S>,
    w: &IncFiltration<S>,
    b: &Bigrading<S>,
    pol: &PolarizationSystem<S>,
    gc: &GradedCoords<S>,
    ctx: S::Ctx,
) -> Result<ChartAlgebra<S>> {
    let n = w.ambient_dim();
    let g = isometry_algebra(w, pol, gc, ctx)?;
    let lb = LieBigrading::new(b, &g, ctx)?;
    let q = lb.chart_complement(ctx);
    let stab = stabilizer(&g, f, ctx)?;
    check_complement(&g, &q, &stab, ctx)?;
    for x in endo_basis(n, &q) {
        if !x.is_nilpotent(ctx) {
            return Err(Error::LieBigrading("q_F contains a non-nilpotent element".into()));
        }
    }
    Ok(ChartAlgebra {
        bigrading: lb,
        complement: q,
        stabilizer: stab,
    })
}

/// `a ⊕ b = g` as a dimension identity with zero intersection.
pub fn check_complement<S: Scalar>(g: &Subspace<S>, a: &Subspace<S>, b: &Subspace<S>, ctx: S::Ctx) -> Result<()> {
    if a.dim() + b.dim() != g.dim() {
        return Err(Error::LieBigrading(format!(
            "dimensions {} + {} do not add up to {}",
            a.dim(),
            b.dim(),
            g.dim()
        )));
    }
    if !a.intersection(b, ctx)?.is_zero() {
        return Err(Error::LieBigrading("complement intersects the stabilizer".into()));
    }
    if !g.contains_space(a, ctx) || !g.contains_space(b, ctx) {
        return Err(Error::LieBigrading("summand not contained in the algebra".into()));
    }
    Ok(())
}
