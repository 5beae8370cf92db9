//! Deligne's canonical grading `Y = Y(relY, N, W)`.
//!
//! Among gradings of `W` commuting with `relY`, `Y` is singled out by
//! `[N - N₀, N₀⁺] = 0`, where `N₀` is the `ad Y`-degree-zero part of `N` and
//! `(N₀, relY - Y, N₀⁺)` is the associated sl₂-triple. Starting from any
//! such grading, step `k` conjugates `Y` by `1 + γ` with `γ` of `ad Y`-degree
//! `-k` commuting with `relY`, chosen so that
//! `[N_{-k} + [N₀, γ], N₀⁺] = 0`. Lower degrees are untouched by later steps.

use std::collections::BTreeMap;

use super::relative::verify_relative_weight_filtration;
use super::sl2::{sl2_complete, Sl2Triple};
use crate::error::{Error, Result};
use crate::field::{integer_eigenspaces, Endo, Frame, Matrix, Scalar, Subspace};
use crate::mhs::IncFiltration;

#[derive(Clone, Debug)]
pub struct DeligneGrading<S> {
    pub y: Endo<S>,
    pub triple: Sl2Triple<S>,
    /// `ad Y`-components of `N`.
    pub components: BTreeMap<i32, Endo<S>>,
}

/// Frame of joint eigenvectors of commuting gradings `relY` and `Y`,
/// labelled `(relY-eigenvalue, Y-eigenvalue)`.
pub fn joint_frame<S: Scalar>(rel_y: &Endo<S>, y: &Endo<S>, ctx: S::Ctx) -> Result<Frame<S, (i32, i32)>> {
    let n = y.rows();
    let a = integer_eigenspaces(rel_y, ctx)?;
    let b = integer_eigenspaces(y, ctx)?;
    let mut pieces = Vec::new();
    for (&i, ea) in &a {
        for (&j, eb) in &b {
            let s = ea.intersection(eb, ctx)?;
            if !s.is_zero() {
                pieces.push(((i, j), s));
            }
        }
    }
    Frame::from_pieces(n, pieces.iter().map(|(l, s)| (*l, s)), ctx).map_err(|_| Error::Precondition("relY and Y do not commute".into()))
}

/// A grading of `W` commuting with `relY`: `relY` preserves `W`, so each
/// `W_k` splits along the eigenspaces of `relY`; within each eigenspace a
/// complement of `W_{k-1}` in `W_k` is taken.
pub fn initial_grading<S: Scalar>(rel_y: &Endo<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<Endo<S>> {
    let n = w.ambient_dim();
    let eig = integer_eigenspaces(rel_y, ctx)?;
    let mut pieces: Vec<(i32, Subspace<S>)> = Vec::new();
    for e in eig.values() {
        let mut prev = Subspace::zero(n);
        for k in w.jumps() {
            let cur = w.get(k).intersection(e, ctx)?;
            let comp = cur.complement_of(&prev, ctx)?;
            if !comp.is_empty() {
                pieces.push((k, Subspace::span(n, &comp, ctx)?));
            }
            prev = cur;
        }
    }
    let frame = Frame::from_pieces(n, pieces.iter().map(|(k, s)| (*k, s)), ctx)
        .map_err(|_| Error::Precondition("relY does not preserve W".into()))?;
    Ok(frame.diagonal_operator(|k| S::from_i64(k as i64)))
}

/// Checks the preconditions on `(relY, N, W)`.
pub fn check_preconditions<S: Scalar>(rel_y: &Endo<S>, n: &Endo<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<()> {
    if !rel_y.commutator(n).approx_eq(&n.scale(&S::from_i64(-2)), ctx) {
        return Err(Error::Precondition("[relY, N] != -2N".into()));
    }
    if !w.preserved_by(rel_y, ctx)? {
        return Err(Error::Precondition("relY does not preserve W".into()));
    }
    let rel_w = IncFiltration::from_grading(rel_y, ctx)
        .map_err(|_| Error::Precondition("relY is not a grading".into()))?;
    if !verify_relative_weight_filtration(&rel_w, n, w, ctx)?.ok() {
        return Err(Error::Precondition("relY does not grade relW(N, W)".into()));
    }
    Ok(())
}

/// Deligne's grading; `start` optionally supplies the initial grading (any
/// grading of `W` commuting with `relY`), which does not affect the result.
pub fn deligne_grading<S: Scalar>(
    rel_y: &Endo<S>,
    n: &Endo<S>,
    w: &IncFiltration<S>,
    start: Option<&Endo<S>>,
    ctx: S::Ctx,
) -> Result<DeligneGrading<S>> {
    check_preconditions(rel_y, n, w, ctx)?;
    let dim = w.ambient_dim();
    let mut y = match start {
        Some(y0) => {
            if !w.is_graded_by(y0, ctx) || !y0.commutator(rel_y).is_zero(ctx) {
                return Err(Error::Precondition(
                    "initial grading must grade W and commute with relY".into(),
                ));
            }
            y0.clone()
        }
        None => initial_grading(rel_y, w, ctx)?,
    };
    let depth = w.top() - w.bottom();
    for k in 1..=depth {
        let frame = joint_frame(rel_y, &y, ctx)?;
        let (n0, _, n0p) = triple_parts(&frame, rel_y, &y, n, ctx)?;
        let nk = frame.block_part(n, |(_, a), (_, b)| a - b == -k);
        let target = nk.commutator(&n0p);
        if target.is_zero(ctx) {
            continue;
        }
        // Unknown γ: frame entries (i, j) with equal relY-labels and Y-labels differing by -k.
        let labels = frame.labels().to_vec();
        let slots: Vec<(usize, usize)> = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| labels[i].0 == labels[j].0 && labels[i].1 - labels[j].1 == -k)
            .collect();
        let n0f = frame.to_frame(&n0);
        let n0pf = frame.to_frame(&n0p);
        let mut sys = Matrix::zeros(dim * dim, slots.len());
        for (u, &(i, j)) in slots.iter().enumerate() {
            let mut e = Matrix::zeros(dim, dim);
            e[(i, j)] = S::one();
            let col = n0f.commutator(&e).commutator(&n0pf);
            for (r, x) in col.as_flat().iter().enumerate() {
                sys[(r, u)] = x.clone();
            }
        }
        let rhs: Vec<S> = frame.to_frame(&target).as_flat().iter().map(S::neg).collect();
        let sol = sys.solve(&rhs, ctx).ok_or_else(|| {
            Error::NoSolution(format!("no correction of ad Y-degree -{k} kills [N_-{k}, N0+]"))
        })?;
        let mut gf = Matrix::zeros(dim, dim);
        for (u, &(i, j)) in slots.iter().enumerate() {
            gf[(i, j)] = sol[u].clone();
        }
        let g = Matrix::identity(dim).add(&frame.from_frame(&gf));
        y = y.conjugate_by(&g, ctx)?;
    }
    let frame = joint_frame(rel_y, &y, ctx)?;
    let (n0, h, n0p) = triple_parts(&frame, rel_y, &y, n, ctx)?;
    if !n.sub(&n0).commutator(&n0p).is_zero(ctx) {
        return Err(Error::ConstructionFailed("[N - N0, N0+] != 0 after all corrections".into()));
    }
    if !w.is_graded_by(&y, ctx) {
        return Err(Error::ConstructionFailed("result does not grade W".into()));
    }
    let components = frame
        .split_by(n, |(_, a), (_, b)| a - b)
        .into_iter()
        .filter(|(_, m)| !m.is_zero(ctx))
        .collect();
    Ok(DeligneGrading {
        y,
        triple: Sl2Triple {
            n_minus: n0,
            y: h,
            n_plus: n0p,
        },
        components,
    })
}

fn triple_parts<S: Scalar>(
    frame: &Frame<S, (i32, i32)>,
    rel_y: &Endo<S>,
    y: &Endo<S>,
    n: &Endo<S>,
    ctx: S::Ctx,
) -> Result<(Endo<S>, Endo<S>, Endo<S>)> {
    let n0 = frame.block_part(n, |(_, a), (_, b)| a == b);
    let h = rel_y.sub(y);
    let t = sl2_complete(&n0, &h, ctx)?;
    Ok((n0, h, t.n_plus))
}

/// `(ad N₀)^{k-1} N_{-k} = 0` and `(ad N₀)^{k-2} N_{-k} ≠ 0` for every
/// nonzero component with `k ≥ 2`, and `N_{-1} = 0`. Returns the first
/// failing `k`.
pub fn check_component_heights<S: Scalar>(d: &DeligneGrading<S>, ctx: S::Ctx) -> Option<i32> {
    let n0 = &d.triple.n_minus;
    for (&deg, comp) in &d.components {
        let k = -deg;
        if k <= 0 {
            continue;
        }
        if k == 1 {
            return Some(1);
        }
        let mut x = comp.clone();
        for _ in 0..k - 2 {
            x = n0.commutator(&x);
        }
        if x.is_zero(ctx) || !n0.commutator(&x).is_zero(ctx) {
            return Some(k);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    fn e(n: usize, i: usize) -> Vec<Gq> {
        (0..n).map(|j| Gq::int((i == j) as i64)).collect()
    }

    #[test]
    fn closing_example_keeps_rel_y() {
        let w = IncFiltration::from_generators(2, &BTreeMap::from([(0, vec![e(2, 0)]), (2, vec![e(2, 1)])]), Exact)
            .unwrap();
        let n = Matrix::<Gq>::unit(2, 0, 1);
        let rel_y = Matrix::from_i64_rows(&[&[0, 0], &[0, 2]]);
        let d = deligne_grading(&rel_y, &n, &w, None, Exact).unwrap();
        assert_eq!(d.y, rel_y);
        assert!(d.triple.n_minus.is_zero(Exact));
        assert_eq!(check_component_heights(&d, Exact), None);
    }

    #[test]
    fn zero_map_keeps_rel_y() {
        let w = IncFiltration::from_generators(3, &BTreeMap::from([(1, vec![e(3, 0)]), (3, vec![e(3, 1), e(3, 2)])]), Exact)
            .unwrap();
        let rel_y = Matrix::from_i64_rows(&[&[1, 0, 0], &[0, 3, 0], &[0, 0, 3]]);
        let d = deligne_grading(&rel_y, &Matrix::zeros(3, 3), &w, None, Exact).unwrap();
        assert_eq!(d.y, rel_y);
    }
}
