//! Relative weight filtration `M = relW(N, W)`.
//!
//! Construction proceeds up the steps of `W`. Suppose `M^A` is known on
//! `A = W_{k-1}` and let `Q = W_k / A`. For every Jordan chain of `Gr_k N`
//! with top `p` and length `ℓ + 1` we look for a lift `v` of `p` with
//! `N^{ℓ+1} v ∈ M^A_{k-ℓ-2}`; this is an affine linear condition on the
//! choice of lift. Then
//!
//! `M_j = M^A_j + span{ N^i v : k + ℓ - 2i ≤ j }`.
//!
//! If `M` exists, every top `p` of weight `k + ℓ` lifts into `M_{k+ℓ}`, so an
//! unsolvable lift condition proves that `M` does not exist.

use std::collections::BTreeMap;

use super::monodromy::{monodromy_filtration, Quotient};
use crate::error::{Error, Result};
use crate::field::{Endo, Matrix, Scalar, Subspace};
use crate::mhs::IncFiltration;

/// A partially built filtration of a subspace, stored densely on `[lo, hi]`:
/// zero below `lo`, `top` from `hi` on.
#[derive(Clone, Debug)]
struct PartialFiltration<S> {
    n: usize,
    lo: i32,
    steps: Vec<Subspace<S>>,
}

impl<S: Scalar> PartialFiltration<S> {
    fn get(&self, j: i32) -> Subspace<S> {
        if j < self.lo {
            return Subspace::zero(self.n);
        }
        let idx = ((j - self.lo) as usize).min(self.steps.len() - 1);
        self.steps[idx].clone()
    }
}

/// `relW(N, W)`, or a proof of non-existence.
pub fn relative_weight_filtration<S: Scalar>(
    n: &Endo<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> Result<IncFiltration<S>> {
    if !n.is_nilpotent(ctx) {
        return Err(Error::NotNilpotent);
    }
    if !w.preserved_by(n, ctx)? {
        return Err(Error::Precondition("N does not preserve W".into()));
    }
    let candidate = inductive(n, w, ctx)?;
    let report = verify_relative_weight_filtration(&candidate, n, w, ctx)?;
    if !report.ok() {
        return Err(Error::ConstructionFailed(format!("candidate rejected by verifier: {report:?}")));
    }
    Ok(candidate)
}

fn inductive<S: Scalar>(n: &Endo<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<IncFiltration<S>> {
    let dim = w.ambient_dim();
    let span = dim as i32 + 1;
    let lo = w.bottom() - span;
    let hi = w.top() + span;
    let mut m = PartialFiltration {
        n: dim,
        lo,
        steps: vec![Subspace::zero(dim); (hi - lo + 1) as usize],
    };
    let mut a = Subspace::zero(dim);
    for k in w.jumps() {
        let b = w.get(k);
        let q = Quotient::new(&a, &b, ctx)?;
        let nq = q.induced(n);
        let mut new_steps = m.steps.clone();
        for (top, len) in jordan_tops(&nq, ctx)? {
            let l = len as i32 - 1;
            let v0 = q.lift(&top);
            let v = solve_lift(n, &v0, len, &a, &m.get(k - l - 2), ctx)?.ok_or(
                Error::RelativeWeightDoesNotExist {
                    k,
                    primitive_weight: k + l,
                },
            )?;
            let mut vi = v;
            for i in 0..len as i32 {
                let weight = k + l - 2 * i;
                for j in weight.max(lo)..=hi {
                    let idx = (j - lo) as usize;
                    let mut rows = new_steps[idx].basis();
                    rows.push(vi.clone());
                    new_steps[idx] = Subspace::span(dim, &rows, ctx)?;
                }
                vi = n.apply(&vi);
            }
        }
        m.steps = new_steps;
        a = b;
    }
    let steps: BTreeMap<i32, Subspace<S>> = (lo..=hi).map(|j| (j, m.get(j))).collect();
    IncFiltration::from_steps(dim, steps, ctx)
}

/// Finds `a ∈ A` with `N^len (v0 + a) ∈ target`.
fn solve_lift<S: Scalar>(
    n: &Endo<S>,
    v0: &[S],
    len: usize,
    a: &Subspace<S>,
    target: &Subspace<S>,
    ctx: S::Ctx,
) -> Result<Option<Vec<S>>> {
    let np = n.pow(len);
    let ann = target.annihilator(ctx);
    if ann.is_empty() {
        return Ok(Some(v0.to_vec()));
    }
    let t = Matrix::from_rows(ann)?;
    let tn = t.mul(&np);
    let rhs: Vec<S> = tn.apply(v0).iter().map(S::neg).collect();
    if a.is_zero() {
        return Ok(rhs.iter().all(|x| x.is_zero(ctx)).then(|| v0.to_vec()));
    }
    let ab = a.basis_columns();
    let Some(c) = tn.mul(&ab).solve(&rhs, ctx) else {
        return Ok(None);
    };
    let shift = ab.apply(&c);
    Ok(Some(v0.iter().zip(&shift).map(|(x, y)| x.add(y)).collect()))
}

/// Tops of a Jordan basis of a nilpotent `t`, with chain lengths.
pub fn jordan_tops<S: Scalar>(t: &Endo<S>, ctx: S::Ctx) -> Result<Vec<(Vec<S>, usize)>> {
    let d = t.rows();
    let m = t.nilpotency_index(ctx).ok_or(Error::NotNilpotent)?;
    let kernels: Vec<Subspace<S>> = (0..=m + 1)
        .map(|e| Subspace::span(d, &t.pow(e).kernel(ctx), ctx))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for len in (1..=m).rev() {
        let below = kernels[len - 1].sum(&kernels[len + 1].image(t, ctx)?, ctx)?;
        let below = below.intersection(&kernels[len], ctx)?;
        for v in kernels[len].complement_of(&below, ctx)? {
            out.push((v, len));
        }
    }
    Ok(out)
}

/// Outcome of checking a candidate against the two defining properties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeWeightReport {
    /// First `j` with `N M_j ⊄ M_{j-2}`.
    pub degree_witness: Option<i32>,
    /// First `(j, k)` where `M` induces the wrong filtration on `Gr^W_k`.
    pub graded_witness: Option<(i32, i32)>,
}

impl RelativeWeightReport {
    pub fn ok(&self) -> bool {
        self.degree_witness.is_none() && self.graded_witness.is_none()
    }
}

pub fn verify_relative_weight_filtration<S: Scalar>(
    m: &IncFiltration<S>,
    n: &Endo<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> Result<RelativeWeightReport> {
    let dim = w.ambient_dim();
    if m.ambient_dim() != dim || n.rows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: m.ambient_dim(),
        });
    }
    let span = dim as i32 + 1;
    let jlo = w.bottom().min(m.bottom()) - span;
    let jhi = w.top().max(m.top()) + span;
    let mut report = RelativeWeightReport {
        degree_witness: None,
        graded_witness: None,
    };
    for j in jlo..=jhi {
        let img = m.get(j).image(n, ctx)?;
        if !m.get(j - 2).contains_space(&img, ctx) {
            report.degree_witness = Some(j);
            break;
        }
    }
    'outer: for k in w.jumps() {
        let a = w.get(k - 1);
        let b = w.get(k);
        if !w.preserved_by(n, ctx)? {
            report.graded_witness = Some((jlo, k));
            break;
        }
        let q = Quotient::new(&a, &b, ctx)?;
        let nq = q.induced(n);
        let Ok(wq) = monodromy_filtration(&nq, ctx) else {
            report.graded_witness = Some((jlo, k));
            break;
        };
        for j in jlo..=jhi {
            let induced = m.get(j).intersection(&b, ctx)?.sum(&a, ctx)?;
            let expected = q.preimage(&wq.get(j - k), ctx)?;
            if !induced.same_as(&expected, ctx) {
                report.graded_witness = Some((j, k));
                break 'outer;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    fn e(n: usize, i: usize) -> Vec<Gq> {
        (0..n).map(|j| Gq::int((i == j) as i64)).collect()
    }

    fn closing() -> (Endo<Gq>, IncFiltration<Gq>) {
        let w = IncFiltration::from_generators(2, &BTreeMap::from([(0, vec![e(2, 0)]), (2, vec![e(2, 1)])]), Exact)
            .unwrap();
        (Matrix::unit(2, 0, 1), w)
    }

    #[test]
    fn closing_example_gives_w() {
        let (n, w) = closing();
        let m = relative_weight_filtration(&n, &w, Exact).unwrap();
        assert_eq!(m, w);
        assert!(verify_relative_weight_filtration(&m, &n, &w, Exact).unwrap().ok());
        let bad = verify_relative_weight_filtration(&m.shift(1), &n, &w, Exact).unwrap();
        assert!(!bad.ok());
    }

    #[test]
    fn pure_weight_is_shifted_monodromy() {
        let n = Matrix::<Gq>::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = IncFiltration::pure(3, 4);
        let m = relative_weight_filtration(&n, &w, Exact).unwrap();
        assert_eq!(m, monodromy_filtration(&n, Exact).unwrap().shift(-4));
    }

    #[test]
    fn zero_map_gives_w() {
        let (_, w) = closing();
        let m = relative_weight_filtration(&Matrix::zeros(2, 2), &w, Exact).unwrap();
        assert_eq!(m, w);
    }

    #[test]
    fn obstruction_is_detected() {
        // W_0 = span(e0), W_1 = V, N e1 = e0: the top e1 of weight 1 would need
        // N e1 ∈ M_{-1} ∩ W_0 = 0.
        let w = IncFiltration::from_generators(2, &BTreeMap::from([(0, vec![e(2, 0)]), (1, vec![e(2, 1)])]), Exact)
            .unwrap();
        let n = Matrix::<Gq>::unit(2, 0, 1);
        assert!(matches!(
            relative_weight_filtration(&n, &w, Exact),
            Err(Error::RelativeWeightDoesNotExist { k: 1, primitive_weight: 1 })
        ));
    }

    #[test]
    fn jordan_tops_of_mixed_blocks() {
        // Blocks of sizes 2 and 1.
        let t = Matrix::<Gq>::unit(3, 0, 1);
        let tops = jordan_tops(&t, Exact).unwrap();
        let lens: Vec<usize> = tops.iter().map(|(_, l)| *l).collect();
        assert_eq!(lens, vec![2, 1]);
    }
}
