use super::bigrading::Bigrading;
use super::filtration::IncFiltration;
use super::polarization::{GradedCoords, PolarizationSystem};
use crate::error::{Error, Result};
use crate::field::{hermitian_definite, Endo, Frame, Matrix, Scalar, Subspace};

/// The mixed Hodge metric `h(u, v) = u^T H conj(v)`, sesquilinear and
/// conjugate-linear in `v`.
#[derive(Clone, Debug)]
pub struct HodgeMetric<S> {
    /// `H_{ab} = h(e_a, e_b)`.
    pub gram: Matrix<S>,
    /// `H^T`, the matrix of `h` as a hermitian form `x^* G x`.
    g: Matrix<S>,
    g_inv: Matrix<S>,
}

impl<S: Scalar> HodgeMetric<S> {
    /// Wraps a Gram matrix after checking positivity.
    pub fn from_gram(gram: Matrix<S>, ctx: S::Ctx) -> Result<Self> {
        let g = gram.transpose();
        let d = hermitian_definite(&g, ctx)?;
        if let Some((index, pivot)) = d.witness {
            return Err(Error::NotGradedPolarized {
                index,
                pivot: format!("{pivot:?}"),
            });
        }
        let g_inv = g.inverse(ctx)?;
        Ok(HodgeMetric { gram, g, g_inv })
    }

    pub fn inner(&self, u: &[S], v: &[S]) -> S {
        let vb: Vec<S> = v.iter().map(S::conj).collect();
        crate::field::dot(u, &self.gram.apply(&vb))
    }

    /// `h`-adjoint `T* = G^{-1} T^† G`.
    pub fn adjoint(&self, t: &Endo<S>) -> Endo<S> {
        self.g_inv.mul(&t.adjoint()).mul(&self.g)
    }

    /// Induced inner product on `End(V)`: `Tr(α β*)`.
    pub fn tangent_inner(&self, a: &Endo<S>, b: &Endo<S>) -> S {
        a.mul(&self.adjoint(b)).trace()
    }

    /// `‖T‖² = Tr(T T*)`.
    pub fn tangent_norm_sq(&self, t: &Endo<S>) -> S {
        self.tangent_inner(t, t)
    }

    /// Gram matrix of `h` on the given vectors: `[h(b_i, b_j)]`.
    pub fn gram_of(&self, vectors: &[Vec<S>]) -> Matrix<S> {
        let m = vectors.len();
        let mut out = Matrix::zeros(m, m);
        for i in 0..m {
            for j in 0..m {
                out[(i, j)] = self.inner(&vectors[i], &vectors[j]);
            }
        }
        out
    }
}

fn i_power<S: Scalar>(e: i32) -> S {
    match e.rem_euclid(4) {
        0 => S::one(),
        1 => S::i(),
        2 => S::one().neg(),
        _ => S::i().neg(),
    }
}

/// Gram matrix of the mixed Hodge metric: the `I^{p,q}` are orthogonal and
/// `h(u, v) = i^{p-q} S_{p+q}([u], [conj v])` on each piece.
pub fn mixed_hodge_metric<S: Scalar>(
    bigrading: &Bigrading<S>,
    pol: &PolarizationSystem<S>,
    gc: &GradedCoords<S>,
    ctx: S::Ctx,
) -> Result<HodgeMetric<S>> {
    for (&(p, q), &found) in &bigrading.hodge_numbers() {
        if pol.h(p, q) != found {
            return Err(Error::HodgeNumberMismatch {
                p,
                q,
                expected: pol.h(p, q),
                found,
            });
        }
    }
    for (&(p, q), &h) in &pol.hodge_numbers {
        if h > 0 && bigrading.get(p, q).is_zero() {
            return Err(Error::HodgeNumberMismatch {
                p,
                q,
                expected: h,
                found: 0,
            });
        }
    }
    let frame = bigrading.frame();
    let n = frame.dim();
    let labels = frame.labels();
    let mut gb = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if labels[i] != labels[j] {
                continue;
            }
            let (p, q) = labels[i];
            let vj: Vec<S> = frame.vector(j).iter().map(S::conj).collect();
            let s = pol.pair(gc, p + q, &frame.vector(i), &vj);
            gb[(i, j)] = i_power::<S>(p - q).mul(&s);
        }
    }
    let binv = frame.inverse();
    let gram = binv.transpose().mul(&gb).mul(&binv.conj());
    HodgeMetric::from_gram(gram, ctx)
}

/// Grading `Y_h` of `W` whose `k`-eigenspace is the `h`-orthogonal complement
/// of `W_{k-1}` in `W_k`.
pub fn metric_grading<S: Scalar>(w: &IncFiltration<S>, gram: &Matrix<S>, ctx: S::Ctx) -> Result<Endo<S>> {
    let n = w.ambient_dim();
    let d = hermitian_definite(&gram.transpose(), ctx)?;
    if !d.positive_definite {
        return Err(Error::NotDefinite);
    }
    let mut pieces = Vec::new();
    for k in w.jumps() {
        let below = w.get(k - 1);
        // v ⊥ b  ⇔  Σ_a v_a (H conj b)_a = 0.
        let eqs: Vec<Vec<S>> = below
            .basis()
            .iter()
            .map(|b| {
                let bb: Vec<S> = b.iter().map(S::conj).collect();
                gram.apply(&bb)
            })
            .collect();
        let perp = if eqs.is_empty() {
            Subspace::full(n)
        } else {
            Subspace::span(n, &Matrix::from_rows(eqs)?.kernel(ctx), ctx)?
        };
        pieces.push((k, perp.intersection(&w.get(k), ctx)?));
    }
    let frame = Frame::from_pieces(n, pieces.iter().map(|(k, s)| (*k, s)), ctx)?;
    Ok(frame.diagonal_operator(|k| S::from_i64(k as i64)))
}

/// Lifts of the graded basis through the bigrading: for each weight `k`, the
/// vectors of `⊕_{p+q=k} I^{p,q}` whose classes in `Gr^W_k` are the chosen
/// lifts. On a Hodge–Tate structure the metric Gram matrix of this frame is
/// the graded form itself.
pub fn graded_frame<S: Scalar>(b: &Bigrading<S>, gc: &GradedCoords<S>, ctx: S::Ctx) -> Result<Vec<Vec<S>>> {
    let mut out = Vec::new();
    for k in gc.weights() {
        let e = b.span_where(|p, q| p + q == k, ctx);
        let basis = e.basis_columns();
        let classes = gc.quotient[&k].mul(&basis);
        out.extend(basis.mul(&classes.inverse(ctx)?).columns());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::field::{Exact, Gq};
    use crate::mhs::bigrading::deligne_bigrading;
    use crate::mhs::filtration::DecFiltration;

    fn closing(lambda: Gq) -> (DecFiltration<Gq>, IncFiltration<Gq>, PolarizationSystem<Gq>) {
        let e0 = vec![Gq::int(1), Gq::int(0)];
        let e2 = vec![Gq::int(0), Gq::int(1)];
        let gens = BTreeMap::from([(0, vec![e0]), (2, vec![e2])]);
        let w = IncFiltration::from_generators(2, &gens, Exact).unwrap();
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![vec![lambda, Gq::int(1)]])]), Exact).unwrap();
        let p = PolarizationSystem {
            hodge_numbers: BTreeMap::from([((0, 0), 1), ((1, 1), 1)]),
            lifts: gens,
            forms: BTreeMap::from([(0, Matrix::from_i64_rows(&[&[1]])), (2, Matrix::from_i64_rows(&[&[1]]))]),
        };
        (f, w, p)
    }

    #[test]
    fn unitary_frame() {
        let lambda = Gq::complex(-2, 3, 5, 7);
        let (f, w, p) = closing(lambda.clone());
        let gc = p.validate(&w, Exact).unwrap();
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        let h = mixed_hodge_metric(&b, &p, &gc, Exact).unwrap();
        let frame = vec![vec![Gq::int(1), Gq::int(0)], vec![lambda, Gq::int(1)]];
        assert_eq!(h.gram_of(&frame), Matrix::identity(2));
        let y = metric_grading(&w, &h.gram, Exact).unwrap();
        assert_eq!(y, b.grading());
        let y2 = metric_grading(&w, &h.gram.scale(&Gq::int(2)), Exact).unwrap();
        assert_eq!(y2, y);
    }

    #[test]
    fn weight_one_piece_uses_i_factor() {
        let w = IncFiltration::<Gq>::pure(2, 1);
        let u = vec![Gq::int(1), Gq::i()];
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![u.clone()])]), Exact).unwrap();
        let p = PolarizationSystem {
            hodge_numbers: BTreeMap::from([((1, 0), 1), ((0, 1), 1)]),
            lifts: BTreeMap::from([(1, Matrix::<Gq>::identity(2).row_vecs())]),
            forms: BTreeMap::from([(1, Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]))]),
        };
        let gc = p.validate(&w, Exact).unwrap();
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        let h = mixed_hodge_metric(&b, &p, &gc, Exact).unwrap();
        let ub: Vec<Gq> = u.iter().map(Scalar::conj).collect();
        let direct = Gq::i().mul(&p.pair(&gc, 1, &u, &ub));
        assert_eq!(h.inner(&u, &u), direct);
        assert_eq!(direct, Gq::int(2));

        // The opposite sign of S_1 makes h negative.
        let mut neg = p.clone();
        neg.forms.insert(1, Matrix::from_i64_rows(&[&[0, -1], &[1, 0]]));
        assert!(matches!(
            mixed_hodge_metric(&b, &neg, &gc, Exact),
            Err(Error::NotGradedPolarized { .. })
        ));
    }
}
