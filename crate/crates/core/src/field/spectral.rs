//! Eigenspace splittings of semisimple endomorphisms with known spectrum,
//! and adapted frames in which operators decompose into labelled blocks.

use std::collections::BTreeMap;

use super::matrix::{Endo, Matrix};
use super::scalar::Scalar;
use super::subspace::Subspace;
use crate::error::{Error, Result};

/// `E_α(Y)` for each listed `α`; fails unless the eigenspaces fill `V`.
pub fn eig_split<S: Scalar>(y: &Endo<S>, eigenvalues: &[S], ctx: S::Ctx) -> Result<Vec<Subspace<S>>> {
    let n = y.rows();
    let mut out = Vec::with_capacity(eigenvalues.len());
    let mut total = 0;
    for a in eigenvalues {
        let shifted = y.sub(&Matrix::identity(n).scale(a));
        let e = Subspace::span(n, &shifted.kernel(ctx), ctx)?;
        total += e.dim();
        out.push(e);
    }
    if total != n {
        return Err(Error::NotSemisimple);
    }
    Ok(out)
}

/// Coefficients `c_0..c_n` of `det(x I - A) = Σ c_k x^k` (Faddeev–LeVerrier).
pub fn charpoly<S: Scalar>(a: &Endo<S>) -> Vec<S> {
    let n = a.rows();
    let mut c = vec![S::zero(); n + 1];
    c[n] = S::one();
    let mut m = Matrix::<S>::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&Matrix::identity(n).scale(&c[n + 1 - k]));
        let tr = a.mul(&m).trace();
        c[n - k] = tr.mul(&S::from_ratio(-1, k as i64));
    }
    c
}

fn eval_poly<S: Scalar>(c: &[S], x: &S) -> S {
    c.iter().rev().fold(S::zero(), |acc, ck| acc.mul(x).add(ck))
}

/// Splits `V` into integer eigenspaces of `Y`; `NotSemisimple` unless `Y` is
/// diagonalizable with integer eigenvalues.
pub fn integer_eigenspaces<S: Scalar>(y: &Endo<S>, ctx: S::Ctx) -> Result<BTreeMap<i32, Subspace<S>>> {
    let n = y.rows();
    if !y.is_square() {
        return Err(Error::DimensionMismatch {
            expected: y.rows(),
            found: y.cols(),
        });
    }
    let mut out = BTreeMap::new();
    if n == 0 {
        return Ok(out);
    }
    // Every eigenvalue is bounded by the largest absolute row sum.
    let bound = (0..n)
        .map(|i| {
            y.row(i)
                .iter()
                .map(|x| x.re_f64().hypot(x.im_f64()))
                .sum::<f64>()
        })
        .fold(0.0, f64::max);
    if !bound.is_finite() {
        return Err(Error::NotSemisimple);
    }
    let bound = bound.ceil() as i64 + 1;
    let cp = S::is_exact().then(|| charpoly(y));
    let mut total = 0;
    for k in -bound..=bound {
        let ks = S::from_i64(k);
        if let Some(cp) = &cp {
            if !eval_poly(cp, &ks).is_zero(ctx) {
                continue;
            }
        }
        let shifted = y.sub(&Matrix::identity(n).scale(&ks));
        let ker = shifted.kernel(ctx);
        if ker.is_empty() {
            continue;
        }
        let e = Subspace::span(n, &ker, ctx)?;
        total += e.dim();
        out.insert(k as i32, e);
        if total >= n {
            break;
        }
    }
    if total != n {
        return Err(Error::NotSemisimple);
    }
    Ok(out)
}

/// A basis of `V` (the columns of `basis`) with a label attached to each
/// vector. Operators are decomposed by reading off matrix entries in this
/// basis.
#[derive(Clone, Debug)]
pub struct Frame<S, L> {
    basis: Matrix<S>,
    inverse: Matrix<S>,
    labels: Vec<L>,
}

impl<S: Scalar, L: Copy + Ord> Frame<S, L> {
    pub fn new(columns: Vec<Vec<S>>, labels: Vec<L>, ctx: S::Ctx) -> Result<Self> {
        let n = columns.first().map_or(0, Vec::len);
        if columns.len() != n || labels.len() != n {
            return Err(Error::NotDirectSum);
        }
        let basis = Matrix::from_columns(n, &columns);
        let inverse = basis.inverse(ctx).map_err(|_| Error::NotDirectSum)?;
        Ok(Frame {
            basis,
            inverse,
            labels,
        })
    }

    /// Frame assembled from labelled subspaces forming a direct sum.
    pub fn from_pieces<'a>(
        n: usize,
        pieces: impl IntoIterator<Item = (L, &'a Subspace<S>)>,
        ctx: S::Ctx,
    ) -> Result<Self>
    where
        S: 'a,
    {
        let mut cols = Vec::with_capacity(n);
        let mut labels = Vec::with_capacity(n);
        for (l, sp) in pieces {
            for v in sp.basis() {
                cols.push(v);
                labels.push(l);
            }
        }
        if cols.len() != n {
            return Err(Error::NotDirectSum);
        }
        Self::new(cols, labels, ctx)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn inverse(&self) -> &Matrix<S> {
        &self.inverse
    }

    pub fn labels(&self) -> &[L] {
        &self.labels
    }

    pub fn vector(&self, j: usize) -> Vec<S> {
        self.basis.column(j)
    }

    /// `B^{-1} A B`.
    pub fn to_frame(&self, a: &Endo<S>) -> Endo<S> {
        self.inverse.mul(a).mul(&self.basis)
    }

    /// `B A B^{-1}`.
    pub fn from_frame(&self, a: &Endo<S>) -> Endo<S> {
        self.basis.mul(a).mul(&self.inverse)
    }

    /// Keeps the frame entries `(i, j)` for which `keep(label_i, label_j)`.
    pub fn block_part(&self, a: &Endo<S>, keep: impl Fn(L, L) -> bool) -> Endo<S> {
        let mut m = self.to_frame(a);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !keep(self.labels[i], self.labels[j]) {
                    m[(i, j)] = S::zero();
                }
            }
        }
        self.from_frame(&m)
    }

    /// Decomposes `a` by a function of (row label, column label).
    pub fn split_by<K: Ord>(&self, a: &Endo<S>, key: impl Fn(L, L) -> K) -> BTreeMap<K, Endo<S>> {
        let m = self.to_frame(a);
        let n = self.dim();
        let mut parts: BTreeMap<K, Endo<S>> = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                if m[(i, j)].is_structural_zero() {
                    continue;
                }
                let k = key(self.labels[i], self.labels[j]);
                parts.entry(k).or_insert_with(|| Matrix::zeros(n, n))[(i, j)] = m[(i, j)].clone();
            }
        }
        parts.into_iter().map(|(k, p)| (k, self.from_frame(&p))).collect()
    }

    /// Operator acting by `f(label)` on each frame vector.
    pub fn diagonal_operator(&self, f: impl Fn(L) -> S) -> Endo<S> {
        let d: Vec<S> = self.labels.iter().map(|&l| f(l)).collect();
        self.from_frame(&Matrix::diagonal(&d))
    }

    /// Span of the frame vectors whose label satisfies `pred`.
    pub fn span_where(&self, pred: impl Fn(L) -> bool, ctx: S::Ctx) -> Subspace<S> {
        let vs: Vec<Vec<S>> = (0..self.dim())
            .filter(|&j| pred(self.labels[j]))
            .map(|j| self.vector(j))
            .collect();
        Subspace::span(self.basis.rows(), &vs, ctx).expect("frame vectors have ambient length")
    }

    /// Coordinates of `v` in the frame.
    pub fn coords(&self, v: &[S]) -> Vec<S> {
        self.inverse.apply(v)
    }
}

/// Eigenframe of a semisimple `Y` with integer eigenvalues.
pub fn grading_frame<S: Scalar>(y: &Endo<S>, ctx: S::Ctx) -> Result<Frame<S, i32>> {
    let spaces = integer_eigenspaces(y, ctx)?;
    Frame::from_pieces(y.rows(), spaces.iter().map(|(&k, e)| (k, e)), ctx)
}

/// `A = Σ_ℓ A_ℓ` with `[Y, A_ℓ] = ℓ A_ℓ`. Zero components are omitted.
pub fn ad_eig_split<S: Scalar>(y: &Endo<S>, a: &Endo<S>, ctx: S::Ctx) -> Result<BTreeMap<i32, Endo<S>>> {
    let frame = grading_frame(y, ctx)?;
    Ok(frame
        .split_by(a, |row, col| row - col)
        .into_iter()
        .filter(|(_, p)| !p.is_zero(ctx))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    fn m(rows: &[&[i64]]) -> Matrix<Gq> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn diagonal_split() {
        let y = m(&[&[0, 0], &[0, 2]]);
        let sp = eig_split(&y, &[Gq::int(0), Gq::int(2)], Exact).unwrap();
        assert_eq!(sp[0].basis(), vec![vec![Gq::int(1), Gq::int(0)]]);
        assert_eq!(sp[1].basis(), vec![vec![Gq::int(0), Gq::int(1)]]);
        let sp = eig_split(&Matrix::<Gq>::zeros(3, 3), &[Gq::int(0)], Exact).unwrap();
        assert!(sp[0].is_full());
    }

    #[test]
    fn conjugated_diagonal_dims() {
        let g = m(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let y = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 3]]).conjugate_by(&g, Exact).unwrap();
        let sp = eig_split(&y, &[Gq::int(1), Gq::int(3)], Exact).unwrap();
        assert_eq!(sp.iter().map(Subspace::dim).collect::<Vec<_>>(), vec![2, 1]);
        assert!(matches!(eig_split(&y, &[Gq::int(1)], Exact), Err(Error::NotSemisimple)));
        let found = integer_eigenspaces(&y, Exact).unwrap();
        assert_eq!(found.keys().copied().collect::<Vec<_>>(), vec![1, 3]);
    }

    #[test]
    fn jordan_block_is_not_semisimple() {
        assert!(matches!(
            integer_eigenspaces(&m(&[&[1, 1], &[0, 1]]), Exact),
            Err(Error::NotSemisimple)
        ));
    }

    #[test]
    fn charpoly_of_companion() {
        // x^2 - 3x + 2
        let c = charpoly(&m(&[&[1, 0], &[0, 2]]));
        assert_eq!(c, vec![Gq::int(2), Gq::int(-3), Gq::int(1)]);
    }

    #[test]
    fn ad_split_of_matrix_unit() {
        let y = m(&[&[0, 0], &[0, 2]]);
        let parts = ad_eig_split(&y, &Matrix::unit(2, 0, 1), Exact).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![-2]);
        let parts = ad_eig_split(&y, &y, Exact).unwrap();
        assert_eq!(parts.keys().copied().collect::<Vec<_>>(), vec![0]);
    }
}
