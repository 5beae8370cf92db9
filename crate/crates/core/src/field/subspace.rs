use super::matrix::{Endo, Matrix};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A linear subspace of `S^n`, stored as the nonzero rows of a reduced
/// row echelon basis. Over the exact field the representation is canonical,
/// so structural equality is equality of subspaces.
#[derive(Clone, PartialEq)]
pub struct Subspace<S> {
    n: usize,
    basis: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::zeros(0, n),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            n,
            basis: Matrix::identity(n),
        }
    }

    pub fn span(n: usize, vectors: &[Vec<S>], ctx: S::Ctx) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let m = if vectors.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(vectors.to_vec())?
        };
        Ok(Self::from_row_matrix(&m, ctx))
    }

    /// Span of the rows of `m`.
    pub fn from_row_matrix(m: &Matrix<S>, ctx: S::Ctx) -> Self {
        let n = m.cols();
        let (r, pivots) = m.rref(ctx);
        let rows = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect::<Vec<_>>();
        let basis = if rows.is_empty() {
            Matrix::zeros(0, n)
        } else {
            Matrix::from_rows(rows).expect("rows of equal length")
        };
        Subspace { n, basis }
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix<S>, ctx: S::Ctx) -> Self {
        Self::from_row_matrix(&m.transpose(), ctx)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.n
    }

    pub fn basis(&self) -> Vec<Vec<S>> {
        self.basis.row_vecs()
    }

    /// Basis vectors as rows.
    pub fn basis_rows(&self) -> &Matrix<S> {
        &self.basis
    }

    /// Basis vectors as columns of an `n x dim` matrix.
    pub fn basis_columns(&self) -> Matrix<S> {
        self.basis.transpose()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    /// Vectors `x` with `b · x = 0` for every basis row `b` (bilinear, no conjugation).
    pub fn annihilator(&self, ctx: S::Ctx) -> Vec<Vec<S>> {
        if self.dim() == 0 {
            return Matrix::<S>::identity(self.n).row_vecs();
        }
        self.basis.kernel(ctx)
    }

    pub fn contains(&self, v: &[S], ctx: S::Ctx) -> bool {
        assert_eq!(v.len(), self.n, "vector length");
        if v.iter().all(|x| x.is_zero(ctx)) {
            return true;
        }
        if self.dim() == self.n {
            return true;
        }
        self.annihilator(ctx).iter().all(|a| dot(a, v).is_zero(ctx))
    }

    pub fn contains_space(&self, other: &Self, ctx: S::Ctx) -> bool {
        if self.n != other.n || other.dim() > self.dim() {
            return false;
        }
        if other.dim() == 0 {
            return true;
        }
        let ann = self.annihilator(ctx);
        other
            .basis
            .row_vecs()
            .iter()
            .all(|v| ann.iter().all(|a| dot(a, v).is_zero(ctx)))
    }

    /// Subspace equality that also works under a tolerance.
    pub fn same_as(&self, other: &Self, ctx: S::Ctx) -> bool {
        self.n == other.n && self.dim() == other.dim() && self.contains_space(other, ctx)
    }

    pub fn sum(&self, other: &Self, ctx: S::Ctx) -> Result<Self> {
        self.check(other)?;
        let mut rows = self.basis();
        rows.extend(other.basis());
        Self::span(self.n, &rows, ctx)
    }

    pub fn sum_all<'a>(n: usize, parts: impl IntoIterator<Item = &'a Self>, ctx: S::Ctx) -> Result<Self> {
        let mut rows = Vec::new();
        for p in parts {
            if p.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n,
                });
            }
            rows.extend(p.basis());
        }
        Self::span(n, &rows, ctx)
    }

    pub fn intersection(&self, other: &Self, ctx: S::Ctx) -> Result<Self> {
        self.check(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.n));
        }
        let mut rows = self.annihilator(ctx);
        rows.extend(other.annihilator(ctx));
        let eqs = Matrix::from_rows(rows)?;
        Self::span(self.n, &eqs.kernel(ctx), ctx)
    }

    /// `T(self)`.
    pub fn image(&self, t: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        if t.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: t.cols(),
            });
        }
        let vs: Vec<Vec<S>> = self.basis().iter().map(|v| t.apply(v)).collect();
        Self::span(t.rows(), &vs, ctx)
    }

    /// `{x : T x ∈ self}`.
    pub fn preimage(&self, t: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        if t.rows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: t.rows(),
            });
        }
        let ann = self.annihilator(ctx);
        if ann.is_empty() {
            return Ok(Self::full(t.cols()));
        }
        let eqs = Matrix::from_rows(ann)?.mul(t);
        Self::span(t.cols(), &eqs.kernel(ctx), ctx)
    }

    /// Complex conjugate subspace.
    pub fn conj(&self, ctx: S::Ctx) -> Self {
        Self::from_row_matrix(&self.basis.conj(), ctx)
    }

    pub fn is_real(&self, ctx: S::Ctx) -> bool {
        self.same_as(&self.conj(ctx), ctx)
    }

    /// Vectors extending a basis of `sub` to a basis of `self`, chosen greedily
    /// among the basis vectors of `self`.
    pub fn complement_of(&self, sub: &Self, ctx: S::Ctx) -> Result<Vec<Vec<S>>> {
        self.check(sub)?;
        extend_basis(&sub.basis(), &self.basis(), self.n, ctx)
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[S], ctx: S::Ctx) -> Option<Vec<S>> {
        if self.dim() == 0 {
            return v.iter().all(|x| x.is_zero(ctx)).then(Vec::new);
        }
        self.basis_columns().solve(v, ctx)
    }
}

/// Picks vectors from `candidates` that extend the independent set `start`
/// until the span stops growing.
pub fn extend_basis<S: Scalar>(
    start: &[Vec<S>],
    candidates: &[Vec<S>],
    n: usize,
    ctx: S::Ctx,
) -> Result<Vec<Vec<S>>> {
    let mut cur = Subspace::span(n, start, ctx)?;
    let mut out = Vec::new();
    for c in candidates {
        if !cur.contains(c, ctx) {
            out.push(c.clone());
            let mut rows = cur.basis();
            rows.push(c.clone());
            cur = Subspace::span(n, &rows, ctx)?;
        }
    }
    Ok(out)
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b).fold(S::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

impl<S: std::fmt::Debug> std::fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(n={}, basis={:?})", self.n, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    fn e(n: usize, i: usize) -> Vec<Gq> {
        (0..n).map(|j| Gq::int((i == j) as i64)).collect()
    }

    #[test]
    fn complementary_lines() {
        let a = Subspace::span(2, &[e(2, 0)], Exact).unwrap();
        let b = Subspace::span(2, &[e(2, 1)], Exact).unwrap();
        assert_eq!(a.sum(&b, Exact).unwrap(), Subspace::full(2));
        assert_eq!(a.intersection(&b, Exact).unwrap(), Subspace::zero(2));
        assert_eq!(a.sum(&a, Exact).unwrap(), a);
        assert_eq!(a.intersection(&a, Exact).unwrap(), a);
    }

    #[test]
    fn canonical_form_ignores_spanning_set() {
        let v = vec![Gq::int(1), Gq::int(2), Gq::i()];
        let w = vec![Gq::int(0), Gq::int(1), Gq::int(1)];
        let vw: Vec<Gq> = v.iter().zip(&w).map(|(a, b)| a + &(b * &Gq::int(3))).collect();
        let a = Subspace::span(3, &[v.clone(), w.clone()], Exact).unwrap();
        let b = Subspace::span(3, &[vw, w], Exact).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn image_and_preimage() {
        // N e1 = e0.
        let n = Matrix::<Gq>::unit(3, 0, 1);
        let full = Subspace::full(3);
        let img = full.image(&n, Exact).unwrap();
        assert_eq!(img, Subspace::span(3, &[e(3, 0)], Exact).unwrap());
        let ker = Subspace::zero(3).preimage(&n, Exact).unwrap();
        assert_eq!(ker, Subspace::span(3, &[e(3, 0), e(3, 2)], Exact).unwrap());
    }

    #[test]
    fn conjugation_of_complex_line() {
        let l = Subspace::span(2, &[vec![Gq::int(1), Gq::i()]], Exact).unwrap();
        assert!(!l.is_real(Exact));
        assert_eq!(l.conj(Exact), Subspace::span(2, &[vec![Gq::int(1), Gq::i().neg()]], Exact).unwrap());
    }
}
