use std::fmt;
use std::ops::{Index, IndexMut};

use super::scalar::{Gq, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix. Vectors are columns: `(A v)_i = Σ_j A_ij v_j`.
#[derive(Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

/// An endomorphism of the ambient space, stored as a square matrix.
pub type Endo<S> = Matrix<S>;

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![S::one(); n])
    }

    pub fn diagonal(d: &[S]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (k, x) in d.iter().enumerate() {
            m[(k, k)] = x.clone();
        }
        m
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = S::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch {
                expected: c,
                found: bad.len(),
            });
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_columns(n: usize, cols: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries in row-major order; the vectorization used for `End(V)`.
    pub fn as_flat(&self) -> &[S] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Entrywise complex conjugate (the real structure of the ambient space).
    pub fn conj(&self) -> Self {
        self.map(S::conj)
    }

    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(S::neg)
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_structural_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(k, j)];
                    let cell = &mut out.data[i * o.cols + j];
                    *cell = cell.add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    /// `[A, B] = AB - BA`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, k| acc.add(&self[(k, k)]))
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self, ctx: S::Ctx) -> bool {
        self.data.iter().all(|x| x.is_zero(ctx))
    }

    pub fn approx_eq(&self, o: &Self, ctx: S::Ctx) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.sub(o).is_zero(ctx)
    }

    pub fn is_real(&self, ctx: S::Ctx) -> bool {
        self.data.iter().all(|x| x.is_real(ctx))
    }

    pub fn is_hermitian(&self, ctx: S::Ctx) -> bool {
        self.is_square() && self.approx_eq(&self.adjoint(), ctx)
    }

    /// Sum of squared moduli of the entries (real part of `Tr(A A^†)`).
    pub fn frobenius_sq(&self) -> S {
        self.data.iter().fold(S::zero(), |acc, x| acc.add(&x.abs_sq()))
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self, ctx: S::Ctx) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let best = (r..m.rows)
                .filter(|&i| !m[(i, c)].is_zero(ctx))
                .max_by(|&a, &b| {
                    m[(a, c)]
                        .pivot_weight()
                        .partial_cmp(&m[(b, c)].pivot_weight())
                        .unwrap_or(std::cmp::Ordering::Equal)
                });
            let Some(p) = best else {
                for i in r..m.rows {
                    m[(i, c)] = S::zero();
                }
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            m[(r, c)] = S::one();
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero(ctx) {
                    if i != r {
                        m[(i, c)] = S::zero();
                    }
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    let d = m[(r, j)].mul(&f);
                    m[(i, j)] = m[(i, j)].sub(&d);
                }
                m[(i, c)] = S::zero();
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self, ctx: S::Ctx) -> usize {
        self.rref(ctx).1.len()
    }

    /// Basis of the right null space `{x : A x = 0}`.
    pub fn kernel(&self, ctx: S::Ctx) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref(ctx);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![S::zero(); self.cols];
                x[f] = S::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    x[pc] = r[(row, f)].neg();
                }
                x
            })
            .collect()
    }

    /// Some solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[S], ctx: S::Ctx) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref(ctx);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self, ctx: S::Ctx) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = S::one();
        }
        let (r, pivots) = aug.rref(ctx);
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    /// Smallest `m` with `A^m = 0`, if `A` is nilpotent.
    pub fn nilpotency_index(&self, ctx: S::Ctx) -> Option<usize> {
        if !self.is_square() {
            return None;
        }
        let mut p = Self::identity(self.rows);
        for m in 0..=self.rows {
            if p.is_zero(ctx) {
                return Some(m);
            }
            p = p.mul(self);
        }
        None
    }

    pub fn is_nilpotent(&self, ctx: S::Ctx) -> bool {
        self.nilpotency_index(ctx).is_some()
    }

    /// `exp(u)` of a nilpotent `u` as a finite series.
    pub fn nilpotent_exp(&self, ctx: S::Ctx) -> Result<Self> {
        let m = self.nilpotency_index(ctx).ok_or(Error::NotNilpotent)?;
        let n = self.rows;
        let mut term = Self::identity(n);
        let mut out = Self::identity(n);
        for k in 1..m {
            term = term.mul(self).scale(&S::from_ratio(1, k as i64));
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `log(g)` of a unipotent `g` as a finite series.
    pub fn nilpotent_log(&self, ctx: S::Ctx) -> Result<Self> {
        let n = self.rows;
        let v = self.sub(&Self::identity(n));
        let m = v.nilpotency_index(ctx).ok_or(Error::NotNilpotent)?;
        let mut out = Self::zeros(n, n);
        let mut power = Self::identity(n);
        for k in 1..m {
            power = power.mul(&v);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&S::from_ratio(sign, k as i64)));
        }
        Ok(out)
    }

    /// `g A g^{-1}`.
    pub fn conjugate_by(&self, g: &Self, ctx: S::Ctx) -> Result<Self> {
        Ok(g.mul(self).mul(&g.inverse(ctx)?))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Matrix<Gq> {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Gq::int(x)).collect())
                .collect(),
        )
        .expect("ragged rows")
    }
}

/// Outcome of an exact LDL* factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct Definiteness<S> {
    pub positive_definite: bool,
    /// First non-positive pivot and its index, when definiteness fails.
    pub witness: Option<(usize, S)>,
    pub pivots: Vec<S>,
}

/// Decides positive-definiteness of a hermitian matrix via `G = L D L*`.
///
/// All pivots of a hermitian matrix are real; the factorization stops at
/// the first pivot that is not strictly positive.
pub fn hermitian_definite<S: Scalar>(g: &Matrix<S>, ctx: S::Ctx) -> Result<Definiteness<S>> {
    if !g.is_hermitian(ctx) {
        return Err(Error::NotHermitian);
    }
    let n = g.rows();
    let mut a = g.clone();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let d = a[(k, k)].clone();
        if d.is_zero(ctx) || d.re_f64() < 0.0 {
            return Ok(Definiteness {
                positive_definite: false,
                witness: Some((k, d)),
                pivots,
            });
        }
        let dinv = d.inv().expect("positive pivot");
        for i in k + 1..n {
            let lik = a[(i, k)].mul(&dinv);
            if lik.is_zero(ctx) {
                continue;
            }
            for j in k + 1..n {
                let upd = lik.mul(&a[(k, j)]);
                a[(i, j)] = a[(i, j)].sub(&upd);
            }
        }
        pivots.push(d);
    }
    Ok(Definiteness {
        positive_definite: true,
        witness: None,
        pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix<Gq> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn exp_of_zero_and_square_zero() {
        let z = Matrix::<Gq>::zeros(3, 3);
        assert_eq!(z.nilpotent_exp(super::super::Exact).unwrap(), Matrix::identity(3));
        let e21 = m(&[&[0, 0], &[1, 0]]);
        assert_eq!(
            e21.nilpotent_exp(super::super::Exact).unwrap(),
            m(&[&[1, 0], &[1, 1]])
        );
    }

    #[test]
    fn non_nilpotent_is_rejected() {
        let a = m(&[&[1, 0], &[0, 0]]);
        assert!(matches!(
            a.nilpotent_exp(super::super::Exact),
            Err(Error::NotNilpotent)
        ));
        assert!(matches!(
            m(&[&[2, 0], &[0, 1]]).nilpotent_log(super::super::Exact),
            Err(Error::NotNilpotent)
        ));
    }

    #[test]
    fn definiteness_examples() {
        let ctx = super::super::Exact;
        let d = hermitian_definite(&Matrix::<Gq>::identity(3), ctx).unwrap();
        assert!(d.positive_definite);
        let d = hermitian_definite(&m(&[&[1, 0], &[0, -1]]), ctx).unwrap();
        assert!(!d.positive_definite);
        assert_eq!(d.witness, Some((1, Gq::int(-1))));
        assert!(matches!(
            hermitian_definite(&m(&[&[1, 2], &[0, 1]]), ctx),
            Err(Error::NotHermitian)
        ));
        // [[2, i], [-i, 2]] is positive definite with pivots 2, 3/2.
        let h = Matrix::from_rows(vec![
            vec![Gq::int(2), Gq::i()],
            vec![Gq::i().neg(), Gq::int(2)],
        ])
        .unwrap();
        let d = hermitian_definite(&h, ctx).unwrap();
        assert!(d.positive_definite);
        assert_eq!(d.pivots, vec![Gq::int(2), Gq::ratio(3, 2)]);
    }

    #[test]
    fn inverse_and_kernel() {
        let ctx = super::super::Exact;
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.mul(&a.inverse(ctx).unwrap()), Matrix::identity(2));
        assert!(matches!(m(&[&[1, 2], &[2, 4]]).inverse(ctx), Err(Error::Singular)));
        let k = m(&[&[1, 2, 3], &[2, 4, 6]]).kernel(ctx);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m(&[&[1, 2, 3]]).apply(&v).iter().all(|x| x.is_exact_zero()));
        }
    }
}
