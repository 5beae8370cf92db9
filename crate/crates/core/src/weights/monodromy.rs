use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{extend_basis, Endo, Matrix, Scalar, Subspace};
use crate::mhs::IncFiltration;

/// `W(N)_k = Σ_{j≥0} N^j ker N^{k+2j+1}`, checked against both defining
/// properties before it is returned.
pub fn monodromy_filtration<S: Scalar>(n: &Endo<S>, ctx: S::Ctx) -> Result<IncFiltration<S>> {
    let m = n.nilpotency_index(ctx).ok_or(Error::NotNilpotent)?;
    let w = monodromy_unchecked(n, m, ctx)?;
    if let Some(j) = check_monodromy(&w, n, ctx)? {
        return Err(Error::ConstructionFailed(format!(
            "monodromy filtration fails its defining property at index {j}"
        )));
    }
    Ok(w)
}

fn monodromy_unchecked<S: Scalar>(n: &Endo<S>, m: usize, ctx: S::Ctx) -> Result<IncFiltration<S>> {
    let dim = n.rows();
    let m = m as i32;
    let powers: Vec<Endo<S>> = (0..=2 * m + 1).map(|e| n.pow(e as usize)).collect();
    let kernels: Vec<Subspace<S>> = powers
        .iter()
        .map(|p| Subspace::span(dim, &p.kernel(ctx), ctx))
        .collect::<Result<_>>()?;
    let mut steps = BTreeMap::new();
    for k in -m..m {
        let mut gens = Vec::new();
        for j in 0..=m {
            let e = k + 2 * j + 1;
            if e <= 0 {
                continue;
            }
            let ker = &kernels[(e.min(m)) as usize];
            gens.extend(ker.image(&powers[j as usize], ctx)?.basis());
        }
        steps.insert(k, Subspace::span(dim, &gens, ctx)?);
    }
    IncFiltration::from_steps(dim, steps, ctx)
}

/// First index `j` at which `W` fails to be `W(N)`: either `N W_j ⊄ W_{j-2}`
/// or `N^j : Gr_j → Gr_{-j}` is not an isomorphism.
pub fn check_monodromy<S: Scalar>(w: &IncFiltration<S>, n: &Endo<S>, ctx: S::Ctx) -> Result<Option<i32>> {
    let span = (w.bottom().abs().max(w.top().abs())).max(1) + 1;
    for j in -span..=span {
        let img = w.get(j).image(n, ctx)?;
        if !w.get(j - 2).contains_space(&img, ctx) {
            return Ok(Some(j));
        }
    }
    for j in 0..=span {
        if w.graded_dim(j) != w.graded_dim(-j) {
            return Ok(Some(j));
        }
        let img = w.get(j).image(&n.pow(j as usize), ctx)?;
        let lhs = img.sum(&w.get(-j - 1), ctx)?;
        if !lhs.same_as(&w.get(-j), ctx) {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// A subquotient `B/A` of `V` with `A ⊆ B`, with coordinates on the quotient
/// given by a fixed complement of `A` in `B`.
#[derive(Clone, Debug)]
pub struct Quotient<S> {
    n: usize,
    a: Subspace<S>,
    a_dim: usize,
    q_dim: usize,
    /// Columns: basis of `A`, complement of `A` in `B`, complement of `B` in `V`.
    basis: Matrix<S>,
    inverse: Matrix<S>,
}

impl<S: Scalar> Quotient<S> {
    pub fn new(a: &Subspace<S>, b: &Subspace<S>, ctx: S::Ctx) -> Result<Self> {
        let n = b.ambient_dim();
        if !b.contains_space(a, ctx) {
            return Err(Error::Invalid("quotient of a subspace not containing the kernel".into()));
        }
        let mut cols = a.basis();
        cols.extend(b.complement_of(a, ctx)?);
        cols.extend(extend_basis(&cols, &Matrix::<S>::identity(n).row_vecs(), n, ctx)?);
        let basis = Matrix::from_columns(n, &cols);
        let inverse = basis.inverse(ctx)?;
        Ok(Quotient {
            n,
            a: a.clone(),
            a_dim: a.dim(),
            q_dim: b.dim() - a.dim(),
            basis,
            inverse,
        })
    }

    pub fn dim(&self) -> usize {
        self.q_dim
    }

    pub fn kernel(&self) -> &Subspace<S> {
        &self.a
    }

    /// Quotient coordinates of `v ∈ B`.
    pub fn project(&self, v: &[S]) -> Vec<S> {
        let c = self.inverse.apply(v);
        c[self.a_dim..self.a_dim + self.q_dim].to_vec()
    }

    /// The representative of quotient coordinates in the chosen complement.
    pub fn lift(&self, c: &[S]) -> Vec<S> {
        let mut full = vec![S::zero(); self.n];
        full[self.a_dim..self.a_dim + self.q_dim].clone_from_slice(c);
        self.basis.apply(&full)
    }

    /// Matrix of the map induced on `B/A` by `t` (requires `tA ⊆ A`, `tB ⊆ B`).
    pub fn induced(&self, t: &Endo<S>) -> Matrix<S> {
        let mut m = Matrix::zeros(self.q_dim, self.q_dim);
        for j in 0..self.q_dim {
            let img = t.apply(&self.basis.column(self.a_dim + j));
            let c = self.project(&img);
            for i in 0..self.q_dim {
                m[(i, j)] = c[i].clone();
            }
        }
        m
    }

    /// Preimage in `B` of a subspace given in quotient coordinates.
    pub fn preimage(&self, sub: &Subspace<S>, ctx: S::Ctx) -> Result<Subspace<S>> {
        let mut vs = self.a.basis();
        vs.extend(sub.basis().iter().map(|c| self.lift(c)));
        Subspace::span(self.n, &vs, ctx)
    }

    /// Image in quotient coordinates of a subspace of `B`.
    pub fn image_of(&self, sub: &Subspace<S>, ctx: S::Ctx) -> Result<Subspace<S>> {
        let vs: Vec<Vec<S>> = sub.basis().iter().map(|v| self.project(v)).collect();
        Subspace::span(self.q_dim, &vs, ctx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    #[test]
    fn zero_map() {
        let w = monodromy_filtration(&Matrix::<Gq>::zeros(3, 3), Exact).unwrap();
        assert!(w.get(-1).is_zero());
        assert!(w.get(0).is_full());
    }

    #[test]
    fn jordan_block_of_size_two() {
        let n = Matrix::<Gq>::unit(2, 0, 1);
        let w = monodromy_filtration(&n, Exact).unwrap();
        assert_eq!(w.get(-1), Subspace::full(2).image(&n, Exact).unwrap());
        assert_eq!(w.get(0), w.get(-1));
        assert!(w.get(1).is_full());
        assert_eq!(w.jumps(), vec![-1, 1]);
    }

    #[test]
    fn quotient_induces_maps() {
        let n = Matrix::<Gq>::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let a = Subspace::span(3, &[vec![Gq::int(1), Gq::int(0), Gq::int(0)]], Exact).unwrap();
        let q = Quotient::new(&a, &Subspace::full(3), Exact).unwrap();
        assert_eq!(q.dim(), 2);
        let nq = q.induced(&n);
        assert_eq!(nq.nilpotency_index(Exact), Some(2));
    }
}
