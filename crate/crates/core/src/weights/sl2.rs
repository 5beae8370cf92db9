use super::monodromy::monodromy_filtration;
use crate::error::{Error, Result};
use crate::field::{ad_eig_split, grading_frame, Endo, Matrix, Scalar};
use crate::mhs::IncFiltration;

/// `(n₋, y, n₊)` with `[y, n₋] = -2n₋`, `[y, n₊] = 2n₊`, `[n₊, n₋] = y`.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple<S> {
    pub n_minus: Endo<S>,
    pub y: Endo<S>,
    pub n_plus: Endo<S>,
}

impl<S: Scalar> Sl2Triple<S> {
    /// Name of the first commutator identity that fails, if any.
    pub fn check(&self, ctx: S::Ctx) -> Option<&'static str> {
        let two = S::from_i64(2);
        if !self.y.commutator(&self.n_minus).approx_eq(&self.n_minus.scale(&two.neg()), ctx) {
            return Some("[y, n-] = -2 n-");
        }
        if !self.y.commutator(&self.n_plus).approx_eq(&self.n_plus.scale(&two), ctx) {
            return Some("[y, n+] = 2 n+");
        }
        if !self.n_plus.commutator(&self.n_minus).approx_eq(&self.y, ctx) {
            return Some("[n+, n-] = y");
        }
        None
    }
}

/// The unique `N⁺` completing `(N, H)` to an sl₂-triple, given that `H`
/// grades `W(N)` and `[H, N] = -2N`.
///
/// In an eigenbasis of `H` the unknown `N⁺` may only have entries `(i, j)`
/// with `h_i - h_j = 2`; `[N⁺, N] = H` is then a linear system in those.
pub fn sl2_complete<S: Scalar>(n: &Endo<S>, h: &Endo<S>, ctx: S::Ctx) -> Result<Sl2Triple<S>> {
    let dim = n.rows();
    if !h.commutator(n).approx_eq(&n.scale(&S::from_i64(-2)), ctx) {
        return Err(Error::Precondition("[H, N] != -2N".into()));
    }
    let wn = monodromy_filtration(n, ctx)?;
    if !wn.is_graded_by(h, ctx) {
        return Err(Error::Precondition("H does not grade W(N)".into()));
    }
    let frame = grading_frame(h, ctx)?;
    let labels = frame.labels();
    let nf = frame.to_frame(n);
    let hf = frame.to_frame(h);
    let slots: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .filter(|&(i, j)| labels[i] - labels[j] == 2)
        .collect();
    // ([X, N])_{ab} = Σ_c X_ac N_cb - N_ac X_cb.
    let mut sys: Matrix<S> = Matrix::zeros(dim * dim, slots.len());
    for (u, &(i, j)) in slots.iter().enumerate() {
        for b in 0..dim {
            let r = i * dim + b;
            sys[(r, u)] = sys[(r, u)].add(&nf[(j, b)]);
        }
        for a in 0..dim {
            let r = a * dim + j;
            sys[(r, u)] = sys[(r, u)].sub(&nf[(a, i)]);
        }
    }
    let rhs = hf.as_flat().to_vec();
    let sol = sys
        .solve(&rhs, ctx)
        .ok_or_else(|| Error::NoSolution("no N+ with [N+, N] = H".into()))?;
    let mut xf = Matrix::zeros(dim, dim);
    for (u, &(i, j)) in slots.iter().enumerate() {
        xf[(i, j)] = sol[u].clone();
    }
    let triple = Sl2Triple {
        n_minus: n.clone(),
        y: h.clone(),
        n_plus: frame.from_frame(&xf),
    };
    if let Some(bad) = triple.check(ctx) {
        return Err(Error::NoSolution(format!("completed triple violates {bad}")));
    }
    Ok(triple)
}

/// `(N₀, relY - Y, N₀⁺)` where `N₀` is the `ad Y`-degree-zero part of `N`.
pub fn triple_from_gradings<S: Scalar>(
    n: &Endo<S>,
    rel_y: &Endo<S>,
    y: &Endo<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> Result<Sl2Triple<S>> {
    let rel_w = IncFiltration::from_grading(rel_y, ctx)?;
    if !rel_y.commutator(n).approx_eq(&n.scale(&S::from_i64(-2)), ctx) {
        return Err(Error::Precondition("[relY, N] != -2N".into()));
    }
    if !w.preserved_by(rel_y, ctx)? {
        return Err(Error::Precondition("relY does not preserve W".into()));
    }
    if !w.is_graded_by(y, ctx) {
        return Err(Error::Precondition("Y does not grade W".into()));
    }
    if !rel_w.preserved_by(y, ctx)? {
        return Err(Error::Precondition("Y does not preserve relW".into()));
    }
    let parts = ad_eig_split(y, n, ctx)?;
    let n0 = parts.get(&0).cloned().unwrap_or_else(|| Matrix::zeros(n.rows(), n.rows()));
    sl2_complete(&n0, &rel_y.sub(y), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    #[test]
    fn standard_generators() {
        let n = Matrix::<Gq>::unit(2, 1, 0);
        let h = Matrix::from_i64_rows(&[&[1, 0], &[0, -1]]);
        let t = sl2_complete(&n, &h, Exact).unwrap();
        assert_eq!(t.n_plus, Matrix::unit(2, 0, 1));
        let z = Matrix::<Gq>::zeros(2, 2);
        assert_eq!(sl2_complete(&z, &z, Exact).unwrap().n_plus, z);
    }

    #[test]
    fn three_dimensional_block() {
        let n = Matrix::<Gq>::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let h = Matrix::from_i64_rows(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]);
        let t = sl2_complete(&n, &h, Exact).unwrap();
        assert_eq!(t.n_plus, Matrix::from_i64_rows(&[&[0, 2, 0], &[0, 0, 2], &[0, 0, 0]]));
    }

    #[test]
    fn wrong_grading_is_rejected() {
        let n = Matrix::<Gq>::unit(2, 1, 0);
        let h = Matrix::from_i64_rows(&[&[3, 0], &[0, 1]]);
        assert!(sl2_complete(&n, &h, Exact).is_err());
    }
}
