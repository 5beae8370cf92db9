use std::collections::BTreeMap;

use super::filtration::IncFiltration;
use crate::error::{Error, Result};
use crate::field::{extend_basis, Endo, Matrix, Scalar, Subspace};

/// Graded Hodge numbers together with the forms `S_k` on `Gr^W_k`, each
/// written in the basis of classes of user-supplied lifts.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarizationSystem<S> {
    pub hodge_numbers: BTreeMap<(i32, i32), usize>,
    pub lifts: BTreeMap<i32, Vec<Vec<S>>>,
    pub forms: BTreeMap<i32, Matrix<S>>,
}

/// Linear maps `Q_k : V → Gr^W_k` (coordinates in the lift basis), valid on `W_k`.
#[derive(Clone, Debug)]
pub struct GradedCoords<S> {
    pub quotient: BTreeMap<i32, Matrix<S>>,
    /// Lifts as columns, per weight.
    pub lifts: BTreeMap<i32, Matrix<S>>,
}

impl<S: Scalar> GradedCoords<S> {
    /// Quotient coordinates relative to the given lifts; errors unless the
    /// classes of the lifts form a basis of each `Gr^W_k`.
    pub fn new(w: &IncFiltration<S>, lifts: &BTreeMap<i32, Vec<Vec<S>>>, ctx: S::Ctx) -> Result<Self> {
        let n = w.ambient_dim();
        let mut quotient = BTreeMap::new();
        let mut lift_cols = BTreeMap::new();
        for k in lifts.keys() {
            if w.graded_dim(*k) == 0 && !lifts[k].is_empty() {
                return Err(Error::Invalid(format!("lifts given for weight {k} where Gr^W vanishes")));
            }
        }
        for k in w.jumps() {
            let d = w.graded_dim(k);
            let ls = lifts.get(&k).cloned().unwrap_or_default();
            if ls.len() != d {
                return Err(Error::Invalid(format!(
                    "weight {k}: expected {d} graded lifts, found {}",
                    ls.len()
                )));
            }
            let wk = w.get(k);
            if ls.iter().any(|v| v.len() != n || !wk.contains(v, ctx)) {
                return Err(Error::Invalid(format!("weight {k}: a lift is not in W_{k}")));
            }
            let below = w.get(k - 1);
            let mut cols = ls.clone();
            cols.extend(below.basis());
            let span = Subspace::span(n, &cols, ctx)?;
            if span.dim() != wk.dim() {
                return Err(Error::Invalid(format!(
                    "weight {k}: lift classes are not a basis of Gr^W_{k}"
                )));
            }
            cols.extend(extend_basis(&cols, &Matrix::<S>::identity(n).row_vecs(), n, ctx)?);
            let inv = Matrix::from_columns(n, &cols).inverse(ctx)?;
            let q = Matrix::from_rows((0..d).map(|i| inv.row(i).to_vec()).collect())?;
            quotient.insert(k, q);
            lift_cols.insert(k, Matrix::from_columns(n, &ls));
        }
        Ok(GradedCoords {
            quotient,
            lifts: lift_cols,
        })
    }

    pub fn weights(&self) -> impl Iterator<Item = i32> + '_ {
        self.quotient.keys().copied()
    }

    /// Class of `v ∈ W_k` in `Gr^W_k`.
    pub fn class(&self, k: i32, v: &[S]) -> Vec<S> {
        self.quotient.get(&k).map_or_else(Vec::new, |q| q.apply(v))
    }

    /// Matrix of the map induced by `t` on `Gr^W_k` (requires `t W ⊆ W`).
    pub fn graded_action(&self, k: i32, t: &Endo<S>) -> Matrix<S> {
        let q = &self.quotient[&k];
        let l = &self.lifts[&k];
        q.mul(t).mul(l)
    }
}

impl<S: Scalar> PolarizationSystem<S> {
    pub fn h(&self, p: i32, q: i32) -> usize {
        self.hodge_numbers.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Checks the data against `W`: lifts, form parity and nondegeneracy,
    /// Hodge number sums. Returns the quotient coordinates.
    pub fn validate(&self, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<GradedCoords<S>> {
        let gc = GradedCoords::new(w, &self.lifts, ctx)?;
        for k in w.jumps() {
            let d = w.graded_dim(k);
            if self.lifts[&k].iter().any(|v| v.iter().any(|x| !x.is_real(ctx))) {
                return Err(Error::Invalid(format!("weight {k}: graded lifts must be real")));
            }
            let s = self
                .forms
                .get(&k)
                .ok_or_else(|| Error::Invalid(format!("missing form S_{k}")))?;
            if s.rows() != d || s.cols() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: s.rows(),
                });
            }
            if !s.is_real(ctx) {
                return Err(Error::Invalid(format!("S_{k} is not real")));
            }
            let expected = if k.rem_euclid(2) == 0 { s.clone() } else { s.neg() };
            if !s.transpose().approx_eq(&expected, ctx) {
                return Err(Error::Invalid(format!("S_{k} has the wrong symmetry for weight {k}")));
            }
            if s.rank(ctx) != d {
                return Err(Error::Invalid(format!("S_{k} is degenerate")));
            }
            let hsum: usize = self
                .hodge_numbers
                .iter()
                .filter(|((p, q), _)| p + q == k)
                .map(|(_, h)| *h)
                .sum();
            if hsum != d {
                return Err(Error::Invalid(format!(
                    "Hodge numbers of weight {k} sum to {hsum}, but dim Gr^W_{k} = {d}"
                )));
            }
        }
        for (&(p, q), &h) in &self.hodge_numbers {
            if h > 0 && w.graded_dim(p + q) == 0 {
                return Err(Error::Invalid(format!("h^{{{p},{q}}} > 0 but Gr^W_{} = 0", p + q)));
            }
        }
        Ok(gc)
    }

    /// `S_k([u], [v])` for `u, v ∈ W_k`.
    pub fn pair(&self, gc: &GradedCoords<S>, k: i32, u: &[S], v: &[S]) -> S {
        let cu = gc.class(k, u);
        let cv = gc.class(k, v);
        let s = &self.forms[&k];
        let sv = s.apply(&cv);
        crate::field::dot(&cu, &sv)
    }

    /// Same system with lifts moved by `g`; the forms are unchanged.
    pub fn transform(&self, g: &Endo<S>) -> Self {
        PolarizationSystem {
            hodge_numbers: self.hodge_numbers.clone(),
            lifts: self
                .lifts
                .iter()
                .map(|(k, ls)| (*k, ls.iter().map(|v| g.apply(v)).collect()))
                .collect(),
            forms: self.forms.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    #[test]
    fn closing_example_system_validates() {
        let gens = BTreeMap::from([
            (0, vec![vec![Gq::int(1), Gq::int(0)]]),
            (2, vec![vec![Gq::int(0), Gq::int(1)]]),
        ]);
        let w = IncFiltration::from_generators(2, &gens, Exact).unwrap();
        let p = PolarizationSystem {
            hodge_numbers: BTreeMap::from([((0, 0), 1), ((1, 1), 1)]),
            lifts: gens.clone(),
            forms: BTreeMap::from([(0, Matrix::from_i64_rows(&[&[1]])), (2, Matrix::from_i64_rows(&[&[1]]))]),
        };
        let gc = p.validate(&w, Exact).unwrap();
        // e_2 + 5 e_0 has class e_2 in Gr_2.
        assert_eq!(gc.class(2, &[Gq::int(5), Gq::int(1)]), vec![Gq::int(1)]);

        let mut bad = p.clone();
        bad.forms.insert(2, Matrix::from_i64_rows(&[&[0]]));
        assert!(bad.validate(&w, Exact).is_err());
    }

    #[test]
    fn odd_weight_needs_antisymmetric_form() {
        let w = IncFiltration::<Gq>::pure(2, 1);
        let p = PolarizationSystem {
            hodge_numbers: BTreeMap::from([((1, 0), 1), ((0, 1), 1)]),
            lifts: BTreeMap::from([(1, Matrix::<Gq>::identity(2).row_vecs())]),
            forms: BTreeMap::from([(1, Matrix::from_i64_rows(&[&[1, 0], &[0, 1]]))]),
        };
        assert!(p.validate(&w, Exact).is_err());
        let mut ok = p;
        ok.forms.insert(1, Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]));
        assert!(ok.validate(&w, Exact).is_ok());
    }
}
