use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Endo, Frame, Matrix, Scalar, Subspace};

/// Increasing filtration `W_k ⊆ W_{k+1}`, zero far below and `V` far above.
///
/// Only the jumps are stored: `steps[k] = W_k` whenever `W_k ≠ W_{k-1}`.
/// The largest key always carries `V`.
#[derive(Clone, PartialEq)]
pub struct IncFiltration<S> {
    n: usize,
    steps: BTreeMap<i32, Subspace<S>>,
}

/// Decreasing filtration `F^p ⊇ F^{p+1}`, `V` far below and zero far above.
///
/// Only the jumps are stored: `steps[p] = F^p` whenever `F^p ≠ F^{p+1}`.
/// The smallest key always carries `V`.
#[derive(Clone, PartialEq)]
pub struct DecFiltration<S> {
    n: usize,
    steps: BTreeMap<i32, Subspace<S>>,
}

impl<S: Scalar> IncFiltration<S> {
    /// Builds `W` from cumulative data: `W_k` is spanned by all vectors listed
    /// at keys `≤ k`. If the listed vectors do not span `V`, the step just
    /// above the largest key is `V`.
    pub fn from_generators(n: usize, gens: &BTreeMap<i32, Vec<Vec<S>>>, ctx: S::Ctx) -> Result<Self> {
        let mut steps = BTreeMap::new();
        let mut acc: Vec<Vec<S>> = Vec::new();
        for (&k, vs) in gens {
            acc.extend(vs.iter().cloned());
            steps.insert(k, Subspace::span(n, &acc, ctx)?);
        }
        Self::from_steps(n, steps, ctx)
    }

    /// Builds `W` from explicit steps `W_k`; missing indices inherit the step below.
    pub fn from_steps(n: usize, steps: BTreeMap<i32, Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let mut out: BTreeMap<i32, Subspace<S>> = BTreeMap::new();
        let mut prev = Subspace::zero(n);
        for (k, sp) in steps {
            if sp.ambient_dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: sp.ambient_dim(),
                });
            }
            if !sp.contains_space(&prev, ctx) {
                return Err(Error::Invalid(format!("weight filtration is not increasing at {k}")));
            }
            if sp.dim() > prev.dim() {
                out.insert(k, sp.clone());
                prev = sp;
            }
        }
        if !prev.is_full() {
            let top = out.keys().next_back().map_or(0, |k| k + 1);
            out.insert(top, Subspace::full(n));
        }
        Ok(IncFiltration { n, steps: out })
    }

    /// `W_k = V` for `k ≥ weight`, zero below.
    pub fn pure(n: usize, weight: i32) -> Self {
        let mut steps = BTreeMap::new();
        if n > 0 {
            steps.insert(weight, Subspace::full(n));
        }
        IncFiltration { n, steps }
    }

    /// `W_k = ⊕_{j≤k} E_j(Y)` for a semisimple `Y` with integer eigenvalues.
    pub fn from_grading(y: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        let spaces = crate::field::integer_eigenspaces(y, ctx)?;
        let n = y.rows();
        let mut steps = BTreeMap::new();
        let mut acc = Vec::new();
        for (k, e) in spaces {
            acc.extend(e.basis());
            steps.insert(k, Subspace::span(n, &acc, ctx)?);
        }
        Self::from_steps(n, steps, ctx)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: i32) -> Subspace<S> {
        self.steps
            .range(..=k)
            .next_back()
            .map_or_else(|| Subspace::zero(self.n), |(_, s)| s.clone())
    }

    /// Indices `k` with `W_k ≠ W_{k-1}`, ascending.
    pub fn jumps(&self) -> Vec<i32> {
        self.steps.keys().copied().collect()
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace<S>> {
        &self.steps
    }

    /// Lowest index with `W_k ≠ 0`.
    pub fn bottom(&self) -> i32 {
        self.steps.keys().next().copied().unwrap_or(0)
    }

    /// Lowest index with `W_k = V`.
    pub fn top(&self) -> i32 {
        self.steps.keys().next_back().copied().unwrap_or(0)
    }

    /// Number of indices between the first and last jump, inclusive.
    pub fn length(&self) -> i32 {
        if self.steps.is_empty() {
            0
        } else {
            self.top() - self.bottom() + 1
        }
    }

    pub fn graded_dim(&self, k: i32) -> usize {
        self.get(k).dim() - self.get(k - 1).dim()
    }

    /// `W[ℓ]_j = W_{j+ℓ}`.
    pub fn shift(&self, l: i32) -> Self {
        IncFiltration {
            n: self.n,
            steps: self.steps.iter().map(|(k, s)| (k - l, s.clone())).collect(),
        }
    }

    pub fn map_steps(&self, f: impl Fn(&Subspace<S>) -> Result<Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| Ok((*k, f(s)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_steps(self.n, steps, ctx)
    }

    /// `g · W` for invertible `g`.
    pub fn transform(&self, g: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        self.map_steps(|s| s.image(g, ctx), ctx)
    }

    pub fn conj(&self, ctx: S::Ctx) -> Self {
        IncFiltration {
            n: self.n,
            steps: self.steps.iter().map(|(k, s)| (*k, s.conj(ctx))).collect(),
        }
    }

    pub fn is_real(&self, ctx: S::Ctx) -> bool {
        self.steps.values().all(|s| s.is_real(ctx))
    }

    pub fn same_as(&self, other: &Self, ctx: S::Ctx) -> bool {
        self.n == other.n
            && self.jumps() == other.jumps()
            && self.steps.values().zip(other.steps.values()).all(|(a, b)| a.same_as(b, ctx))
    }

    /// `T W_k ⊆ W_{k+d}` for every `k`.
    pub fn maps_with_degree(&self, t: &Endo<S>, d: i32, ctx: S::Ctx) -> Result<bool> {
        for (&k, s) in &self.steps {
            if !self.get(k + d).contains_space(&s.image(t, ctx)?, ctx) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn preserved_by(&self, t: &Endo<S>, ctx: S::Ctx) -> Result<bool> {
        self.maps_with_degree(t, 0, ctx)
    }

    /// Restriction to a subspace `U`, in coordinates of the supplied basis of `U`.
    pub fn restrict(&self, basis: &[Vec<S>], ctx: S::Ctx) -> Result<Self> {
        let d = basis.len();
        let u = Matrix::from_columns(self.n, basis);
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| {
                let inter = Subspace::column_space(&u, ctx).intersection(s, ctx)?;
                let coords: Vec<Vec<S>> = inter
                    .basis()
                    .iter()
                    .map(|v| u.solve(v, ctx).ok_or(Error::Invalid("basis does not span".into())))
                    .collect::<Result<_>>()?;
                Ok((*k, Subspace::span(d, &coords, ctx)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_steps(d, steps, ctx)
    }

    /// Checks that `y` is a grading: semisimple with integer eigenvalues and
    /// `W_k = E_k(Y) ⊕ W_{k-1}` for all `k`.
    pub fn is_graded_by(&self, y: &Endo<S>, ctx: S::Ctx) -> bool {
        match Self::from_grading(y, ctx) {
            Ok(w) => w.same_as(self, ctx) && self.preserved_by(y, ctx).unwrap_or(false),
            Err(_) => false,
        }
    }

    /// Some grading of `W` built from greedily chosen complements.
    pub fn any_grading(&self, ctx: S::Ctx) -> Result<Endo<S>> {
        let mut pieces = Vec::new();
        let mut prev = Subspace::zero(self.n);
        for (&k, s) in &self.steps {
            let comp = s.complement_of(&prev, ctx)?;
            pieces.push((k, Subspace::span(self.n, &comp, ctx)?));
            prev = s.clone();
        }
        let frame = Frame::from_pieces(self.n, pieces.iter().map(|(k, s)| (*k, s)), ctx)?;
        Ok(frame.diagonal_operator(|k| S::from_i64(k as i64)))
    }
}

impl<S: Scalar> DecFiltration<S> {
    /// Builds `F` from cumulative data: `F^p` is spanned by all vectors listed
    /// at keys `≥ p`. If they do not span `V`, the step just below the
    /// smallest key is `V`.
    pub fn from_generators(n: usize, gens: &BTreeMap<i32, Vec<Vec<S>>>, ctx: S::Ctx) -> Result<Self> {
        let mut steps = BTreeMap::new();
        let mut acc: Vec<Vec<S>> = Vec::new();
        for (&p, vs) in gens.iter().rev() {
            acc.extend(vs.iter().cloned());
            steps.insert(p, Subspace::span(n, &acc, ctx)?);
        }
        Self::from_steps(n, steps, ctx)
    }

    pub fn from_steps(n: usize, steps: BTreeMap<i32, Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let mut out: BTreeMap<i32, Subspace<S>> = BTreeMap::new();
        let mut prev = Subspace::zero(n);
        for (p, sp) in steps.into_iter().rev() {
            if sp.ambient_dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: sp.ambient_dim(),
                });
            }
            if !sp.contains_space(&prev, ctx) {
                return Err(Error::Invalid(format!("Hodge filtration is not decreasing at {p}")));
            }
            if sp.dim() > prev.dim() {
                out.insert(p, sp.clone());
                prev = sp;
            }
        }
        if !prev.is_full() {
            let bottom = out.keys().next().map_or(0, |p| p - 1);
            out.insert(bottom, Subspace::full(n));
        }
        Ok(DecFiltration { n, steps: out })
    }

    /// Decreasing filtration `F^p = ⊕_{a≥p} E_a` from labelled pieces.
    pub fn from_pieces(n: usize, pieces: &BTreeMap<i32, Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let mut steps = BTreeMap::new();
        let mut acc = Vec::new();
        for (&p, e) in pieces.iter().rev() {
            acc.extend(e.basis());
            steps.insert(p, Subspace::span(n, &acc, ctx)?);
        }
        Self::from_steps(n, steps, ctx)
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: i32) -> Subspace<S> {
        self.steps
            .range(p..)
            .next()
            .map_or_else(|| Subspace::zero(self.n), |(_, s)| s.clone())
    }

    /// Indices `p` with `F^p ≠ F^{p+1}`, ascending.
    pub fn jumps(&self) -> Vec<i32> {
        self.steps.keys().copied().collect()
    }

    pub fn steps(&self) -> &BTreeMap<i32, Subspace<S>> {
        &self.steps
    }

    /// Largest `p` with `F^p = V`.
    pub fn bottom(&self) -> i32 {
        self.steps.keys().next().copied().unwrap_or(0)
    }

    /// Largest `p` with `F^p ≠ 0`.
    pub fn top(&self) -> i32 {
        self.steps.keys().next_back().copied().unwrap_or(0)
    }

    pub fn map_steps(&self, f: impl Fn(&Subspace<S>) -> Result<Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| Ok((*k, f(s)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_steps(self.n, steps, ctx)
    }

    /// `g · F` for invertible `g`.
    pub fn transform(&self, g: &Endo<S>, ctx: S::Ctx) -> Result<Self> {
        self.map_steps(|s| s.image(g, ctx), ctx)
    }

    pub fn conj(&self, ctx: S::Ctx) -> Self {
        DecFiltration {
            n: self.n,
            steps: self.steps.iter().map(|(k, s)| (*k, s.conj(ctx))).collect(),
        }
    }

    pub fn same_as(&self, other: &Self, ctx: S::Ctx) -> bool {
        self.n == other.n
            && self.jumps() == other.jumps()
            && self.steps.values().zip(other.steps.values()).all(|(a, b)| a.same_as(b, ctx))
    }

    /// `T F^p ⊆ F^{p+d}` for every `p`.
    pub fn maps_with_degree(&self, t: &Endo<S>, d: i32, ctx: S::Ctx) -> Result<bool> {
        for (&p, s) in &self.steps {
            if !self.get(p + d).contains_space(&s.image(t, ctx)?, ctx) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn preserved_by(&self, t: &Endo<S>, ctx: S::Ctx) -> Result<bool> {
        self.maps_with_degree(t, 0, ctx)
    }

    pub fn restrict(&self, basis: &[Vec<S>], ctx: S::Ctx) -> Result<Self> {
        let d = basis.len();
        let u = Matrix::from_columns(self.n, basis);
        let uspace = Subspace::column_space(&u, ctx);
        let steps = self
            .steps
            .iter()
            .map(|(k, s)| {
                let inter = uspace.intersection(s, ctx)?;
                let coords: Vec<Vec<S>> = inter
                    .basis()
                    .iter()
                    .map(|v| u.solve(v, ctx).ok_or(Error::Invalid("basis does not span".into())))
                    .collect::<Result<_>>()?;
                Ok((*k, Subspace::span(d, &coords, ctx)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::from_steps(d, steps, ctx)
    }
}

impl<S: std::fmt::Debug> std::fmt::Debug for IncFiltration<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.steps.iter()).finish()
    }
}

impl<S: std::fmt::Debug> std::fmt::Debug for DecFiltration<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_map().entries(self.steps.iter()).finish()
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
    fn generators_are_cumulative() {
        let gens = BTreeMap::from([(0, vec![e(2, 0)]), (2, vec![e(2, 1)])]);
        let w = IncFiltration::from_generators(2, &gens, Exact).unwrap();
        assert_eq!(w.jumps(), vec![0, 2]);
        assert_eq!(w.get(1).dim(), 1);
        assert!(w.get(5).is_full());
        assert_eq!(w.length(), 3);
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![e(2, 1)])]), Exact).unwrap();
        assert_eq!(f.jumps(), vec![0, 1]);
        assert!(f.get(-3).is_full());
        assert!(f.get(2).is_zero());
    }

    #[test]
    fn shift_round_trip() {
        let w = IncFiltration::<Gq>::pure(3, 2);
        assert_eq!(w.shift(0), w);
        assert_eq!(w.shift(4).shift(-4), w);
        assert!(w.shift(2).get(0).is_full());
    }

    #[test]
    fn any_grading_grades() {
        let gens = BTreeMap::from([(-1, vec![e(3, 0)]), (1, vec![e(3, 1), e(3, 2)])]);
        let w = IncFiltration::from_generators(3, &gens, Exact).unwrap();
        let y = w.any_grading(Exact).unwrap();
        assert!(w.is_graded_by(&y, Exact));
    }
}
