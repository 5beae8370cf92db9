use std::collections::BTreeMap;

use super::filtration::{DecFiltration, IncFiltration};
use crate::error::{Error, Result};
use crate::field::{Endo, Frame, Scalar, Subspace};

/// Decomposition `V = ⊕ I^{p,q}`. Only nonzero pieces are stored.
#[derive(Clone, Debug)]
pub struct Bigrading<S> {
    n: usize,
    pieces: BTreeMap<(i32, i32), Subspace<S>>,
    frame: Frame<S, (i32, i32)>,
}

impl<S: Scalar> Bigrading<S> {
    /// Wraps pieces that form a direct sum of `V`.
    pub fn from_pieces(n: usize, pieces: BTreeMap<(i32, i32), Subspace<S>>, ctx: S::Ctx) -> Result<Self> {
        let pieces: BTreeMap<_, _> = pieces.into_iter().filter(|(_, s)| !s.is_zero()).collect();
        let frame = Frame::from_pieces(n, pieces.iter().map(|(l, s)| (*l, s)), ctx)?;
        Ok(Bigrading { n, pieces, frame })
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, p: i32, q: i32) -> Subspace<S> {
        self.pieces.get(&(p, q)).cloned().unwrap_or_else(|| Subspace::zero(self.n))
    }

    pub fn pieces(&self) -> &BTreeMap<(i32, i32), Subspace<S>> {
        &self.pieces
    }

    /// Basis adapted to the pieces, each vector labelled by its `(p, q)`.
    pub fn frame(&self) -> &Frame<S, (i32, i32)> {
        &self.frame
    }

    pub fn hodge_numbers(&self) -> BTreeMap<(i32, i32), usize> {
        self.pieces.iter().map(|(l, s)| (*l, s.dim())).collect()
    }

    /// Span of the pieces whose label satisfies `pred`.
    pub fn span_where(&self, pred: impl Fn(i32, i32) -> bool, ctx: S::Ctx) -> Subspace<S> {
        self.frame.span_where(|(p, q)| pred(p, q), ctx)
    }

    /// `Y` acting by `p + q` on `I^{p,q}`.
    pub fn grading(&self) -> Endo<S> {
        self.frame.diagonal_operator(|(p, q)| S::from_i64((p + q) as i64))
    }

    /// `conj(I^{p,q}) = I^{q,p}` for all pieces.
    pub fn is_split_real(&self, ctx: S::Ctx) -> bool {
        self.pieces
            .iter()
            .all(|(&(p, q), s)| s.conj(ctx).same_as(&self.get(q, p), ctx))
    }

    /// `T I^{p,q} ⊆ I^{p+r,q+s}` for every piece.
    pub fn maps_with_bidegree(&self, t: &Endo<S>, r: i32, s: i32, ctx: S::Ctx) -> Result<Option<(i32, i32)>> {
        for (&(p, q), sp) in &self.pieces {
            if !self.get(p + r, q + s).contains_space(&sp.image(t, ctx)?, ctx) {
                return Ok(Some((p, q)));
            }
        }
        Ok(None)
    }

    /// Checks properties (1)-(3) against `(F, W)`; the error names the first
    /// failure.
    pub fn verify(&self, f: &DecFiltration<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> std::result::Result<(), String> {
        let total: usize = self.pieces.values().map(Subspace::dim).sum();
        let all = Subspace::sum_all(self.n, self.pieces.values(), ctx).map_err(|e| e.to_string())?;
        if total != self.n || !all.is_full() {
            return Err("pieces do not form a direct sum decomposition of V".into());
        }
        let (plo, phi) = self.p_range(f);
        for p in plo..=phi + 1 {
            let lhs = f.get(p);
            let rhs = self.span_where(|a, _| a >= p, ctx);
            if !lhs.same_as(&rhs, ctx) {
                return Err(format!("property (1) fails: F^{p} is not the sum of I^{{a,b}} with a >= {p}"));
            }
        }
        let klo = w.bottom().min(self.pieces.keys().map(|(p, q)| p + q).min().unwrap_or(0));
        let khi = w.top().max(self.pieces.keys().map(|(p, q)| p + q).max().unwrap_or(0));
        for k in klo - 1..=khi {
            let lhs = w.get(k);
            let rhs = self.span_where(|a, b| a + b <= k, ctx);
            if !lhs.same_as(&rhs, ctx) {
                return Err(format!("property (2) fails: W_{k} is not the sum of I^{{a,b}} with a+b <= {k}"));
            }
        }
        for (&(p, q), sp) in &self.pieces {
            let lower = self.span_where(|r, s| r < q && s < p, ctx);
            let lhs = sp.conj(ctx).sum(&lower, ctx).map_err(|e| e.to_string())?;
            let rhs = self.get(q, p).sum(&lower, ctx).map_err(|e| e.to_string())?;
            if !lhs.same_as(&rhs, ctx) {
                return Err(format!(
                    "property (3) fails: conj(I^{{{p},{q}}}) differs from I^{{{q},{p}}} modulo lower terms"
                ));
            }
        }
        Ok(())
    }

    fn p_range(&self, f: &DecFiltration<S>) -> (i32, i32) {
        let lo = self.pieces.keys().map(|k| k.0).min().unwrap_or(0).min(f.bottom());
        let hi = self.pieces.keys().map(|k| k.0).max().unwrap_or(0).max(f.top());
        (lo, hi)
    }
}

/// Deligne's bigrading of `(F, W)`; `NotMhs` if the pair is not a mixed
/// Hodge structure.
///
/// `I^{p,q} = F^p ∩ W_{p+q} ∩ (conj(F)^q ∩ W_{p+q} + Σ_{j≥1} conj(F)^{q-j} ∩ W_{p+q-j-1})`
pub fn deligne_bigrading<S: Scalar>(
    f: &DecFiltration<S>,
    w: &IncFiltration<S>,
    ctx: S::Ctx,
) -> Result<Bigrading<S>> {
    let n = f.ambient_dim();
    if w.ambient_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w.ambient_dim(),
        });
    }
    if !w.is_real(ctx) {
        return Err(Error::NotMhs("weight filtration is not defined over the reals".into()));
    }
    let fbar = f.conj(ctx);
    let (lo, hi) = (f.bottom(), f.top());
    let wlo = w.bottom();
    let mut pieces = BTreeMap::new();
    for p in lo..=hi {
        let fp = f.get(p);
        for q in lo..=hi {
            let k = p + q;
            let wk = w.get(k);
            let head = fp.intersection(&wk, ctx)?;
            if head.is_zero() {
                continue;
            }
            let mut tail = fbar.get(q).intersection(&wk, ctx)?;
            let mut j = 1;
            while k - j > wlo {
                let term = fbar.get(q - j).intersection(&w.get(k - j - 1), ctx)?;
                tail = tail.sum(&term, ctx)?;
                j += 1;
            }
            let piece = head.intersection(&tail, ctx)?;
            if !piece.is_zero() {
                pieces.insert((p, q), piece);
            }
        }
    }
    let total: usize = pieces.values().map(Subspace::dim).sum();
    if total != n {
        return Err(Error::NotMhs(format!(
            "candidate pieces have total dimension {total}, expected {n}"
        )));
    }
    let b = Bigrading::from_pieces(n, pieces, ctx).map_err(|_| Error::NotMhs("candidate pieces are not independent".into()))?;
    b.verify(f, w, ctx).map_err(Error::NotMhs)?;
    Ok(b)
}

pub fn is_split_real<S: Scalar>(f: &DecFiltration<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<bool> {
    Ok(deligne_bigrading(f, w, ctx)?.is_split_real(ctx))
}

/// `Y_{(F,W)}`: multiplication by `p + q` on `I^{p,q}`.
pub fn grading_of<S: Scalar>(f: &DecFiltration<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<Endo<S>> {
    Ok(deligne_bigrading(f, w, ctx)?.grading())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    fn closing(lambda: Gq) -> (DecFiltration<Gq>, IncFiltration<Gq>) {
        let e0 = vec![Gq::int(1), Gq::int(0)];
        let e2 = vec![Gq::int(0), Gq::int(1)];
        let w = IncFiltration::from_generators(2, &BTreeMap::from([(0, vec![e0]), (2, vec![e2])]), Exact).unwrap();
        let v = vec![lambda, Gq::int(1)];
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![v])]), Exact).unwrap();
        (f, w)
    }

    #[test]
    fn hodge_tate_pieces() {
        let lambda = Gq::complex(3, 2, -1, 5);
        let (f, w) = closing(lambda.clone());
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        assert_eq!(b.get(1, 1), Subspace::span(2, &[vec![lambda, Gq::int(1)]], Exact).unwrap());
        assert_eq!(b.get(0, 0), Subspace::span(2, &[vec![Gq::int(1), Gq::int(0)]], Exact).unwrap());
        assert!(!b.is_split_real(Exact));
        let y = b.grading();
        assert_eq!(y.apply(&[Gq::int(1), Gq::int(0)]), vec![Gq::int(0), Gq::int(0)]);
    }

    #[test]
    fn split_iff_lambda_real() {
        let (f, w) = closing(Gq::ratio(7, 3));
        assert!(is_split_real(&f, &w, Exact).unwrap());
        let (f, w) = closing(Gq::i());
        assert!(!is_split_real(&f, &w, Exact).unwrap());
    }

    #[test]
    fn pure_weight_one() {
        // F^1 = span(e1 + i e2), pure of weight 1.
        let w = IncFiltration::<Gq>::pure(2, 1);
        let v = vec![Gq::int(1), Gq::i()];
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![v.clone()])]), Exact).unwrap();
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        assert_eq!(b.get(1, 0), Subspace::span(2, &[v], Exact).unwrap());
        assert_eq!(b.get(0, 1), b.get(1, 0).conj(Exact));
        assert!(b.is_split_real(Exact));
    }

    #[test]
    fn real_line_in_weight_one_is_not_mhs() {
        let w = IncFiltration::<Gq>::pure(2, 1);
        let v = vec![Gq::int(1), Gq::int(2)];
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![v])]), Exact).unwrap();
        assert!(matches!(deligne_bigrading(&f, &w, Exact), Err(Error::NotMhs(_))));
    }

    #[test]
    fn perturbed_piece_is_rejected() {
        let (f, w) = closing(Gq::complex(1, 1, 1, 1));
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        let mut pieces = b.pieces().clone();
        pieces.insert((1, 1), Subspace::span(2, &[vec![Gq::int(4), Gq::int(1)]], Exact).unwrap());
        let bad = Bigrading::from_pieces(2, pieces, Exact).unwrap();
        assert!(bad.verify(&f, &w, Exact).is_err());
    }
}
