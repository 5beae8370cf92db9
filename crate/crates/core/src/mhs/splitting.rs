use super::bigrading::{deligne_bigrading, Bigrading};
use super::filtration::{DecFiltration, IncFiltration};
use super::lie::in_lambda;
use crate::error::{Error, Result};
use crate::field::{grading_frame, Endo, Matrix, Scalar};

#[derive(Clone, Debug)]
pub struct DeltaSplitting<S> {
    pub delta: Endo<S>,
    /// `e^{-iδ} F`, split over the reals.
    pub f_hat: DecFiltration<S>,
    pub bigrading: Bigrading<S>,
    pub split_bigrading: Bigrading<S>,
}

/// The real `δ ∈ Λ^{-1,-1}` with `e^{-iδ} F` split over `R`.
///
/// With `Y = Y_{(F,W)}`, conjugation satisfies `conj(Y) = Ad(e^{-2iδ}) Y`.
/// Writing `X = -2iδ` as a sum of negative `ad Y`-degrees, the equation
/// `Ad(e^X) Y = conj(Y)` is triangular: the degree `-ℓ` part of the
/// residual fixes `X_{-ℓ}` through `[X_{-ℓ}, Y] = ℓ X_{-ℓ}`.
pub fn delta_split<S: Scalar>(f: &DecFiltration<S>, w: &IncFiltration<S>, ctx: S::Ctx) -> Result<DeltaSplitting<S>> {
    let bigrading = deligne_bigrading(f, w, ctx)?;
    let n = f.ambient_dim();
    let y = bigrading.grading();
    let ybar = y.conj();
    let frame = grading_frame(&y, ctx)?;
    let depth = frame.labels().iter().max().copied().unwrap_or(0) - frame.labels().iter().min().copied().unwrap_or(0);
    let mut x = Matrix::<S>::zeros(n, n);
    for l in 1..=depth {
        let g = x.nilpotent_exp(ctx)?;
        let moved = y.conjugate_by(&g, ctx)?;
        let residual = ybar.sub(&moved);
        let part = frame.block_part(&residual, |row, col| row - col == -l);
        x = x.add(&part.scale(&S::from_ratio(1, l as i64)));
    }
    let g = x.nilpotent_exp(ctx)?;
    if !y.conjugate_by(&g, ctx)?.approx_eq(&ybar, ctx) {
        return Err(Error::SplitSolveFailed("conjugation equation has a nonzero residual".into()));
    }
    // δ = iX/2.
    let delta = x.scale(&S::i().mul(&S::from_ratio(1, 2)));
    if !delta.is_real(ctx) {
        return Err(Error::SplitSolveFailed("delta is not real".into()));
    }
    if !in_lambda(&bigrading, &delta, ctx) {
        return Err(Error::SplitSolveFailed("delta is not in Lambda^{-1,-1}".into()));
    }
    let rot = delta.scale(&S::i().neg()).nilpotent_exp(ctx)?;
    let f_hat = f.transform(&rot, ctx)?;
    let split_bigrading = deligne_bigrading(&f_hat, w, ctx)
        .map_err(|e| Error::SplitSolveFailed(format!("e^(-i delta) F is not a mixed Hodge structure: {e}")))?;
    if !split_bigrading.is_split_real(ctx) {
        return Err(Error::SplitSolveFailed("e^(-i delta) F is not split over R".into()));
    }
    Ok(DeltaSplitting {
        delta,
        f_hat,
        bigrading,
        split_bigrading,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::field::{Exact, Gq};

    fn closing_f(lambda: Gq) -> (DecFiltration<Gq>, IncFiltration<Gq>) {
        let e0 = vec![Gq::int(1), Gq::int(0)];
        let e2 = vec![Gq::int(0), Gq::int(1)];
        let w = IncFiltration::from_generators(2, &BTreeMap::from([(0, vec![e0]), (2, vec![e2])]), Exact).unwrap();
        let f = DecFiltration::from_generators(2, &BTreeMap::from([(1, vec![vec![lambda, Gq::int(1)]])]), Exact).unwrap();
        (f, w)
    }

    #[test]
    fn split_input_has_zero_delta() {
        let (f, w) = closing_f(Gq::ratio(5, 2));
        let d = delta_split(&f, &w, Exact).unwrap();
        assert!(d.delta.is_zero(Exact));
        assert_eq!(d.f_hat, f);
    }

    #[test]
    fn imaginary_part_becomes_delta() {
        let (a, b) = (Gq::ratio(-3, 4), Gq::ratio(7, 5));
        let lambda = Scalar::add(&a, &Scalar::mul(&b, &Gq::i()));
        let (f, w) = closing_f(lambda);
        let d = delta_split(&f, &w, Exact).unwrap();
        // N maps e_2 to e_0.
        let n = Matrix::<Gq>::unit(2, 0, 1);
        assert_eq!(d.delta, n.scale(&b));
        assert_eq!(d.f_hat, closing_f(a).0);
    }
}
