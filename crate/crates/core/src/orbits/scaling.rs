use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::field::{grading_frame, Endo, Scalar};

/// `y^{αY}` for `y = t²`: multiplication by `t^{2αk}` on `E_k(Y)`.
///
/// `Y` must be a real semisimple operator with integer eigenvalues, and
/// `2αk` must be an integer for every eigenvalue `k` so the result is exact.
pub fn scaling_operator<S: Scalar>(y: &Endo<S>, alpha: Rational64, t: &S, ctx: S::Ctx) -> Result<Endo<S>> {
    if !y.is_real(ctx) {
        return Err(Error::NotRealGrading);
    }
    let frame = grading_frame(y, ctx).map_err(|_| Error::NotRealGrading)?;
    if !t.is_real(ctx) || t.is_zero(ctx) {
        return Err(Error::Invalid("t must be a nonzero real number".into()));
    }
    let two_alpha = alpha * 2;
    for &k in frame.labels() {
        if !(two_alpha * k as i64).is_integer() {
            return Err(Error::NonExactPower(format!("y^({alpha}·{k}) with y = t^2")));
        }
    }
    Ok(frame.diagonal_operator(|k| int_pow(t, (two_alpha * k as i64).to_integer())))
}

/// `y^e` for an integer `e`.
pub fn int_pow<S: Scalar>(y: &S, e: i64) -> S {
    let base = if e < 0 { y.inv().expect("nonzero base") } else { y.clone() };
    let mut acc = S::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc.mul(&base);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq, Matrix};

    #[test]
    fn eigenvalue_action() {
        let y = Matrix::<Gq>::from_i64_rows(&[&[0, 0], &[0, 2]]);
        let t = Gq::int(2);
        assert_eq!(scaling_operator(&y, Rational64::new(0, 1), &t, Exact).unwrap(), Matrix::identity(2));
        let s = scaling_operator(&y, Rational64::new(-1, 2), &t, Exact).unwrap();
        assert_eq!(s, Matrix::diagonal(&[Gq::int(1), Gq::ratio(1, 4)]));
    }

    #[test]
    fn rejects_inexact_and_complex() {
        let y = Matrix::<Gq>::from_i64_rows(&[&[1, 0], &[0, 0]]);
        assert!(matches!(
            scaling_operator(&y, Rational64::new(1, 4), &Gq::int(3), Exact),
            Err(Error::NonExactPower(_))
        ));
        let yc = y.scale(&Gq::complex(0, 1, 1, 1));
        assert!(matches!(
            scaling_operator(&yc, Rational64::new(1, 2), &Gq::int(3), Exact),
            Err(Error::NotRealGrading)
        ));
    }

    #[test]
    fn commutes_nilpotent_into_place() {
        // e^{iyN} = y^{-relY/2} e^{iN} y^{relY/2} with [relY, N] = -2N, y = 4.
        let n = Matrix::<Gq>::unit(2, 0, 1);
        let rel_y = Matrix::<Gq>::from_i64_rows(&[&[0, 0], &[0, 2]]);
        let t = Gq::int(2);
        let up = scaling_operator(&rel_y, Rational64::new(1, 2), &t, Exact).unwrap();
        let down = scaling_operator(&rel_y, Rational64::new(-1, 2), &t, Exact).unwrap();
        let i = Gq::complex(0, 1, 1, 1);
        let lhs = n.scale(&i.mul(&Gq::int(4))).nilpotent_exp(Exact).unwrap();
        let rhs = down.mul(&n.scale(&i).nilpotent_exp(Exact).unwrap()).mul(&up);
        assert_eq!(lhs, rhs);
    }
}
