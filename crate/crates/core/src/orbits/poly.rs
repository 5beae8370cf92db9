use crate::error::{Error, Result};
use crate::field::{Endo, Matrix, Scalar};

/// Matrix-valued polynomial `Σ_k c_k s^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly<S> {
    n: usize,
    coeffs: Vec<Endo<S>>,
}

impl<S: Scalar> MatrixPoly<S> {
    pub fn new(n: usize, coeffs: Vec<Endo<S>>) -> Result<Self> {
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: coeffs.iter().map(Matrix::rows).find(|&r| r != n).unwrap_or(n),
            });
        }
        Ok(MatrixPoly { n, coeffs })
    }

    pub fn constant(c: Endo<S>) -> Self {
        MatrixPoly {
            n: c.rows(),
            coeffs: vec![c],
        }
    }

    pub fn coeffs(&self) -> &[Endo<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Endo<S> {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.n, self.n))
    }

    pub fn eval(&self, s: &S) -> Endo<S> {
        let mut acc = Matrix::zeros(self.n, self.n);
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(s).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&S::from_i64(k as i64)))
            .collect();
        MatrixPoly { n: self.n, coeffs }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return MatrixPoly {
                n: self.n,
                coeffs: Vec::new(),
            };
        }
        let mut coeffs = vec![Matrix::zeros(self.n, self.n); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        MatrixPoly { n: self.n, coeffs }
    }

    fn add(&self, o: &Self) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        MatrixPoly {
            n: self.n,
            coeffs: (0..len).map(|k| self.coeff(k).add(&o.coeff(k))).collect(),
        }
    }

    fn scale(&self, c: &S) -> Self {
        MatrixPoly {
            n: self.n,
            coeffs: self.coeffs.iter().map(|m| m.scale(c)).collect(),
        }
    }

    fn is_zero(&self, ctx: S::Ctx) -> bool {
        self.coeffs.iter().all(|c| c.is_zero(ctx))
    }

    /// `exp` of a polynomial that is nilpotent at every `s`; then its `n`-th
    /// power vanishes identically and the series is finite.
    pub fn exp(&self, ctx: S::Ctx) -> Result<Self> {
        let mut term = MatrixPoly::constant(Matrix::identity(self.n));
        let mut acc = term.clone();
        for k in 1..=self.n {
            term = term.mul(self).scale(&S::from_i64(k as i64).inv().expect("nonzero"));
            if k == self.n {
                if !term.is_zero(ctx) {
                    return Err(Error::NotNilpotent);
                }
            } else {
                acc = acc.add(&term);
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Exact, Gq};

    #[test]
    fn exp_of_linear_curve() {
        let a = Matrix::<Gq>::unit(2, 0, 1);
        let p = MatrixPoly::new(2, vec![Matrix::zeros(2, 2), a.clone()]).unwrap();
        let e = p.exp(Exact).unwrap();
        let s = Gq::ratio(3, 7);
        assert_eq!(e.eval(&s), Matrix::identity(2).add(&a.scale(&s)));
        assert_eq!(e.derivative().eval(&s), a);
    }

    #[test]
    fn non_nilpotent_curve_is_rejected() {
        let p = MatrixPoly::new(1, vec![Matrix::<Gq>::zeros(1, 1), Matrix::identity(1)]).unwrap();
        assert!(p.exp(Exact).is_err());
    }
}
