//! Scalars: a field with conjugation.
//!
//! Two instantiations are provided. [`Gq`] is the field of Gaussian
//! rationals `a + b i` with `a, b` arbitrary precision rationals; every
//! operation is exact and zero tests are decisive. `Complex<f64>` is the
//! floating instantiation; its zero test takes an explicit [`Tolerance`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Zero-test context of the exact instantiation. Carries nothing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Exact;

/// Absolute zero threshold for the floating instantiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

pub type C64 = Complex<f64>;

pub trait Scalar: Clone + fmt::Debug + Send + Sync + 'static {
    /// Context consulted by [`Scalar::is_zero`].
    type Ctx: Copy + fmt::Debug + Send + Sync;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_i64(n: i64) -> Self;
    fn from_gq(x: &Gq) -> Self;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` only for exact zero.
    fn inv(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    fn is_zero(&self, ctx: Self::Ctx) -> bool;

    /// True only for a literal zero; lets products skip work.
    fn is_structural_zero(&self) -> bool;

    /// Whether zero tests are decisive.
    fn is_exact() -> bool;

    /// Preference when choosing elimination pivots (larger is better).
    fn pivot_weight(&self) -> f64;

    fn re_f64(&self) -> f64;
    fn im_f64(&self) -> f64;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).mul(&Self::from_i64(d).inv().expect("zero denominator"))
    }

    fn is_real(&self, ctx: Self::Ctx) -> bool {
        self.sub(&self.conj()).is_zero(ctx)
    }

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|r| self.mul(&r))
    }

    fn abs_sq(&self) -> Self {
        self.mul(&self.conj())
    }
}

/// Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gq {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gq {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gq { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Gq {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Gq::real(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Gq::real(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `(a/b) + (c/d) i`.
    pub fn complex(a: i64, b: i64, c: i64, d: i64) -> Self {
        Gq::new(
            BigRational::new(BigInt::from(a), BigInt::from(b)),
            BigRational::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    /// Exact value of a finite double.
    pub fn from_f64_exact(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Gq::real)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_exact_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn bits(&self) -> u64 {
        self.re.numer().bits()
            + self.re.denom().bits()
            + self.im.numer().bits()
            + self.im.denom().bits()
    }
}

impl Scalar for Gq {
    type Ctx = Exact;

    fn zero() -> Self {
        Gq::default()
    }
    fn one() -> Self {
        Gq::int(1)
    }
    fn i() -> Self {
        Gq::new(BigRational::zero(), BigRational::one())
    }
    fn from_i64(n: i64) -> Self {
        Gq::int(n)
    }
    fn from_gq(x: &Gq) -> Self {
        x.clone()
    }
    fn add(&self, o: &Self) -> Self {
        Gq::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn sub(&self, o: &Self) -> Self {
        Gq::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq::real(&self.re * &o.re);
        }
        Gq::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn neg(&self) -> Self {
        Gq::new(-&self.re, -&self.im)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_exact_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Gq::real(self.re.recip()));
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(Gq::new(&self.re / &n, -&self.im / &n))
    }
    fn conj(&self) -> Self {
        Gq::new(self.re.clone(), -&self.im)
    }
    fn is_zero(&self, _: Exact) -> bool {
        self.is_exact_zero()
    }
    fn is_structural_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn is_exact() -> bool {
        true
    }
    fn pivot_weight(&self) -> f64 {
        -(self.bits() as f64)
    }
    fn re_f64(&self) -> f64 {
        self.re.to_f64().unwrap_or(f64::NAN)
    }
    fn im_f64(&self) -> f64 {
        self.im.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for C64 {
    type Ctx = Tolerance;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn i() -> Self {
        C64::new(0.0, 1.0)
    }
    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }
    fn from_gq(x: &Gq) -> Self {
        x.to_c64()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if self.re == 0.0 && self.im == 0.0 {
            None
        } else {
            Some(self.inv())
        }
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self, tol: Tolerance) -> bool {
        self.norm() <= tol.0
    }
    fn is_structural_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn is_exact() -> bool {
        false
    }
    fn pivot_weight(&self) -> f64 {
        self.norm()
    }
    fn re_f64(&self) -> f64 {
        self.re
    }
    fn im_f64(&self) -> f64 {
        self.im
    }
}

macro_rules! gq_binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&Gq> for &Gq {
            type Output = Gq;
            fn $m(self, o: &Gq) -> Gq {
                Scalar::$f(self, o)
            }
        }
        impl $tr<Gq> for Gq {
            type Output = Gq;
            fn $m(self, o: Gq) -> Gq {
                Scalar::$f(&self, &o)
            }
        }
        impl $tr<&Gq> for Gq {
            type Output = Gq;
            fn $m(self, o: &Gq) -> Gq {
                Scalar::$f(&self, o)
            }
        }
    };
}

gq_binop!(Add, add, add);
gq_binop!(Sub, sub, sub);
gq_binop!(Mul, mul, mul);

impl Div<&Gq> for &Gq {
    type Output = Gq;
    fn div(self, o: &Gq) -> Gq {
        Scalar::div(self, o).expect("division by zero")
    }
}

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Scalar::neg(&self)
    }
}

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Scalar::neg(self)
    }
}

impl From<i64> for Gq {
    fn from(n: i64) -> Self {
        Gq::int(n)
    }
}

impl From<BigRational> for Gq {
    fn from(r: BigRational) -> Self {
        Gq::real(r)
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &BigRational) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gq {
    /// Prints `a/b+c/d i` style strings, e.g. `3/2-1/4i`, `-i`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re0 = self.re.is_zero();
        let im0 = self.im.is_zero();
        if im0 {
            return write_rational(f, &self.re);
        }
        if !re0 {
            write_rational(f, &self.re)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if (-&self.im).is_one() {
            write!(f, "-i")
        } else {
            write_rational(f, &self.im)?;
            write!(f, "i")
        }
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rational(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid rational '{s}'"));
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Parses the coefficient of `i` (`""`, `"+"`, `"-"` mean ±1).
fn parse_imag(s: &str) -> Result<BigRational, Error> {
    match s {
        "" | "+" => Ok(BigRational::one()),
        "-" => Ok(-BigRational::one()),
        _ => parse_rational(s.strip_prefix('+').unwrap_or(s)),
    }
}

impl FromStr for Gq {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self, Error> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Gq::real(parse_rational(&s)?));
        };
        // Split at the last sign that is not the leading one.
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => {
                let re = parse_rational(&body[..k])?;
                let im = parse_imag(&body[k..])?;
                Ok(Gq::new(re, im))
            }
            None => Ok(Gq::new(BigRational::zero(), parse_imag(body)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gq {
        s.parse().unwrap()
    }

    #[test]
    fn parses_canonical_strings() {
        assert_eq!(p("3/2-1/4i"), Gq::complex(3, 2, -1, 4));
        assert_eq!(p("-i"), Gq::complex(0, 1, -1, 1));
        assert_eq!(p("i"), Gq::i());
        assert_eq!(p("2"), Gq::int(2));
        assert_eq!(p("-7/3"), Gq::ratio(-7, 3));
        assert_eq!(p("1+i"), Gq::complex(1, 1, 1, 1));
        assert_eq!(p(" 5/10 + 2i "), Gq::complex(1, 2, 2, 1));
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "x", "1/0", "3//2", "i i", "1++2i"] {
            assert!(s.parse::<Gq>().is_err(), "{s}");
        }
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3/2-1/4i", "-i", "i", "7", "-1/2+3i", "5/3i"] {
            assert_eq!(p(s).to_string(), s);
            assert_eq!(p(&p(s).to_string()), p(s));
        }
    }

    #[test]
    fn field_axioms_on_samples() {
        let a = Gq::complex(3, 2, -1, 4);
        let b = Gq::complex(-5, 7, 2, 3);
        let ab = Scalar::mul(&a, &b);
        assert_eq!(Scalar::mul(&ab, &b.inv().unwrap()), a);
        assert_eq!(a.conj().conj(), a);
        assert!(Scalar::mul(&a, &a.conj()).is_exact_real());
        assert!(Gq::zero().inv().is_none());
    }

    #[test]
    fn float_zero_test_uses_given_tolerance() {
        let x = C64::new(1e-10, 0.0);
        assert!(Scalar::is_zero(&x, Tolerance(1e-9)));
        assert!(!Scalar::is_zero(&x, Tolerance(1e-12)));
    }
}
