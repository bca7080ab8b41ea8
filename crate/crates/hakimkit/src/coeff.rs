//! Coefficient domains for truncated series.
//!
//! Two domains are supported and never mixed inside one series:
//! exact Gaussian rationals (pairs of arbitrary-precision rationals) and
//! double-precision complex floats. All series and map types are generic
//! over [`Coeff`]; the exact domain makes algebraic identities testable with
//! `==`, the float domain feeds root finding and orbit iteration.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Field operations a series coefficient must provide.
///
/// `div` and `div_int` require a nonzero divisor; both domains are fields, so
/// no other failure mode exists.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for domains where `==` is an exact mathematical test.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    /// Embed the rational num/den (den != 0).
    fn from_ratio(num: i64, den: i64) -> Self;
    fn mul_int(&self, n: i64) -> Self;
    fn div_int(&self, n: i64) -> Self;
    fn to_c64(&self) -> Complex64;
}

/// Element of Q(i): re + im*i with exact rational parts.
///
/// `BigRational` keeps itself in lowest terms with a positive denominator, so
/// equality is structural.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    /// re_num/re_den + (im_num/im_den) i, denominators nonzero.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            im: BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus re^2 + im^2 as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Exact comparison of the real part against zero; used for sign tests on
    /// exactly computed indices.
    pub fn re_sign(&self) -> i8 {
        if self.re.is_positive() {
            1
        } else if self.re.is_negative() {
            -1
        } else {
            0
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Coeff for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        GaussianRational::from_i64(0, 0)
    }

    fn one() -> Self {
        GaussianRational::from_i64(1, 0)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn div(&self, rhs: &Self) -> Self {
        assert!(!Coeff::is_zero(rhs), "division by zero Gaussian rational");
        let n = rhs.norm_sqr();
        GaussianRational {
            re: (&self.re * &rhs.re + &self.im * &rhs.im) / &n,
            im: (&self.im * &rhs.re - &self.re * &rhs.im) / &n,
        }
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    fn mul_int(&self, n: i64) -> Self {
        let n = BigRational::from_integer(BigInt::from(n));
        GaussianRational {
            re: &self.re * &n,
            im: &self.im * &n,
        }
    }

    fn div_int(&self, n: i64) -> Self {
        assert!(n != 0, "division by zero integer");
        let n = BigRational::from_integer(BigInt::from(n));
        GaussianRational {
            re: &self.re / &n,
            im: &self.im / &n,
        }
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl Coeff for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn neg(&self) -> Self {
        -self
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn mul_int(&self, n: i64) -> Self {
        self * n as f64
    }

    fn div_int(&self, n: i64) -> Self {
        self / n as f64
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// Parse an exact rational literal: optional sign, digits, optional `/digits`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Render a rational as the literal `parse_rational` accepts.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic_is_exact() {
        let a = GaussianRational::from_ratios(1, 3, 1, 2); // 1/3 + i/2
        let b = GaussianRational::from_ratios(2, 1, -1, 4); // 2 - i/4
        let prod = a.mul(&b);
        // (1/3 + i/2)(2 - i/4) = 2/3 + 1/8 + i(1 - 1/12)
        assert_eq!(prod, GaussianRational::from_ratios(19, 24, 11, 12));
        let back = prod.div(&b);
        assert_eq!(back, a);
    }

    #[test]
    fn division_by_gaussian_unit() {
        let i = GaussianRational::from_i64(0, 1);
        let one = GaussianRational::one();
        assert_eq!(one.div(&i), GaussianRational::from_i64(0, -1));
    }

    #[test]
    fn rational_literals_round_trip() {
        for s in ["-3/7", "5", "0", "12/8"] {
            let r = parse_rational(s).unwrap();
            let s2 = format_rational(&r);
            assert_eq!(parse_rational(&s2).unwrap(), r);
        }
        assert_eq!(format_rational(&parse_rational("12/8").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("a").is_none());
        assert!(parse_rational("").is_none());
    }

    #[test]
    fn float_zero_test_is_bitwise() {
        assert!(Coeff::is_zero(&Complex64::new(0.0, 0.0)));
        assert!(!Coeff::is_zero(&Complex64::new(1e-300, 0.0)));
    }
}
