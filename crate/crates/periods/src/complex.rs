//! Arbitrary precision complex numbers as pairs of MPFR floats.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Bits needed for `digits` decimal digits, with some guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

/// `10^-e` at precision `prec`.
pub fn ten_pow_neg(e: f64, prec: u32) -> Float {
    Float::with_val(prec, 10).pow(Float::with_val(prec, -e))
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::from_f64(0.0, 0.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    /// Parse decimal strings, e.g. `("0.332234", "0.744371")`.
    pub fn parse(re: &str, im: &str, prec: u32) -> Option<Self> {
        Some(BigComplex {
            re: Float::with_val(prec, Float::parse(re).ok()?),
            im: Float::with_val(prec, Float::parse(im).ok()?),
        })
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Float {
        Float::with_val(self.prec(), self.re.square_ref()) + Float::with_val(self.prec(), self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, x: &Float) -> Self {
        BigComplex::new(
            Float::with_val(self.prec(), &self.re * x),
            Float::with_val(self.prec(), &self.im * x),
        )
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex::new(
            Float::with_val(self.prec(), &self.re / &n),
            Float::with_val(self.prec(), -Float::with_val(self.prec(), &self.im / &n)),
        )
    }

    pub fn div(&self, o: &Self) -> Self {
        self * &o.recip()
    }

    /// `exp(self)`.
    pub fn exp(&self) -> Self {
        let r = Float::with_val(self.prec(), self.re.exp_ref());
        let (s, c) = Float::with_val(self.prec(), &self.im).sin_cos(Float::new(self.prec()));
        BigComplex::new(Float::with_val(self.prec(), &r * &c), r * s)
    }

    /// `exp(2 pi i self)`.
    pub fn exp_2pi_i(&self) -> Self {
        let tp = pi(self.prec()) * 2u32;
        BigComplex::new(
            -Float::with_val(self.prec(), &self.im * &tp),
            Float::with_val(self.prec(), &self.re * &tp),
        )
        .exp()
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::from_f64(1.0, 0.0, self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal strings with `digits` significant digits.
    pub fn to_strings(&self, digits: usize) -> (String, String) {
        (
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits)),
        )
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &o.re),
            Float::with_val(p, &self.im + &o.im),
        )
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &o.re),
            Float::with_val(p, &self.im - &o.im),
        )
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec();
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        BigComplex::new(rr - ii, ri + ir)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_strings(20);
        write!(f, "{re} + {im}i")
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let p = 200;
        let a = BigComplex::from_f64(1.0, 2.0, p);
        let b = BigComplex::from_f64(3.0, -1.0, p);
        assert_eq!((&a * &b).to_f64_pair(), (5.0, 5.0));
        let q = a.div(&b);
        let back = &q * &b;
        assert!((&back - &a).abs() < 1e-55);
        assert_eq!(a.powu(3).to_f64_pair(), (-11.0, -2.0));
    }

    #[test]
    fn exponential() {
        let p = 300;
        // exp(2 pi i * i) = e^{-2 pi}
        let e = BigComplex::from_f64(0.0, 1.0, p).exp_2pi_i();
        let want = (pi(p) * -2i32).exp();
        assert!(Float::with_val(p, &e.re - &want).abs() < 1e-80);
        assert!(e.im.clone().abs() < 1e-80);
        let h = BigComplex::from_f64(0.25, 0.0, p).exp_2pi_i();
        assert!(Float::with_val(p, &h.im - 1u32).abs() < 1e-80);
    }
}
