//! Elements of `PSL_2(Z)` and their action on cosets.
//!
//! Matrices act on cosets from the right, so `perm(X * Y)` is
//! `perm(X).then(perm(Y))`. With `S = [[0,-1],[1,0]]`, `T = [[1,1],[0,1]]`
//! and `R = S * T` this sends `S`, `R`, `T` to `sigma_S`, `sigma_R`,
//! `sigma_T`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("determinant is {0}, expected 1")]
    Determinant(i128),
}

/// `[[a, b], [c, d]]` up to sign, stored with `c > 0`, or `c = 0` and `d > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MatrixPSL2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MatrixPSL2 {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self, MatrixError> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(MatrixError::Determinant(det));
        }
        Ok(Self::from_entries_unchecked([a, b, c, d]))
    }

    /// Sign-normalizes without checking the determinant.
    pub fn from_entries_unchecked([a, b, c, d]: [i64; 4]) -> Self {
        if c < 0 || (c == 0 && d < 0) {
            MatrixPSL2 {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            MatrixPSL2 { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        MatrixPSL2 {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn s() -> Self {
        Self::from_entries_unchecked([0, -1, 1, 0])
    }

    pub fn t() -> Self {
        Self::from_entries_unchecked([1, 1, 0, 1])
    }

    /// `S * T`.
    pub fn r() -> Self {
        Self::from_entries_unchecked([0, -1, 1, 1])
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .and_then(|p| z.checked_mul(w).and_then(|q| p.checked_add(q)))
                .expect("matrix entry overflow")
        };
        Self::from_entries_unchecked([
            m(self.a, o.a, self.b, o.c),
            m(self.a, o.b, self.b, o.d),
            m(self.c, o.a, self.d, o.c),
            m(self.c, o.b, self.d, o.d),
        ])
    }

    pub fn inverse(&self) -> Self {
        Self::from_entries_unchecked([self.d, -self.b, -self.c, self.a])
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { *self };
        let mut acc = Self::identity();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// Decomposition `M = W_1 W_2 ... W_k` with each `W_i` a power of `S`
    /// or `T`.
    pub fn word(&self) -> Vec<Letter> {
        let mut m = *self;
        let mut out = Vec::new();
        while m.c != 0 {
            let q = m.a.div_euclid(m.c);
            if q != 0 {
                out.push(Letter::T(q));
                m = Self::t().pow(-q).mul(&m);
            }
            out.push(Letter::S);
            m = Self::s().mul(&m);
        }
        if m.b != 0 {
            out.push(Letter::T(m.b));
        }
        out
    }

    /// Permutation of the cosets induced by this matrix.
    pub fn to_permutation(&self, sigma_s: &Permutation, sigma_t: &Permutation) -> Permutation {
        let mut p = Permutation::identity(sigma_s.degree());
        for l in self.word() {
            p = match l {
                Letter::S => p.then(sigma_s),
                Letter::T(e) => p.then(&sigma_t.pow(e)),
            };
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    S,
    T(i64),
}

impl fmt::Display for MatrixPSL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for MatrixPSL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_relations() {
        let (s, t, r) = (MatrixPSL2::s(), MatrixPSL2::t(), MatrixPSL2::r());
        assert!(s.mul(&s).is_identity());
        assert!(r.pow(3).is_identity());
        assert_eq!(s.mul(&t), r);
        assert_eq!(s.mul(&r), t);
    }

    #[test]
    fn word_reconstructs_matrix() {
        for m in [
            MatrixPSL2::new(2, 1, 1, 1).unwrap(),
            MatrixPSL2::new(7, 3, -12, -5).unwrap(),
            MatrixPSL2::new(1, 0, 11, 1).unwrap(),
            MatrixPSL2::new(-3, 5, 1, -2).unwrap(),
            MatrixPSL2::identity(),
        ] {
            let back = m.word().iter().fold(MatrixPSL2::identity(), |acc, l| match l {
                Letter::S => acc.mul(&MatrixPSL2::s()),
                Letter::T(e) => acc.mul(&MatrixPSL2::t().pow(*e)),
            });
            assert_eq!(back, m);
        }
    }

    #[test]
    fn sign_normalization() {
        let m = MatrixPSL2::new(-1, 0, -2, -1).unwrap();
        assert_eq!(m.entries(), [1, 0, 2, 1]);
        assert!(MatrixPSL2::new(1, 1, 1, 1).is_err());
    }
}
