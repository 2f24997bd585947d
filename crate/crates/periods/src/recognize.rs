//! Integer relations by LLL, and recognition of algebraic numbers.

use rug::{Float, Integer, Rational};
use thiserror::Error;

use crate::complex::BigComplex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizeError {
    #[error("{digits} digits cannot certify degree {degree} relations with {bits}-bit coefficients")]
    InsufficientPrecision { digits: u32, degree: usize, bits: u32 },
    #[error("degree must be at least 1")]
    ZeroDegree,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Recognition {
    Rational {
        value: Rational,
        margin: f64,
    },
    /// Coefficients from the constant term up, primitive, leading term
    /// positive.
    Polynomial {
        coefficients: Vec<Integer>,
        margin: f64,
    },
    Unrecognized,
}

impl Recognition {
    pub fn rational(&self) -> Option<&Rational> {
        match self {
            Recognition::Rational { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn coefficients(&self) -> Option<Vec<Integer>> {
        match self {
            Recognition::Rational { value, .. } => {
                Some(vec![-Integer::from(value.numer()), value.denom().clone()])
            }
            Recognition::Polynomial { coefficients, .. } => Some(coefficients.clone()),
            Recognition::Unrecognized => None,
        }
    }

    /// Ratio of the second to the first vector length of the reduced
    /// basis; large means the relation stands out.
    pub fn margin(&self) -> Option<f64> {
        match self {
            Recognition::Rational { margin, .. } | Recognition::Polynomial { margin, .. } => {
                Some(*margin)
            }
            Recognition::Unrecognized => None,
        }
    }
}

fn dot(x: &[Integer], y: &[Integer]) -> Integer {
    x.iter()
        .zip(y)
        .fold(Integer::new(), |acc, (a, b)| acc + Integer::from(a * b))
}

/// LLL reduction (`delta = 3/4`) of linearly independent integer vectors,
/// in exact integer arithmetic throughout.
pub fn lll_reduce(basis: &mut [Vec<Integer>]) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    // 1-based working copies
    let mut b: Vec<Vec<Integer>> = vec![Vec::new()];
    b.extend(basis.iter().cloned());
    let mut d = vec![Integer::new(); n + 1];
    d[0] = Integer::from(1);
    d[1] = dot(&b[1], &b[1]);
    let mut lam = vec![vec![Integer::new(); n + 1]; n + 1];

    fn red(k: usize, l: usize, b: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer]) {
        let two_lam = Integer::from(&lam[k][l] * 2u32);
        if two_lam.cmp_abs(&d[l]).is_gt() {
            let q = (two_lam + &d[l]).div_rem_floor(Integer::from(&d[l] * 2u32)).0;
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= Integer::from(&q * y);
            }
            lam[k][l] -= Integer::from(&q * &d[l]);
            for i in 1..l {
                let t = Integer::from(&q * &lam[l][i]);
                lam[k][i] -= t;
            }
        }
    }

    let (mut k, mut kmax) = (2usize, 1usize);
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 1..j {
                    u = (Integer::from(&d[i] * &u) - Integer::from(&lam[k][i] * &lam[j][i]))
                        .div_exact(&d[i - 1]);
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(u != 0, "LLL input vectors are dependent");
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &mut lam, &d);
            let lhs = Integer::from(&d[k] * &d[k - 2]) * 4u32;
            let rhs = Integer::from(d[k - 1].square_ref()) * 3u32
                - Integer::from(lam[k][k - 1].square_ref()) * 4u32;
            if lhs < rhs {
                b.swap(k, k - 1);
                for j in 1..k - 1 {
                    let t = std::mem::take(&mut lam[k][j]);
                    lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
                }
                let l = lam[k][k - 1].clone();
                let bb = (Integer::from(&d[k - 2] * &d[k]) + Integer::from(l.square_ref()))
                    .div_exact(&d[k - 1]);
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (Integer::from(&d[k] * &lam[i][k - 1]) - Integer::from(&l * &t))
                        .div_exact(&d[k - 1]);
                    lam[i][k - 1] =
                        (Integer::from(&bb * &t) + Integer::from(&l * &lam[i][k])).div_exact(&d[k]);
                }
                d[k - 1] = bb;
                k = (k - 1).max(2);
            } else {
                for l in (1..k - 1).rev() {
                    red(k, l, &mut b, &mut lam, &d);
                }
                k += 1;
                break;
            }
        }
    }
    for (dst, src) in basis.iter_mut().zip(b.into_iter().skip(1)) {
        *dst = src;
    }
}

fn norm(v: &[Integer]) -> f64 {
    Float::with_val(64, dot(v, v)).sqrt().to_f64()
}

/// Smallest-degree integer polynomial with a root at `x`, searched by LLL
/// on `(e_i, round(10^P Re x^i), round(10^P Im x^i))` for `i = 0..=d`,
/// trusting `digits` = `P` decimal digits of `x`.
///
/// Requires `P log2(10) >= (max_degree + 1) * max_coeff_bits + 20`, which
/// keeps chance relations above the coefficient bound.
pub fn recognize_algebraic(
    x: &BigComplex,
    max_degree: usize,
    max_coeff_bits: u32,
    digits: u32,
) -> Result<Recognition, RecognizeError> {
    if max_degree == 0 {
        return Err(RecognizeError::ZeroDegree);
    }
    let p_bits = (digits as f64 * std::f64::consts::LOG2_10).floor() as u64;
    if p_bits < (max_degree as u64 + 1) * max_coeff_bits as u64 + 20 {
        return Err(RecognizeError::InsufficientPrecision {
            digits,
            degree: max_degree,
            bits: max_coeff_bits,
        });
    }
    let prec = x.prec().max(p_bits as u32 + 64);
    let scale = Float::with_val(prec, Integer::from(Integer::u_pow_u(10, digits)));
    let x = BigComplex::new(Float::with_val(prec, &x.re), Float::with_val(prec, &x.im));
    let mut powers = vec![BigComplex::from_f64(1.0, 0.0, prec)];
    for _ in 0..max_degree {
        let next = powers.last().unwrap() * &x;
        powers.push(next);
    }
    let round = |f: &Float| -> Integer {
        Float::with_val(prec, f * &scale)
            .round()
            .to_integer()
            .expect("finite")
    };
    for d in 1..=max_degree {
        let mut basis: Vec<Vec<Integer>> = (0..=d)
            .map(|i| {
                let mut row = vec![Integer::new(); d + 1];
                row[i] = Integer::from(1);
                row.push(round(&powers[i].re));
                row.push(round(&powers[i].im));
                row
            })
            .collect();
        lll_reduce(&mut basis);
        let mut c: Vec<Integer> = basis[0][..=d].to_vec();
        if c[d] == 0 || c.iter().any(|a| a.significant_bits() > max_coeff_bits) {
            continue;
        }
        // residual check against the trusted digits
        let mut value = BigComplex::zero(prec);
        let mut size = Float::with_val(64, 0);
        for (ci, pi) in c.iter().zip(&powers) {
            let f = Float::with_val(prec, ci);
            value = &value + &pi.scale(&f);
            size += Float::with_val(64, f.abs() * pi.abs());
        }
        let tol = size * Float::with_val(64, Integer::from(Integer::u_pow_u(10, digits / 2))).recip();
        if Float::with_val(64, value.abs()) > tol {
            continue;
        }
        let margin = if basis.len() > 1 {
            norm(&basis[1]) / norm(&basis[0])
        } else {
            f64::INFINITY
        };
        let g = c.iter().fold(Integer::new(), |g, a| g.gcd(a));
        for a in c.iter_mut() {
            *a = Integer::from(&*a / &g);
        }
        if c[d] < 0 {
            for a in c.iter_mut() {
                *a = -a.clone();
            }
        }
        if d == 1 {
            let value = Rational::from((-c[0].clone(), c[1].clone()));
            return Ok(Recognition::Rational { value, margin });
        }
        return Ok(Recognition::Polynomial {
            coefficients: c,
            margin,
        });
    }
    Ok(Recognition::Unrecognized)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeierstrassError {
    #[error("discriminant vanishes")]
    Singular,
}

/// `j = c4^3 / Delta` of `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
pub fn j_from_weierstrass(
    a1: &Rational,
    a2: &Rational,
    a3: &Rational,
    a4: &Rational,
    a6: &Rational,
) -> Result<Rational, WeierstrassError> {
    let r = |x: Rational| x;
    let b2 = r(Rational::from(a1 * a1)) + Rational::from(a2 * 4u32);
    let b4 = r(Rational::from(a4 * 2u32)) + Rational::from(a1 * a3);
    let b6 = r(Rational::from(a3 * a3)) + Rational::from(a6 * 4u32);
    let b8 = Rational::from(a1 * a1) * a6 + Rational::from(a2 * a6) * 4u32
        - Rational::from(a1 * a3) * a4
        + Rational::from(a3 * a3) * a2
        - Rational::from(a4 * a4);
    let c4 = Rational::from(&b2 * &b2) - Rational::from(&b4 * 24u32);
    let delta = -Rational::from(&b2 * &b2) * &b8 - Rational::from(&b4 * &b4) * &b4 * 8u32
        - Rational::from(&b6 * &b6) * 27u32
        + Rational::from(&b2 * &b4) * &b6 * 9u32;
    if delta == 0 {
        return Err(WeierstrassError::Singular);
    }
    Ok(Rational::from(&c4 * &c4) * c4 / delta)
}
