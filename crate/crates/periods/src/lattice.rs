//! Period lattices from lists of periods, and reduction of `tau` to the
//! standard fundamental domain.

use rug::{Float, Integer, Rational};
use thiserror::Error;

use noncong_core::matrix::MatrixPSL2;

use crate::complex::{ten_pow_neg, BigComplex};
use crate::expansion::PeriodValue;

/// Denominator bound for rationalizing lattice coordinates.
pub const MAX_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("zero lattice: every period vanishes")]
    ZeroLattice,
    #[error("periods span a real line, not a lattice")]
    RankOne,
    #[error("not a lattice at this precision (coordinate residual {0:e})")]
    NotALattice(f64),
}

#[derive(Debug, Clone)]
pub struct PeriodLattice {
    pub w1: BigComplex,
    pub w2: BigComplex,
    /// `w1 / w2`, in the standard fundamental domain.
    pub tau: BigComplex,
}

/// Continued fraction convergent of `x` with the largest denominator not
/// above `max_den`.
pub fn rationalize(x: &Float, max_den: u64) -> Rational {
    let prec = x.prec();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut y = x.clone();
    let tiny = Float::with_val(prec, Float::u_exp(1, 20 - prec as i32));
    for _ in 0..200 {
        let a = y.clone().floor().to_integer().expect("finite");
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = Float::with_val(prec, &y - &a);
        if frac < tiny {
            break;
        }
        y = Float::with_val(prec, 1) / frac;
    }
    Rational::from((h1, k1))
}

/// Row Hermite normal form of an integer `k x 2` matrix of rank 2:
/// `[[a, b], [0, d]]` with `a, d > 0` and `0 <= b < d`.
pub fn hermite_normal_form(rows: &[[Integer; 2]]) -> Option<[[Integer; 2]; 2]> {
    let mut rows: Vec<[Integer; 2]> = rows.to_vec();
    let eliminate = |rows: &mut Vec<[Integer; 2]>, col: usize, from: usize| -> Option<()> {
        loop {
            let pivot = (from..rows.len())
                .filter(|&i| rows[i][col] != 0)
                .min_by(|&i, &j| rows[i][col].cmp_abs(&rows[j][col]))?;
            rows.swap(from, pivot);
            let mut done = true;
            for i in from + 1..rows.len() {
                if rows[i][col] != 0 {
                    let q = rows[i][col].clone().div_rem_floor(rows[from][col].clone()).0;
                    let [x, y] = rows[from].clone();
                    rows[i][0] -= Integer::from(&q * &x);
                    rows[i][1] -= q * y;
                    if rows[i][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                if rows[from][col] < 0 {
                    let r = &mut rows[from];
                    r[0] = -r[0].clone();
                    r[1] = -r[1].clone();
                }
                return Some(());
            }
        }
    };
    eliminate(&mut rows, 0, 0)?;
    eliminate(&mut rows, 1, 1)?;
    let d = rows[1][1].clone();
    let q = rows[0][1].clone().div_rem_floor(d.clone()).0;
    let b = &rows[0][1] - Integer::from(&q * &d);
    Some([[rows[0][0].clone(), b], [Integer::from(0), d]])
}

fn cross(u: &BigComplex, v: &BigComplex) -> Float {
    // Im(v * conj(u))
    let p = u.prec();
    Float::with_val(p, &u.re * &v.im) - Float::with_val(p, &u.im * &v.re)
}

fn combo(a: &Integer, u: &BigComplex, b: &Integer, v: &BigComplex, lambda: &Integer) -> BigComplex {
    let p = u.prec();
    let fa = Float::with_val(p, a);
    let fb = Float::with_val(p, b);
    let s = &u.scale(&fa) + &v.scale(&fb);
    s.scale(&(Float::with_val(p, 1) / Float::with_val(p, lambda)))
}

/// The lattice generated by the given periods: drops approximate zeros and
/// duplicates, writes every period in a basis `w1, w2` with rational
/// coordinates, clears denominators, takes the Hermite normal form and
/// reduces `tau = w1 / w2` to the fundamental domain.
///
/// Values count as equal when they agree to a relative `10^(-P/2)` or to
/// a hundred times their stated error, whichever is larger.
pub fn lattice_from_periods(values: &[PeriodValue]) -> Result<PeriodLattice, LatticeError> {
    let Some(first) = values.first() else {
        return Err(LatticeError::ZeroLattice);
    };
    let prec = first.value.prec();
    let digits = (prec.saturating_sub(32)) as f64 / std::f64::consts::LOG2_10;
    let max_abs = values
        .iter()
        .map(|v| v.value.abs())
        .fold(Float::with_val(prec, 0), |a, b| if b > a { b } else { a });
    if max_abs == 0 {
        return Err(LatticeError::ZeroLattice);
    }
    let max_err = values
        .iter()
        .map(|v| v.error.clone())
        .fold(Float::with_val(64, 0), |a, b| if b > a { b } else { a });
    let mut tol = ten_pow_neg(digits / 2.0, prec);
    let from_err = Float::with_val(prec, Float::with_val(prec, &max_err * 100u32) / &max_abs);
    if from_err > tol {
        tol = from_err;
    }
    let abs_tol = Float::with_val(prec, &tol * &max_abs);

    let mut kept: Vec<&BigComplex> = Vec::new();
    for v in values {
        if v.value.abs() <= abs_tol {
            continue;
        }
        if kept.iter().any(|w| (*w - &v.value).abs() <= abs_tol) {
            continue;
        }
        kept.push(&v.value);
    }
    let w1 = *kept.first().ok_or(LatticeError::ZeroLattice)?;
    let indep_tol = Float::with_val(prec, &tol * 1000u32);
    let w2 = *kept
        .iter()
        .find(|v| {
            let c = Float::with_val(prec, cross(w1, v).abs()) / (w1.abs() * v.abs());
            c > indep_tol
        })
        .ok_or(LatticeError::RankOne)?;

    let det = Float::with_val(prec, &w1.re * &w2.im) - Float::with_val(prec, &w2.re * &w1.im);
    let mut coords: Vec<(Rational, Rational)> = Vec::new();
    let mut worst = Float::with_val(64, 0);
    for v in &kept {
        let r = (Float::with_val(prec, &v.re * &w2.im) - Float::with_val(prec, &w2.re * &v.im)) / &det;
        let s = (Float::with_val(prec, &w1.re * &v.im) - Float::with_val(prec, &v.re * &w1.im)) / &det;
        let rq = rationalize(&r, MAX_DENOMINATOR);
        let sq = rationalize(&s, MAX_DENOMINATOR);
        let approx = &w1.scale(&Float::with_val(prec, &rq)) + &w2.scale(&Float::with_val(prec, &sq));
        let resid = Float::with_val(64, (&approx - v).abs() / &max_abs);
        if resid > worst {
            worst = resid;
        }
        coords.push((rq, sq));
    }
    if worst > Float::with_val(64, &tol * 10u32) {
        return Err(LatticeError::NotALattice(worst.to_f64()));
    }
    let lambda = coords.iter().fold(Integer::from(1), |acc, (r, s)| {
        let acc = acc.lcm(r.denom());
        acc.lcm(s.denom())
    });
    let rows: Vec<[Integer; 2]> = coords
        .iter()
        .map(|(r, s)| {
            let to_int = |q: &Rational| q.numer() * Integer::from(&lambda / q.denom());
            [to_int(r), to_int(s)]
        })
        .collect();
    let [[a, b], [c, d]] = hermite_normal_form(&rows).ok_or(LatticeError::RankOne)?;
    let mut u1 = combo(&a, w1, &b, w2, &lambda);
    let mut u2 = combo(&c, w1, &d, w2, &lambda);
    if u1.div(&u2).im < 0 {
        std::mem::swap(&mut u1, &mut u2);
    }
    let (tau, m) = reduce_to_fundamental_domain(&u1.div(&u2));
    let (ma, mb, mc, md) = (
        Float::with_val(prec, m.a),
        Float::with_val(prec, m.b),
        Float::with_val(prec, m.c),
        Float::with_val(prec, m.d),
    );
    let w1 = &u1.scale(&ma) + &u2.scale(&mb);
    let w2 = &u1.scale(&mc) + &u2.scale(&md);
    Ok(PeriodLattice { w1, w2, tau })
}

/// `(tau', M)` with `tau' = M(tau)`, `|Re tau'| <= 1/2` and `|tau'| >= 1`.
pub fn reduce_to_fundamental_domain(tau: &BigComplex) -> (BigComplex, MatrixPSL2) {
    let prec = tau.prec();
    let eps = Float::with_val(prec, Float::u_exp(1, 16 - prec as i32));
    let half = Float::with_val(prec, 0.5) + &eps;
    let one = Float::with_val(prec, 1) - &eps;
    let mut t = tau.clone();
    let mut m = MatrixPSL2::identity();
    for _ in 0..100_000 {
        if Float::with_val(prec, t.re.abs_ref()) > half {
            let n = Float::with_val(prec, &t.re + 0.5f64)
                .floor()
                .to_integer()
                .and_then(|n| n.to_i64())
                .expect("real part fits in i64");
            t.re -= n;
            m = MatrixPSL2::t().pow(-n).mul(&m);
        }
        if t.norm_sqr() < one {
            t = -&t.recip();
            m = MatrixPSL2::s().mul(&m);
        } else {
            break;
        }
    }
    (t, m)
}

/// `M(tau)` for the Moebius action.
pub fn mobius(m: &MatrixPSL2, tau: &BigComplex) -> BigComplex {
    let p = tau.prec();
    let f = |x: i64| Float::with_val(p, x);
    let num = &tau.scale(&f(m.a)) + &BigComplex::new(f(m.b), f(0));
    let den = &tau.scale(&f(m.c)) + &BigComplex::new(f(m.d), f(0));
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_rows(v: &[[i64; 2]]) -> Vec<[Integer; 2]> {
        v.iter().map(|r| [Integer::from(r[0]), Integer::from(r[1])]).collect()
    }

    #[test]
    fn hnf_examples() {
        let h = hermite_normal_form(&int_rows(&[[2, 0], [1, 1]])).unwrap();
        assert_eq!(h, [[Integer::from(1), Integer::from(1)], [Integer::from(0), Integer::from(2)]]);
        let h = hermite_normal_form(&int_rows(&[[1, 0], [0, 1], [3, -2]])).unwrap();
        assert_eq!(h, [[Integer::from(1), Integer::from(0)], [Integer::from(0), Integer::from(1)]]);
        assert!(hermite_normal_form(&int_rows(&[[2, 4], [1, 2]])).is_none());
    }

    #[test]
    fn continued_fractions() {
        let x = Float::with_val(200, 355) / 113u32;
        assert_eq!(rationalize(&x, 1000), Rational::from((355, 113)));
        let x = Float::with_val(200, -7) / 3u32;
        assert_eq!(rationalize(&x, 1000), Rational::from((-7, 3)));
        assert_eq!(rationalize(&Float::with_val(200, 0), 10), Rational::from(0));
    }

    #[test]
    fn fundamental_domain_examples() {
        let p = 200;
        let (t, m) = reduce_to_fundamental_domain(&BigComplex::from_f64(7.0, 1.0, p));
        assert_eq!(t.to_f64_pair(), (0.0, 1.0));
        assert_eq!(m, MatrixPSL2::t().pow(-7));
        let (t, m) = reduce_to_fundamental_domain(&BigComplex::from_f64(0.0, 0.1, p));
        assert!((t.im.to_f64() - 10.0).abs() < 1e-12 && t.re.to_f64().abs() < 1e-12);
        assert_eq!(m, MatrixPSL2::s());
        let z = BigComplex::from_f64(0.3, 1.2, p);
        let (t, m) = reduce_to_fundamental_domain(&z);
        assert_eq!((t.to_f64_pair(), m), (z.to_f64_pair(), MatrixPSL2::identity()));
    }

    #[test]
    fn reduction_matrix_maps_input() {
        let p = 200;
        let z = BigComplex::from_f64(-3.71, 0.013, p);
        let (t, m) = reduce_to_fundamental_domain(&z);
        assert!((&mobius(&m, &z) - &t).abs() < 1e-40);
        assert!(t.re.to_f64().abs() <= 0.5 && t.norm_sqr() >= 1.0 - 1e-30);
    }
}
