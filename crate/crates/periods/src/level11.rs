//! Test data: `Gamma_0(11)` and the cusp form `eta(tau)^2 eta(11 tau)^2`.

use rug::Float;

use noncong_core::cosets::{cusp_normalizers, CuspNormalizer};
use noncong_core::pairs::PermutationPair;
use noncong_core::perm::Permutation;

use crate::complex::{pi, BigComplex};
use crate::expansion::FourierExpansion;

/// `prod_{n >= 1} (1 - q^n)` up to `q^m`, from the pentagonal numbers.
fn euler_product(m: usize) -> Vec<i64> {
    let mut c = vec![0i64; m + 1];
    for k in 0i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 > m {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        c[e1] = sign;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e2 <= m {
            c[e2] = sign;
        }
    }
    c
}

fn mul_trunc(x: &[i64], y: &[i64], m: usize) -> Vec<i64> {
    let mut z = vec![0i64; m + 1];
    for (i, &a) in x.iter().enumerate().take(m + 1) {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.iter().enumerate().take(m + 1 - i) {
            z[i + j] += a * b;
        }
    }
    z
}

/// `c_1..c_m` of `q prod (1 - q^n)^2 (1 - q^{11n})^2`.
pub fn eta_product_coefficients(m: usize) -> Vec<i64> {
    let e = euler_product(m);
    let mut e11 = vec![0i64; m + 1];
    for (i, &v) in e.iter().enumerate() {
        if 11 * i > m {
            break;
        }
        e11[11 * i] = v;
    }
    let sq = mul_trunc(&e, &e, m);
    let sq11 = mul_trunc(&e11, &e11, m);
    // shift by q: c_n is the coefficient of q^{n-1} in the product
    mul_trunc(&sq, &sq11, m)[..m].to_vec()
}

/// `Gamma_0(11)` as the stabilizer of `(0:1)` in the right action on
/// `P^1(F_11)`. Point 0 is `(0:1)`, point `1 + d` is `(1:d)`.
pub fn gamma0_11_pair() -> PermutationPair {
    let index = |c: i64, d: i64| -> u32 {
        let (c, d) = (c.rem_euclid(11), d.rem_euclid(11));
        if c == 0 {
            0
        } else {
            let inv = (1..11).find(|x| x * c % 11 == 1).unwrap();
            1 + (d * inv % 11) as u32
        }
    };
    let point = |p: u32| -> (i64, i64) {
        if p == 0 {
            (0, 1)
        } else {
            (1, p as i64 - 1)
        }
    };
    let s: Vec<u32> = (0..12)
        .map(|p| {
            let (c, d) = point(p);
            index(d, -c)
        })
        .collect();
    let r: Vec<u32> = (0..12)
        .map(|p| {
            let (c, d) = point(p);
            index(d, d - c)
        })
        .collect();
    PermutationPair::new(
        Permutation::from_images(s).unwrap(),
        Permutation::from_images(r).unwrap(),
    )
    .expect("valid pair")
}

/// Expansions of `f | A_p` at every cusp of [`gamma0_11_pair`], with
/// `terms` coefficients each.
///
/// At the width-1 cusp `A` lies in `Gamma_0(11)` and `f | A = f`. At the
/// width-11 cusp `A = gamma S T^k` with `k = d / c mod 11`, so the
/// coefficients are `-(c_n / 11) e^{2 pi i n k / 11}`.
pub fn gamma0_11_expansions(terms: usize, prec: u32) -> (Vec<FourierExpansion>, Vec<CuspNormalizer>) {
    let pair = gamma0_11_pair();
    let cusps = cusp_normalizers(&pair);
    let c = eta_product_coefficients(terms);
    let exps = cusps
        .iter()
        .map(|cp| {
            let a = cp.normalizer;
            let coeffs = if cp.width == 1 {
                assert_eq!(a.c % 11, 0);
                c.iter()
                    .map(|&v| BigComplex::from_f64(v as f64, 0.0, prec))
                    .collect()
            } else {
                let cinv = (1..11).find(|x| (x * a.c).rem_euclid(11) == 1).unwrap();
                let k = (a.d * cinv).rem_euclid(11);
                let two_pi = pi(prec) * 2u32;
                c.iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let n = (i + 1) as i64;
                        let angle = Float::with_val(prec, &two_pi * ((n * k) % 11)) / 11u32;
                        let (sn, cs) = angle.sin_cos(Float::new(prec));
                        let scale = Float::with_val(prec, -v) / 11u32;
                        BigComplex::new(Float::with_val(prec, &scale * &cs), scale * sn)
                    })
                    .collect()
            };
            FourierExpansion::new(cp.index, cp.width, coeffs).unwrap()
        })
        .collect();
    (exps, cusps)
}
