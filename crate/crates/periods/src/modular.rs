//! `g2`, `g3` and `j` of the lattice `Z tau + Z`.

use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use crate::complex::{pi, BigComplex};
use crate::lattice::reduce_to_fundamental_domain;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModularError {
    #[error("tau is not in the upper half plane")]
    NotUpperHalfPlane,
    #[error("g2^3 - 27 g3^2 vanishes to working precision")]
    DegenerateLattice,
}

fn sigma(n: u64, k: u32) -> Float {
    let mut s = Float::with_val(64, 0);
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            s += Float::with_val(64, d).pow(k);
            if d * d != n {
                s += Float::with_val(64, n / d).pow(k);
            }
        }
        d += 1;
    }
    s
}

/// `E4` and `E6` from `1 + 240 sum sigma_3(n) q^n` and
/// `1 - 504 sum sigma_5(n) q^n`, summed until the geometric tail drops
/// below the working precision.
pub fn eisenstein_e4_e6(tau: &BigComplex) -> Result<(BigComplex, BigComplex), ModularError> {
    if tau.im <= 0 {
        return Err(ModularError::NotUpperHalfPlane);
    }
    let prec = tau.prec();
    let q = tau.exp_2pi_i();
    let r = Float::with_val(64, q.abs());
    let eps = Float::with_val(64, Float::u_exp(1, -(prec as i32) - 16));
    let one_minus_r = Float::with_val(64, 1 - &r);
    let mut s3 = BigComplex::zero(prec);
    let mut s5 = BigComplex::zero(prec);
    let mut qn = q.clone();
    let mut rn = r.clone();
    let mut n = 1u64;
    loop {
        // sigma_5(n) <= 2 n^5 bounds every later term too, up to n^5 growth
        let bound = Float::with_val(64, n + 1).pow(6u32) * &rn * 1008u32 / &one_minus_r;
        if n > 1 && bound < eps {
            break;
        }
        s3 = &s3 + &qn.scale(&Float::with_val(prec, sigma(n, 3)));
        s5 = &s5 + &qn.scale(&Float::with_val(prec, sigma(n, 5)));
        qn = &qn * &q;
        rn *= &r;
        n += 1;
    }
    let one = BigComplex::from_f64(1.0, 0.0, prec);
    let e4 = &one + &s3.scale(&Float::with_val(prec, 240));
    let e6 = &one - &s5.scale(&Float::with_val(prec, 504));
    Ok((e4, e6))
}

/// `g2 = (4 pi^4 / 3) E4` and `g3 = (8 pi^6 / 27) E6`.
pub fn eisenstein_g2_g3(tau: &BigComplex) -> Result<(BigComplex, BigComplex), ModularError> {
    let prec = tau.prec();
    let (e4, e6) = eisenstein_e4_e6(tau)?;
    let p = pi(prec);
    let c2 = Float::with_val(prec, (&p).pow(4u32)) * 4u32 / 3u32;
    let c3 = Float::with_val(prec, (&p).pow(6u32)) * 8u32 / 27u32;
    Ok((e4.scale(&c2), e6.scale(&c3)))
}

/// `1728 g2^3 / (g2^3 - 27 g3^2)`, evaluated after moving `tau` into the
/// fundamental domain.
pub fn j_invariant(tau: &BigComplex) -> Result<BigComplex, ModularError> {
    if tau.im <= 0 {
        return Err(ModularError::NotUpperHalfPlane);
    }
    let prec = tau.prec();
    let (t, _) = reduce_to_fundamental_domain(tau);
    let (g2, g3) = eisenstein_g2_g3(&t)?;
    let g2c = g2.powu(3);
    let den = &g2c - &(&g3 * &g3).scale(&Float::with_val(prec, 27));
    let tiny = Float::with_val(64, Float::u_exp(1, 40 - prec as i32));
    if Float::with_val(64, den.abs() / (g2c.abs() + 1u32)) < tiny {
        return Err(ModularError::DegenerateLattice);
    }
    Ok(g2c.scale(&Float::with_val(prec, 1728)).div(&den))
}
