//! Fourier expansions at the cusps and the period map.

use rug::ops::Pow;
use rug::Float;
use thiserror::Error;

use noncong_core::cosets::CuspNormalizer;
use noncong_core::matrix::MatrixPSL2;

use crate::complex::{ten_pow_neg, BigComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PeriodError {
    #[error("base point is not in the upper half plane")]
    NotUpperHalfPlane,
    #[error("no expansion for cusp {0}")]
    MissingCusp(usize),
    #[error("expansion has no coefficients")]
    EmptyExpansion,
    #[error("cusp width must be positive")]
    ZeroWidth,
    #[error("cusp {cusp} has width {expected} but the expansion says {found}")]
    WidthMismatch {
        cusp: usize,
        expected: u32,
        found: u32,
    },
}

/// `f|A_p = sum_{n >= 1} a_n q_h^n` at one cusp; `coefficients[n - 1]` is
/// `a_n`.
#[derive(Debug, Clone)]
pub struct FourierExpansion {
    pub cusp_index: usize,
    pub width: u32,
    pub coefficients: Vec<BigComplex>,
}

impl FourierExpansion {
    pub fn new(
        cusp_index: usize,
        width: u32,
        coefficients: Vec<BigComplex>,
    ) -> Result<Self, PeriodError> {
        if width == 0 {
            return Err(PeriodError::ZeroWidth);
        }
        if coefficients.is_empty() {
            return Err(PeriodError::EmptyExpansion);
        }
        Ok(FourierExpansion {
            cusp_index,
            width,
            coefficients,
        })
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len()
    }

    /// The same expansion cut to its first `m` terms.
    pub fn truncated(&self, m: usize) -> Self {
        FourierExpansion {
            coefficients: self.coefficients[..m.min(self.terms())].to_vec(),
            ..self.clone()
        }
    }
}

/// A value with an a-posteriori bound on its truncation and rounding error.
#[derive(Debug, Clone)]
pub struct PeriodValue {
    pub value: BigComplex,
    pub error: Float,
    /// Set when `error` exceeds the working precision.
    pub warning: bool,
}

impl PeriodValue {
    pub fn exact(value: BigComplex) -> Self {
        PeriodValue {
            error: Float::with_val(64, 0),
            value,
            warning: false,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(BigComplex::zero(prec))
    }

    fn combine(a: &PeriodValue, b: &PeriodValue, value: BigComplex) -> Self {
        PeriodValue {
            value,
            error: Float::with_val(64, &a.error + &b.error),
            warning: a.warning || b.warning,
        }
    }

    pub fn add(&self, o: &PeriodValue) -> Self {
        Self::combine(self, o, &self.value + &o.value)
    }

    pub fn sub(&self, o: &PeriodValue) -> Self {
        Self::combine(self, o, &self.value - &o.value)
    }
}

fn working_digits(prec: u32) -> f64 {
    (prec.saturating_sub(32)) as f64 / std::f64::consts::LOG2_10
}

/// `-h * sum_{n=1}^{M} (a_n / n) q_h^n` at `tau0`, i.e. the integral of
/// `f|A_p` from `tau0` to `i infinity` up to the common factor `2 pi i`.
///
/// The tail bound assumes `|a_n| <= C' sqrt(n)` with `C'` the largest
/// `|a_n| / sqrt(n)` seen among the given terms.
pub fn eval_i_f(exp: &FourierExpansion, tau0: &BigComplex) -> Result<PeriodValue, PeriodError> {
    if tau0.im <= 0 {
        return Err(PeriodError::NotUpperHalfPlane);
    }
    let prec = tau0.prec();
    let h = exp.width;
    let q = BigComplex::new(
        Float::with_val(prec, &tau0.re / h),
        Float::with_val(prec, &tau0.im / h),
    )
    .exp_2pi_i();
    let mut qn = q.clone();
    let mut sum = BigComplex::zero(prec);
    let mut abs_sum = Float::with_val(64, 0);
    let mut growth = Float::with_val(64, 0);
    for (i, a) in exp.coefficients.iter().enumerate() {
        let n = (i + 1) as u32;
        let term = (&qn * a).scale(&Float::with_val(prec, Float::with_val(prec, 1) / n));
        abs_sum += Float::with_val(64, term.abs());
        sum = &sum + &term;
        qn = &qn * &q;
        let g = Float::with_val(64, a.abs()) / Float::with_val(64, n).sqrt();
        if g > growth {
            growth = g;
        }
    }
    let value = sum.scale(&Float::with_val(prec, -(h as i64)));
    let m = exp.terms() as u32;
    let r = Float::with_val(64, q.abs());
    let mut tail = Float::with_val(64, &growth * Float::with_val(64, (&r).pow(m + 1)));
    tail /= Float::with_val(64, m + 1).sqrt();
    tail /= Float::with_val(64, 1 - r);
    let rounding = abs_sum * Float::with_val(64, Float::u_exp(1, 10 - prec as i32));
    let error = (tail + rounding) * h;
    let warning = error > ten_pow_neg(working_digits(prec), 64);
    Ok(PeriodValue {
        value,
        error,
        warning,
    })
}

fn expansion_for<'a>(
    expansions: &'a [FourierExpansion],
    cusp: &CuspNormalizer,
) -> Result<&'a FourierExpansion, PeriodError> {
    let e = expansions
        .iter()
        .find(|e| e.cusp_index == cusp.index)
        .ok_or(PeriodError::MissingCusp(cusp.index))?;
    if e.width != cusp.width {
        return Err(PeriodError::WidthMismatch {
            cusp: cusp.index,
            expected: cusp.width,
            found: e.width,
        });
    }
    Ok(e)
}

/// `A_p^-1 gamma A_p`.
pub fn conjugate_to_cusp(gamma: &MatrixPSL2, cusp: &CuspNormalizer) -> MatrixPSL2 {
    cusp.normalizer.inverse().mul(gamma).mul(&cusp.normalizer)
}

/// `P_f(gamma)` computed with the base point `tau0 = -d/c + i/c` of
/// `gamma_p = A_p^-1 gamma A_p` at the given cusp.
pub fn period_at_cusp(
    gamma: &MatrixPSL2,
    exp: &FourierExpansion,
    cusp: &CuspNormalizer,
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    let g = conjugate_to_cusp(gamma, cusp);
    if g.c == 0 {
        return Ok(PeriodValue::zero(prec));
    }
    let c = Float::with_val(prec, g.c);
    let inv_c = Float::with_val(prec, 1) / &c;
    let tau0 = BigComplex::new(Float::with_val(prec, -g.d) / &c, inv_c.clone());
    // gamma_p(tau0) = a/c + i/c since c tau0 + d = i
    let image = BigComplex::new(Float::with_val(prec, g.a) / &c, inv_c);
    let start = eval_i_f(exp, &tau0)?;
    let end = eval_i_f(exp, &image)?;
    Ok(start.sub(&end))
}

/// `P_f(gamma)`, using the cusp where `c_p h_p` is smallest (ties to the
/// lowest cusp index). Zero when `gamma` is parabolic at some cusp.
pub fn period_of(
    gamma: &MatrixPSL2,
    expansions: &[FourierExpansion],
    cusps: &[CuspNormalizer],
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    let mut best: Option<(i128, &CuspNormalizer)> = None;
    for cp in cusps {
        let g = conjugate_to_cusp(gamma, cp);
        if g.c == 0 {
            return Ok(PeriodValue::zero(prec));
        }
        let score = g.c as i128 * cp.width as i128;
        if best.is_none_or(|(b, _)| score < b) {
            best = Some((score, cp));
        }
    }
    let (_, cp) = best.ok_or(PeriodError::MissingCusp(0))?;
    period_at_cusp(gamma, expansion_for(expansions, cp)?, cp, prec)
}

/// As [`period_of`] but at a chosen cusp.
pub fn period_via(
    gamma: &MatrixPSL2,
    expansions: &[FourierExpansion],
    cusp: &CuspNormalizer,
    prec: u32,
) -> Result<PeriodValue, PeriodError> {
    period_at_cusp(gamma, expansion_for(expansions, cusp)?, cusp, prec)
}
