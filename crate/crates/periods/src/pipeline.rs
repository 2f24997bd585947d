//! Generators and expansions in, lattice, `j` and its recognition out.

use rug::Float;
use thiserror::Error;

use noncong_core::cosets::CuspNormalizer;
use noncong_core::matrix::MatrixPSL2;

use crate::complex::bits_for_digits;
use crate::expansion::{period_of, FourierExpansion, PeriodError, PeriodValue};
use crate::lattice::{lattice_from_periods, LatticeError, PeriodLattice};
use crate::modular::{j_invariant, ModularError};
use crate::recognize::{recognize_algebraic, RecognizeError, Recognition};
use crate::BigComplex;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Recognize(#[from] RecognizeError),
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub periods: Vec<PeriodValue>,
    pub lattice: PeriodLattice,
    pub j: BigComplex,
    /// Decimal digits of `j` backed by the period error bounds.
    pub j_digits: u32,
    pub recognition: Option<Recognition>,
}

/// Digits of the periods that survive their reported error, less a
/// safety margin of 10, capped at the working precision.
pub fn trusted_digits(periods: &[PeriodValue], digits: u32) -> u32 {
    let mut scale = Float::with_val(64, 0);
    let mut err = Float::with_val(64, 0);
    for p in periods {
        scale = scale.max(&Float::with_val(64, p.value.abs()));
        err = err.max(&p.error);
    }
    if scale == 0 || err == 0 {
        return digits.saturating_sub(10);
    }
    let rel = Float::with_val(64, err / scale).log10().to_f64();
    ((-rel).floor().max(0.0) as u32).min(digits).saturating_sub(10)
}

/// The largest coefficient size the precondition of
/// [`recognize_algebraic`] allows at this many digits and degree.
pub fn coefficient_bits(digits: u32, degree: usize) -> u32 {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).floor() as u64;
    (bits.saturating_sub(20) / (degree as u64 + 1)) as u32
}

pub fn run(
    generators: &[MatrixPSL2],
    expansions: &[FourierExpansion],
    cusps: &[CuspNormalizer],
    digits: u32,
    recognize_degree: Option<usize>,
) -> Result<PipelineResult, PipelineError> {
    let prec = bits_for_digits(digits);
    let periods = generators
        .iter()
        .map(|g| period_of(g, expansions, cusps, prec))
        .collect::<Result<Vec<_>, _>>()?;
    let lattice = lattice_from_periods(&periods)?;
    let j = j_invariant(&lattice.tau)?;
    let j_digits = trusted_digits(&periods, digits);
    let recognition = match recognize_degree {
        Some(d) => Some(recognize_algebraic(
            &j,
            d,
            coefficient_bits(j_digits, d),
            j_digits,
        )?),
        None => None,
    };
    Ok(PipelineResult {
        periods,
        lattice,
        j,
        j_digits,
        recognition,
    })
}
