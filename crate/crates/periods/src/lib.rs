//! Periods of weight two cusp forms on finite index subgroups of the
//! modular group: period lattices, `j`-invariants and their recognition.

pub mod complex;
pub mod expansion;
pub mod files;
pub mod lattice;
pub mod level11;
pub mod modular;
pub mod pipeline;
pub mod recognize;

pub use complex::BigComplex;
pub use expansion::{period_of, FourierExpansion, PeriodError, PeriodValue};
pub use lattice::{lattice_from_periods, PeriodLattice};
pub use modular::j_invariant;
pub use recognize::{j_from_weierstrass, recognize_algebraic, Recognition};
