//! Numerical Birkhoff and Iwasawa splittings of twisted loops, and the two
//! loop-group construction pipelines (holomorphic potential for the
//! conformal classes, potential pair for the asymptotic ones).

mod birkhoff;
mod dpw;
mod iwasawa;
mod potential;
mod toeplitz;

pub use birkhoff::{birkhoff_split, SPLIT_TOL};
pub use dpw::{dpw_asymptotic, dpw_conformal, DpwOptions, DpwOutput, GridSpec};
pub use iwasawa::{iwasawa_split, IWASAWA_TOL};
pub use potential::{integrate_potential, MatPoly, Potential, PotentialPair, PotentialVar};
pub use toeplitz::COND_LIMIT;

use crate::algebra::LaurentLoop;

/// Which Iwasawa/Birkhoff cell a split landed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellFlag {
    BigCell,
    Singular,
}

/// Result of a loop factorization.
///
/// For Birkhoff: `plus_factor`·`minus_or_real_factor`⁻¹ reassembles the
/// input (the minus factor is normalized to I at ∞). For Iwasawa:
/// `minus_or_real_factor` is the real-form factor F and
/// `minus_or_real_factor`·`plus_factor` reassembles the input.
#[derive(Debug, Clone)]
pub struct LoopFactorPair {
    pub plus_factor: LaurentLoop,
    pub minus_or_real_factor: LaurentLoop,
    /// Honest reassembly residual over unit-circle samples.
    pub residual: f64,
    pub cell: CellFlag,
}
