//! Numerical Birkhoff splitting of twisted loops.

use super::toeplitz::{kill_negative_left, kill_negative_right};
use super::{CellFlag, LoopFactorPair};
use crate::algebra::LaurentLoop;
use crate::{Error, Result};

/// Default residual gate for a successful split.
pub const SPLIT_TOL: f64 = 1e-9;

const CIRCLE_SAMPLES: usize = 128;

fn reassembly_residual(l: &LaurentLoop, plus: &LaurentLoop, minus: &LaurentLoop) -> f64 {
    let mut worst = 0.0f64;
    for m in 0..CIRCLE_SAMPLES {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / CIRCLE_SAMPLES as f64;
        let lam = num_complex::Complex64::from_polar(1.0, theta);
        let lhs = l.eval(lam).unwrap();
        let rhs = plus.eval(lam).unwrap() * minus.eval(lam).unwrap().inverse();
        worst = worst.max((lhs - rhs).norm());
    }
    worst
}

/// Splits L = L₊·L₋⁻¹ with L₊ supported on degrees ≥ 0 and L₋ normalized by
/// L₋(∞) = I (degrees ≤ 0, constant term I). The truncated coefficients are
/// obtained from the block-Toeplitz system; every return is gated by the
/// reassembly residual.
pub fn birkhoff_split(l: &LaurentLoop) -> Result<LoopFactorPair> {
    // A plus loop is its own decomposition.
    if l.is_plus() {
        return Ok(LoopFactorPair {
            plus_factor: l.clone(),
            minus_or_real_factor: LaurentLoop::identity(l.trunc()),
            residual: 0.0,
            cell: CellFlag::BigCell,
        });
    }
    let mut unknowns = 2 * l.trunc().max(4) as usize;
    let mut last_err = None;
    for _attempt in 0..2 {
        match try_split(l, unknowns) {
            Ok(pair) => {
                if pair.residual <= SPLIT_TOL {
                    return Ok(pair);
                }
                last_err = Some(Error::NoConvergence {
                    residual: pair.residual,
                    iterations: unknowns,
                    history: vec![pair.residual],
                });
            }
            Err(e) => last_err = Some(e),
        }
        // Residual stalled: retry with a wider truncation window.
        unknowns *= 2;
    }
    Err(last_err.unwrap())
}

fn try_split(l: &LaurentLoop, unknowns: usize) -> Result<LoopFactorPair> {
    let (x, _cond) = kill_negative_right(l, unknowns)?;
    let minus = x;
    let plus = l.mul(&minus).plus_part();
    let residual = reassembly_residual(l, &plus, &minus);
    let mut plus = plus;
    let mut minus = minus;
    plus.twisted = l.twisted;
    minus.twisted = l.twisted;
    Ok(LoopFactorPair { plus_factor: plus, minus_or_real_factor: minus, residual, cell: CellFlag::BigCell })
}

/// Splits L = A₋·A₊ (minus times plus, A₋(∞) = I); the order used when the
/// τ-symmetrized loop of an Iwasawa problem is factorized.
pub(crate) fn minus_plus_split(
    l: &LaurentLoop,
    unknowns: usize,
) -> Result<(LaurentLoop, LaurentLoop, f64)> {
    let (m, _cond) = kill_negative_left(l, unknowns)?;
    // m = A₋⁻¹ with constant term I.
    let plus = m.mul(l).plus_part();
    let minus = m.inverse_minus();
    let mut worst = 0.0f64;
    for s in 0..CIRCLE_SAMPLES {
        let theta = 2.0 * std::f64::consts::PI * s as f64 / CIRCLE_SAMPLES as f64;
        let lam = num_complex::Complex64::from_polar(1.0, theta);
        let lhs = l.eval(lam).unwrap();
        let rhs = minus.eval(lam).unwrap() * plus.eval(lam).unwrap();
        worst = worst.max((lhs - rhs).norm());
    }
    Ok((minus, plus, worst))
}
