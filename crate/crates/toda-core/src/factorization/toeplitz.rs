//! Block-Toeplitz linear solves behind the loop factorizations.

use crate::algebra::LaurentLoop;
use crate::linalg::{cond_estimate, lu_factor};
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// Condition-number threshold defining the singular cell.
pub const COND_LIMIT: f64 = 1e8;

/// Finds the minus loop X = I + Σ_{k=−1..−m} X_k λᵏ with (L·X)_k = 0 for
/// k ∈ [−m, −1], by solving the block-Toeplitz system column by column.
/// Returns the loop and the condition estimate of the system.
pub(crate) fn kill_negative_right(l: &LaurentLoop, m: usize) -> Result<(LaurentLoop, f64)> {
    assert!(m >= 1);
    let n = 3 * m;
    // Row block r = 1..m is the equation at degree k = −r; column block
    // j = 1..m holds the unknown X_{−j}. Block (r, j) = L_{j−r}.
    let mut a = vec![C64::new(0.0, 0.0); n * n];
    for r in 1..=m {
        for j in 1..=m {
            let block = l.coeff(j as i32 - r as i32);
            for p in 0..3 {
                for q in 0..3 {
                    a[((r - 1) * 3 + p) * n + (j - 1) * 3 + q] = block.get(p, q);
                }
            }
        }
    }
    let lu = lu_factor(&a, n);
    let adj: Vec<C64> = {
        let mut t = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                t[i * n + j] = a[j * n + i].conj();
            }
        }
        t
    };
    let lu_adj = lu_factor(&adj, n);
    let cond = cond_estimate(&a, n, &lu, &lu_adj);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(Error::SingularCell { cond, limit: COND_LIMIT });
    }

    let trunc = l.trunc().max(m as i32);
    let mut x = LaurentLoop::identity(trunc);
    x.twisted = false;
    for c in 0..3 {
        let mut rhs = vec![C64::new(0.0, 0.0); n];
        for r in 1..=m {
            let b = l.coeff(-(r as i32));
            for p in 0..3 {
                rhs[(r - 1) * 3 + p] = -b.get(p, c);
            }
        }
        lu.solve_in_place(&mut rhs);
        for j in 1..=m {
            let mut coeff = x.coeff(-(j as i32));
            for p in 0..3 {
                coeff.set(p, c, rhs[(j - 1) * 3 + p]);
            }
            x.set_coeff(-(j as i32), coeff);
        }
    }
    Ok((x, cond))
}

/// Finds the minus loop M (constant term I) with (M·L)_k = 0 for
/// k ∈ [−m, −1], via the transposed system.
pub(crate) fn kill_negative_left(l: &LaurentLoop, m: usize) -> Result<(LaurentLoop, f64)> {
    let (x, cond) = kill_negative_right(&l.transpose(), m)?;
    Ok((x.transpose(), cond))
}
