//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the numerical operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A loop was evaluated at λ = 0.
    #[error("loop evaluation at lambda = 0")]
    ZeroLambda,

    /// Point data violates the reality constraint of a geometry
    /// (Q, R off the imaginary axis for CH²₁, off the real axis for
    /// indefinite affine spheres).
    #[error("reality violation for {class}: {detail}")]
    RealityViolation { class: &'static str, detail: String },

    /// Grid has fewer than 3 points along one side.
    #[error("grid too small: dims = ({0}, {1}), need at least 3 per side")]
    GridTooSmall(usize, usize),

    /// Newton iteration failed to reach the target residual.
    #[error("no convergence: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence {
        residual: f64,
        iterations: usize,
        /// Residual norm after each iteration.
        history: Vec<f64>,
    },

    /// The marching solution exceeded the overflow guard.
    #[error("solution blow-up at grid index ({i}, {j}): |omega| = {value:.3e} exceeds {guard}")]
    Blowup { i: usize, j: usize, value: f64, guard: f64 },

    /// Input fields do not satisfy the Tzitzéica equation well enough to
    /// integrate a frame.
    #[error("Tzitzeica residual {found:.3e} exceeds threshold {threshold:.3e}")]
    ResidualTooLarge { found: f64, threshold: f64 },

    /// Frame determinant drifted beyond tolerance during integration.
    #[error("frame determinant drift {drift:.3e} exceeds {tol:.3e} at grid index ({i}, {j})")]
    NonUnitDeterminant { drift: f64, tol: f64, i: usize, j: usize },

    /// A conjugated frame failed to be real.
    #[error("imaginary residue {max_imag:.3e} after real-frame conjugation (tol {tol:.3e})")]
    ImaginaryResidue { max_imag: f64, tol: f64 },

    /// The loop lies off the big cell: the truncated factorization system is
    /// numerically singular.
    #[error("singular cell: block-Toeplitz condition number {cond:.3e} exceeds {limit:.3e}")]
    SingularCell { cond: f64, limit: f64 },

    /// Classification search returned nothing; the lattice is too coarse to
    /// contain a known solution.
    #[error("empty search: no candidate passed the defect gate {tol:.3e}")]
    EmptySearch { tol: f64 },

    /// A potential or factorization input fails a structural invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
