//! Solvers producing ω fields that satisfy a class's Tzitzéica equation:
//! damped-Newton elliptic solver for the conformal classes, Goursat
//! characteristic marching for the asymptotic ones.

mod elliptic;
mod field;
mod hyperbolic;

pub use elliptic::{solve_elliptic, EllipticSolution};
pub use field::ScalarField;
pub use hyperbolic::{solve_hyperbolic, GoursatData, BLOWUP_GUARD};
