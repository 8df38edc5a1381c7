//! Complex 3×3 and truncated-Laurent-loop arithmetic, the order-6 twisting
//! automorphism with its eigenspace grading, and the five real-form
//! involutions.

mod involution;
mod loops;
mod mat3;
mod twist;

pub use involution::{InvolutionSpec, LambdaMap, SurfaceClass};
pub use loops::LaurentLoop;
pub use mat3::{epsilon, epsilon_pow, i21, omega_sq, p0, p_sigma, CMat3};
pub use twist::{eig_project, grading_defect, twist_sigma_hat, twist_sigma_hat_group, EigenIndex};
