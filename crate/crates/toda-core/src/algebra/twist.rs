//! The order-6 twisting automorphism σ̂ and its eigenspace grading.

use super::mat3::{epsilon_pow, p_sigma, CMat3};
use num_complex::Complex64 as C64;

/// Grading index j of the eigenspace 𝔤_j, always reduced mod 6.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenIndex(u8);

impl EigenIndex {
    pub fn new(j: i64) -> Self {
        EigenIndex(j.rem_euclid(6) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl From<i64> for EigenIndex {
    fn from(j: i64) -> Self {
        EigenIndex::new(j)
    }
}

/// σ̂(X) = −P Xᵀ P with P = diag(ε², ε⁴, −1)·P₀. Note P⁻¹ = P.
pub fn twist_sigma_hat(x: &CMat3) -> CMat3 {
    let p = p_sigma();
    -(p * x.transpose() * p)
}

/// Group-level twist σ̂(g) = P (gᵀ)⁻¹ P.
pub fn twist_sigma_hat_group(g: &CMat3) -> CMat3 {
    let p = p_sigma();
    p * g.transpose().inverse() * p
}

/// Projection of X onto the eigenspace 𝔤_j of σ̂:
/// (1/6) Σ_{m=0..5} ε^{−jm} σ̂ᵐ(X). The result satisfies σ̂(result) = ε^j result.
pub fn eig_project(x: &CMat3, j: EigenIndex) -> CMat3 {
    let mut acc = CMat3::zero();
    let mut power = *x;
    for m in 0..6i64 {
        acc = acc + power.scale(epsilon_pow(-(j.value() as i64) * m));
        power = twist_sigma_hat(&power);
    }
    acc.scale(C64::new(1.0 / 6.0, 0.0))
}

/// Distance of X from the eigenspace 𝔤_j.
pub fn grading_defect(x: &CMat3, j: EigenIndex) -> f64 {
    (*x - eig_project(x, j)).norm()
}
