//! Truncated Laurent loops with matrix coefficients.
//!
//! A loop is Σ_k A_k λᵏ with k restricted to [−N, N]. This is the numerical
//! surrogate for the Wiener algebra: products report the norm of the
//! discarded tail instead of pretending to be exact.

use super::mat3::{epsilon_pow, CMat3};
use super::twist::{eig_project, twist_sigma_hat, EigenIndex};
use crate::{Error, Result};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;

/// Truncated Laurent series in λ with `CMat3` coefficients.
#[derive(Debug, Clone)]
pub struct LaurentLoop {
    coeffs: BTreeMap<i32, CMat3>,
    trunc: i32,
    /// Metadata flag: the loop is expected to satisfy the σ-twisting
    /// condition. Verified by [`LaurentLoop::twist_defect`].
    pub twisted: bool,
}

impl LaurentLoop {
    pub fn new(trunc: i32) -> Self {
        assert!(trunc > 0, "truncation degree must be positive");
        LaurentLoop { coeffs: BTreeMap::new(), trunc, twisted: false }
    }

    pub fn identity(trunc: i32) -> Self {
        let mut l = Self::new(trunc);
        l.set_coeff(0, CMat3::identity());
        l.twisted = true;
        l
    }

    /// Constant loop with a single degree-0 coefficient.
    pub fn constant(m: CMat3, trunc: i32) -> Self {
        let mut l = Self::new(trunc);
        l.set_coeff(0, m);
        l
    }

    pub fn from_coeffs<I: IntoIterator<Item = (i32, CMat3)>>(items: I, trunc: i32) -> Self {
        let mut l = Self::new(trunc);
        for (k, m) in items {
            l.set_coeff(k, m);
        }
        l
    }

    pub fn trunc(&self) -> i32 {
        self.trunc
    }

    pub fn coeff(&self, k: i32) -> CMat3 {
        self.coeffs.get(&k).copied().unwrap_or_else(CMat3::zero)
    }

    /// Sets a coefficient; degrees outside [−N, N] are rejected.
    pub fn set_coeff(&mut self, k: i32, m: CMat3) {
        assert!(k.abs() <= self.trunc, "degree {k} outside truncation {}", self.trunc);
        if m.norm() == 0.0 {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, m);
        }
    }

    pub fn support(&self) -> impl Iterator<Item = (i32, &CMat3)> {
        self.coeffs.iter().map(|(k, m)| (*k, m))
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn is_plus(&self) -> bool {
        self.min_degree().is_none_or(|k| k >= 0)
    }

    pub fn is_minus(&self) -> bool {
        self.max_degree().is_none_or(|k| k <= 0)
    }

    /// Σ_k A_k λᵏ.
    pub fn eval(&self, lambda: C64) -> Result<CMat3> {
        if lambda.norm() == 0.0 {
            return Err(Error::ZeroLambda);
        }
        let mut acc = CMat3::zero();
        for (&k, m) in &self.coeffs {
            acc = acc + m.scale(lambda.powi(k));
        }
        Ok(acc)
    }

    /// Sum of coefficient Frobenius norms (the Wiener-style norm).
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(|m| m.norm()).sum()
    }

    /// Largest coefficient norm.
    pub fn sup_coeff_norm(&self) -> f64 {
        self.coeffs.values().map(|m| m.norm()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &LaurentLoop) -> LaurentLoop {
        let trunc = self.trunc.max(other.trunc);
        let mut out = LaurentLoop::new(trunc);
        out.twisted = self.twisted && other.twisted;
        for (&k, m) in &self.coeffs {
            out.set_coeff(k, *m);
        }
        for (&k, m) in &other.coeffs {
            out.set_coeff(k, out.coeff(k) + *m);
        }
        out
    }

    pub fn sub(&self, other: &LaurentLoop) -> LaurentLoop {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C64) -> LaurentLoop {
        let mut out = self.clone();
        for m in out.coeffs.values_mut() {
            *m = m.scale(s);
        }
        out
    }

    /// Cauchy product truncated to [−N, N]; the second component is the
    /// total norm of the discarded tail coefficients.
    pub fn mul_full(&self, other: &LaurentLoop) -> (LaurentLoop, f64) {
        let trunc = self.trunc.max(other.trunc);
        let mut acc: BTreeMap<i32, CMat3> = BTreeMap::new();
        for (&i, a) in &self.coeffs {
            for (&j, b) in &other.coeffs {
                let k = i + j;
                let prod = *a * *b;
                acc.entry(k)
                    .and_modify(|m| *m = *m + prod)
                    .or_insert(prod);
            }
        }
        let mut out = LaurentLoop::new(trunc);
        out.twisted = self.twisted && other.twisted;
        let mut tail = 0.0;
        for (k, m) in acc {
            if k.abs() <= trunc {
                if m.norm() > 0.0 {
                    out.coeffs.insert(k, m);
                }
            } else {
                tail += m.norm();
            }
        }
        (out, tail)
    }

    pub fn mul(&self, other: &LaurentLoop) -> LaurentLoop {
        self.mul_full(other).0
    }

    /// Coefficient-wise transpose: (Lᵀ)(λ) = L(λ)ᵀ.
    pub fn transpose(&self) -> LaurentLoop {
        let mut out = self.clone();
        for m in out.coeffs.values_mut() {
            *m = m.transpose();
        }
        out.twisted = false;
        out
    }

    /// Loop-level twist σ(L)(λ) = σ̂(L(ε⁻¹λ)): coefficient-wise
    /// A_k ↦ ε^{−k} σ̂(A_k).
    pub fn sigma_twist(&self) -> LaurentLoop {
        let mut out = LaurentLoop::new(self.trunc);
        out.twisted = self.twisted;
        for (&k, m) in &self.coeffs {
            out.coeffs
                .insert(k, twist_sigma_hat(m).scale(epsilon_pow(-(k as i64))));
        }
        out
    }

    /// Largest distance of any coefficient from its required eigenspace
    /// 𝔤_{k mod 6}. This is the twisting notion for Lie-algebra-valued
    /// loops (Maurer-Cartan forms, potentials).
    pub fn twist_defect(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|(&k, m)| (*m - eig_project(m, EigenIndex::new(k as i64))).norm())
            .fold(0.0, f64::max)
    }

    /// Checks the twisting invariant against a tolerance.
    pub fn twist_check(&self, tol: f64) -> bool {
        self.twist_defect() <= tol
    }

    /// Group-level twisting defect sup_λ ‖σ̂(L(ε⁻¹λ)) − L(λ)‖ over circle
    /// samples, with σ̂ the group automorphism g ↦ P(gᵀ)⁻¹P. Coefficients of
    /// group-valued loops (frames, factors, exponentials) are not graded;
    /// this is their equivariance check.
    pub fn group_twist_defect(&self, samples: usize) -> f64 {
        let mut worst = 0.0f64;
        for s in 0..samples {
            let lam = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * s as f64 / samples as f64);
            let shifted = self.eval(lam * epsilon_pow(-1)).unwrap();
            let here = self.eval(lam).unwrap();
            worst = worst.max(
                (crate::algebra::twist_sigma_hat_group(&shifted) - here).norm(),
            );
        }
        worst
    }

    /// Exponential in the truncated loop algebra (Taylor with
    /// scaling-and-squaring in the Wiener-style norm).
    pub fn exp(&self) -> LaurentLoop {
        let norm = self.norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let a = self.scale(C64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));
        let mut term = LaurentLoop::identity(self.trunc);
        let mut sum = LaurentLoop::identity(self.trunc);
        for k in 1..=30 {
            term = term.mul(&a).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
            if term.norm() < 1e-18 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.mul(&sum);
        }
        sum.twisted = self.twisted;
        sum
    }

    /// Inverse of a plus loop with invertible constant term. The Neumann
    /// series terminates within the truncation window.
    pub fn inverse_plus(&self) -> LaurentLoop {
        assert!(self.is_plus(), "inverse_plus needs a plus loop");
        let c0 = self.coeff(0).inverse();
        // self * c0^{-1}... = I + W with W strictly positive degrees.
        let c0_loop = LaurentLoop::constant(c0, self.trunc);
        let normalized = c0_loop.mul(self); // I + W
        let mut w = normalized.clone();
        w.set_coeff(0, w.coeff(0) - CMat3::identity());
        let mut acc = LaurentLoop::identity(self.trunc);
        let mut pw = LaurentLoop::identity(self.trunc);
        for k in 1..=(self.trunc as usize) {
            pw = pw.mul(&w);
            if pw.norm() == 0.0 {
                break;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc = acc.add(&pw.scale(C64::new(sign, 0.0)));
        }
        // self = c0⁻¹-normalized (I + W), so the inverse is (I + W)⁻¹ c0⁻¹-loop.
        acc.mul(&c0_loop)
    }

    /// Inverse of a minus loop with invertible constant term.
    pub fn inverse_minus(&self) -> LaurentLoop {
        assert!(self.is_minus(), "inverse_minus needs a minus loop");
        let flipped = self.flip_degrees();
        flipped.inverse_plus().flip_degrees()
    }

    /// λ ↦ λ⁻¹ on degrees.
    pub fn flip_degrees(&self) -> LaurentLoop {
        let mut out = LaurentLoop::new(self.trunc);
        for (&k, m) in &self.coeffs {
            out.coeffs.insert(-k, *m);
        }
        out
    }

    /// Keeps degrees ≥ 0 (resp. ≤ 0 for `minus_part`).
    pub fn plus_part(&self) -> LaurentLoop {
        let mut out = LaurentLoop::new(self.trunc);
        for (&k, m) in self.coeffs.range(0..) {
            out.coeffs.insert(k, *m);
        }
        out
    }

    pub fn minus_part_strict(&self) -> LaurentLoop {
        let mut out = LaurentLoop::new(self.trunc);
        for (&k, m) in self.coeffs.range(..0) {
            out.coeffs.insert(k, *m);
        }
        out
    }

    /// Recovers Laurent coefficients for |k| ≤ trunc from uniform samples of
    /// a matrix function on the unit circle.
    pub fn from_circle_samples<F: FnMut(C64) -> CMat3>(
        mut f: F,
        n_samples: usize,
        trunc: i32,
    ) -> LaurentLoop {
        let samples: Vec<CMat3> = (0..n_samples)
            .map(|m| {
                let theta = 2.0 * std::f64::consts::PI * m as f64 / n_samples as f64;
                f(C64::from_polar(1.0, theta))
            })
            .collect();
        let mut out = LaurentLoop::new(trunc);
        for k in -trunc..=trunc {
            let mut acc = CMat3::zero();
            for (m, s) in samples.iter().enumerate() {
                let theta = -2.0 * std::f64::consts::PI * (m as f64) * (k as f64)
                    / n_samples as f64;
                acc = acc + s.scale(C64::from_polar(1.0, theta));
            }
            let c = acc.scale(C64::new(1.0 / n_samples as f64, 0.0));
            if c.norm() > 1e-300 {
                out.coeffs.insert(k, c);
            }
        }
        out
    }

    /// Sup of ‖A(λ) − B(λ)‖ over `n` uniform unit-circle samples.
    pub fn circle_distance(&self, other: &LaurentLoop, n: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for m in 0..n {
            let theta = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
            let l = C64::from_polar(1.0, theta);
            let d = (self.eval(l).unwrap() - other.eval(l).unwrap()).norm();
            worst = worst.max(d);
        }
        worst
    }
}
