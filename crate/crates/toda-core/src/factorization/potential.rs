//! λ-graded matrix-valued potentials and their path integration.

use crate::algebra::{grading_defect, CMat3, InvolutionSpec, LaurentLoop};
use crate::{Error, Result};
use num_complex::Complex64 as C64;
use std::collections::BTreeMap;

/// Which coordinate the coefficient functions depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialVar {
    /// Holomorphic in z (conformal potentials, η = Σ λʲ η_j(z) dz).
    Z,
    /// Functions of u only (first member of an asymptotic pair).
    U,
    /// Functions of v only (second member of an asymptotic pair).
    V,
}

/// Matrix-valued polynomial Σ_k A_k tᵏ.
#[derive(Debug, Clone)]
pub struct MatPoly {
    coeffs: Vec<CMat3>,
}

impl MatPoly {
    pub fn new(coeffs: Vec<CMat3>) -> Self {
        assert!(!coeffs.is_empty());
        MatPoly { coeffs }
    }

    pub fn constant(m: CMat3) -> Self {
        MatPoly { coeffs: vec![m] }
    }

    pub fn eval(&self, t: C64) -> CMat3 {
        let mut acc = CMat3::zero();
        let mut p = C64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc = acc + c.scale(p);
            p *= t;
        }
        acc
    }

    pub fn coeffs(&self) -> &[CMat3] {
        &self.coeffs
    }
}

const GRADING_TOL: f64 = 1e-12;
const REALITY_TOL: f64 = 1e-9;

/// λ-graded potential: degree j ↦ coefficient function η_j, with every
/// polynomial coefficient of η_j in the eigenspace 𝔤_j.
#[derive(Debug, Clone)]
pub struct Potential {
    terms: BTreeMap<i32, MatPoly>,
    pub var: PotentialVar,
}

impl Potential {
    /// Conformal holomorphic potential: λ-degrees ≥ −1 with −1 present.
    pub fn conformal(terms: BTreeMap<i32, MatPoly>) -> Result<Self> {
        if terms.keys().next() != Some(&-1) {
            return Err(Error::InvalidInput(
                "conformal potential must have lowest degree exactly -1".into(),
            ));
        }
        let p = Potential { terms, var: PotentialVar::Z };
        p.check_grading()?;
        Ok(p)
    }

    /// First member of an asymptotic pair: degrees ≥ −1 in functions of u,
    /// coefficients τ̂-fixed.
    pub fn asymptotic_u(terms: BTreeMap<i32, MatPoly>, spec: &InvolutionSpec) -> Result<Self> {
        if terms.keys().next() != Some(&-1) {
            return Err(Error::InvalidInput(
                "u-potential must have lowest degree exactly -1".into(),
            ));
        }
        let p = Potential { terms, var: PotentialVar::U };
        p.check_grading()?;
        p.check_reality(spec)?;
        Ok(p)
    }

    /// Second member of an asymptotic pair: degrees ≤ +1 in functions of v,
    /// coefficients τ̂-fixed.
    pub fn asymptotic_v(terms: BTreeMap<i32, MatPoly>, spec: &InvolutionSpec) -> Result<Self> {
        if terms.keys().next_back() != Some(&1) {
            return Err(Error::InvalidInput(
                "v-potential must have highest degree exactly +1".into(),
            ));
        }
        let p = Potential { terms, var: PotentialVar::V };
        p.check_grading()?;
        p.check_reality(spec)?;
        Ok(p)
    }

    fn check_grading(&self) -> Result<()> {
        for (&j, poly) in &self.terms {
            for c in poly.coeffs() {
                let d = grading_defect(c, (j as i64).into());
                if d > GRADING_TOL {
                    return Err(Error::InvalidInput(format!(
                        "degree-{j} coefficient off its eigenspace by {d:.3e}"
                    )));
                }
            }
        }
        Ok(())
    }

    fn check_reality(&self, spec: &InvolutionSpec) -> Result<()> {
        for (&j, poly) in &self.terms {
            for c in poly.coeffs() {
                let d = (spec.apply_matrix(c) - *c).norm();
                if d > REALITY_TOL {
                    return Err(Error::RealityViolation {
                        class: spec.class.map(|c| c.name()).unwrap_or("custom"),
                        detail: format!("degree-{j} coefficient off the real form by {d:.3e}"),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> &BTreeMap<i32, MatPoly> {
        &self.terms
    }

    /// The λ⁻¹ coefficient function evaluated at t (used for the metric and
    /// cubic recovery in the construction pipelines).
    pub fn lowest(&self, t: C64) -> CMat3 {
        self.terms.get(&-1).map(|p| p.eval(t)).unwrap_or_else(CMat3::zero)
    }

    /// η(t) as a loop (without the dt).
    pub fn eval_loop(&self, t: C64, trunc: i32) -> LaurentLoop {
        let mut l = LaurentLoop::new(trunc);
        l.twisted = true;
        for (&j, poly) in &self.terms {
            if j.abs() <= trunc {
                l.set_coeff(j, poly.eval(t));
            }
        }
        l
    }
}

/// The potential pair of the asymptotic-line pipeline.
#[derive(Debug, Clone)]
pub struct PotentialPair {
    pub eta1: Potential,
    pub eta2: Potential,
}

impl PotentialPair {
    pub fn new(
        eta1_terms: BTreeMap<i32, MatPoly>,
        eta2_terms: BTreeMap<i32, MatPoly>,
        spec: &InvolutionSpec,
    ) -> Result<Self> {
        Ok(PotentialPair {
            eta1: Potential::asymptotic_u(eta1_terms, spec)?,
            eta2: Potential::asymptotic_v(eta2_terms, spec)?,
        })
    }
}

/// Solves dC = C·η along the straight path t(k) = start + k·step,
/// k = 0..n_steps, with C(start) = base. Loop-space RK4 with two half-steps
/// per node interval; the output stays twisted for graded inputs.
pub fn integrate_potential(
    eta: &Potential,
    start: C64,
    step: C64,
    n_steps: usize,
    base: &LaurentLoop,
    trunc: i32,
) -> Vec<LaurentLoop> {
    let mut out = Vec::with_capacity(n_steps + 1);
    let mut c = base.clone();
    c.twisted = base.twisted;
    out.push(c.clone());
    let two = C64::new(2.0, 0.0);
    for k in 0..n_steps {
        let t0 = start + step * k as f64;
        for half in 0..2 {
            let a = t0 + step * (0.5 * half as f64);
            let dt = step * 0.5;
            let h0 = eta.eval_loop(a, trunc);
            let hm = eta.eval_loop(a + dt * 0.5, trunc);
            let h1 = eta.eval_loop(a + dt, trunc);
            // k_i are loop-valued; dC = C·η(t)·dt.
            let k1 = c.mul(&h0).scale(dt);
            let k2 = c.add(&k1.scale(C64::new(0.5, 0.0))).mul(&hm).scale(dt);
            let k3 = c.add(&k2.scale(C64::new(0.5, 0.0))).mul(&hm).scale(dt);
            let k4 = c.add(&k3).mul(&h1).scale(dt);
            let incr = k1.add(&k2.scale(two)).add(&k3.scale(two)).add(&k4)
                .scale(C64::new(1.0 / 6.0, 0.0));
            c = c.add(&incr);
        }
        out.push(c.clone());
    }
    out
}
