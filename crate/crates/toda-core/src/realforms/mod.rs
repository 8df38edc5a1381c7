//! Mechanical verification of the real-form classification: constraint
//! residuals for candidate involutions of the twisted loop algebra and
//! exhaustive desk-scale lattice searches recovering the canonical
//! representatives.
//!
//! Candidates are conjugate-linear involutions of sl₃ℂ in one of two
//! families, Ad(B)∘β with β(X) = X̄ or Ad(Q)∘τ₀ with τ₀(X) = −X̄ᵀ, required
//! to either commute with the twist σ̂ or satisfy σ̂τσ̂ = τ.

use crate::algebra::{
    epsilon_pow, omega_sq, p_sigma, twist_sigma_hat, CMat3, InvolutionSpec, LambdaMap,
};
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// The two shapes a conjugate-linear involution of sl₃ℂ can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvolutionFamily {
    /// τ = Ad(B)∘β, β(X) = X̄.
    Conjugation,
    /// τ = Ad(Q)∘τ₀, τ₀(X) = −X̄ᵀ (an outer automorphism composed with β).
    Outer,
}

/// The required relation with the order-6 twist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaRelation {
    /// στ = τσ (the conformal surface classes).
    Commuting,
    /// στσ = τ (the asymptotic surface classes).
    Split,
}

/// A candidate involution: the family, the relation it is tested against,
/// and its matrix (B or Q).
#[derive(Debug, Clone)]
pub struct ClassificationCandidate {
    pub family: InvolutionFamily,
    pub relation: SigmaRelation,
    pub matrix: CMat3,
}

impl ClassificationCandidate {
    pub fn new(family: InvolutionFamily, relation: SigmaRelation, matrix: CMat3) -> Self {
        assert!(matrix.det().norm() > 1e-12, "candidate matrix must be invertible");
        ClassificationCandidate { family, relation, matrix }
    }

    /// The induced conjugate-linear map on matrices.
    pub fn apply(&self, x: &CMat3) -> CMat3 {
        let b = &self.matrix;
        match self.family {
            InvolutionFamily::Conjugation => *b * x.conj() * b.inverse(),
            InvolutionFamily::Outer => -(*b * x.conj().transpose() * b.inverse()),
        }
    }

    /// Lift to a loop-algebra involution: commuting candidates pair with
    /// λ ↦ 1/λ̄, split candidates with λ ↦ λ̄.
    pub fn to_loop_involution(&self) -> InvolutionSpec {
        let lambda_map = match self.relation {
            SigmaRelation::Commuting => LambdaMap::InverseConjugate,
            SigmaRelation::Split => LambdaMap::Conjugate,
        };
        match self.family {
            InvolutionFamily::Conjugation => {
                InvolutionSpec::custom(self.matrix, false, lambda_map, 1.0)
            }
            InvolutionFamily::Outer => InvolutionSpec::custom(self.matrix, true, lambda_map, -1.0),
        }
    }
}

/// Residual record of a candidate against all its constraints.
#[derive(Debug, Clone)]
pub struct ConstraintDefects {
    /// Operator-level defect of τ² = id on the matrix basis.
    pub involution_sq: f64,
    /// Operator-level defect of the declared σ-relation on the basis.
    pub relation: f64,
    /// Named residuals of the printed constraint equations, each minimized
    /// over the free unit cube-root phase.
    pub equations: Vec<(&'static str, f64)>,
}

impl ConstraintDefects {
    pub fn max(&self) -> f64 {
        self.equations
            .iter()
            .map(|(_, d)| *d)
            .fold(self.involution_sq.max(self.relation), f64::max)
    }
}

fn cube_roots() -> [C64; 3] {
    [epsilon_pow(0), epsilon_pow(2), epsilon_pow(4)]
}

fn min_over_roots(lhs: &CMat3, rhs: &CMat3) -> f64 {
    cube_roots()
        .into_iter()
        .map(|mu| (*lhs - rhs.scale(mu)).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Matrix units spanning gl₃ (σ̂ and the candidates act on all of it; the
/// extra trace direction cannot create spurious defects).
fn basis() -> Vec<CMat3> {
    let mut v = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            v.push(CMat3::unit(i, j));
        }
    }
    v
}

/// Residuals of every constraint applying to the candidate.
pub fn constraint_defects(cand: &ClassificationCandidate) -> ConstraintDefects {
    let mut involution_sq = 0.0f64;
    let mut relation = 0.0f64;
    for e in basis() {
        involution_sq = involution_sq.max((cand.apply(&cand.apply(&e)) - e).norm());
        let d = match cand.relation {
            SigmaRelation::Commuting => {
                (twist_sigma_hat(&cand.apply(&e)) - cand.apply(&twist_sigma_hat(&e))).norm()
            }
            SigmaRelation::Split => {
                (twist_sigma_hat(&cand.apply(&twist_sigma_hat(&e))) - cand.apply(&e)).norm()
            }
        };
        relation = relation.max(d);
    }

    let b = &cand.matrix;
    let p = p_sigma();
    let omega = omega_sq();
    let mut equations = Vec::new();
    match (cand.family, cand.relation) {
        (InvolutionFamily::Conjugation, SigmaRelation::Commuting) => {
            // B = μ Ω B Ω and P(Bᵀ)⁻¹ = ρ B P̄.
            equations.push(("omega-conjugation", min_over_roots(b, &(omega * *b * omega))));
            let lhs = p * b.transpose().inverse();
            let rhs = *b * p.conj();
            equations.push(("sigma-commutation", min_over_roots(&lhs, &rhs)));
        }
        (InvolutionFamily::Conjugation, SigmaRelation::Split) => {
            // P(Bᵀ)⁻¹P = κB and Ω B Ω̄ = ηB.
            let lhs = p * b.transpose().inverse() * p;
            equations.push(("sigma-split", min_over_roots(&lhs, b)));
            let lhs2 = omega * *b * omega.conj();
            equations.push(("omega-split", min_over_roots(&lhs2, b)));
        }
        (InvolutionFamily::Outer, SigmaRelation::Commuting) => {
            // QP = μ P Q⁻¹.
            let lhs = *b * p;
            let rhs = p * b.inverse();
            equations.push(("sigma-commutation", min_over_roots(&lhs, &rhs)));
        }
        (InvolutionFamily::Outer, SigmaRelation::Split) => {
            // P Q⁻ᵀ Pᵀ = νQ.
            let lhs = p * b.transpose().inverse() * p.transpose();
            equations.push(("sigma-split", min_over_roots(&lhs, b)));
        }
    }
    ConstraintDefects { involution_sq, relation, equations }
}

/// Bounds of the lattice search.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    /// Entry phases are the n-th roots of unity.
    pub phase_count: usize,
    /// Entry magnitudes (log grid).
    pub magnitudes: Vec<f64>,
    /// Defect gate for survivors.
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            phase_count: 12,
            magnitudes: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            tol: 1e-10,
        }
    }
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 0, 2],
    [0, 2, 1],
    [2, 1, 0],
    [1, 2, 0],
    [2, 0, 1],
];

/// Reduces a survivor to its canonical representative under the allowed
/// moves: an arbitrary scalar (Ad ignores it) and conjugation by
/// D = diag(δ, δ⁻¹, 1), whose Ad commutes with σ. Deterministic recipe:
/// balance/rotate with D, then make the first nonzero entry of row 1 equal
/// to one with the scalar.
pub fn canonicalize(family: InvolutionFamily, m: &CMat3) -> CMat3 {
    let mut b = *m;
    let near = |z: C64| z.norm() > 1e-8;

    let apply_d = |b: &CMat3, delta: C64, family: InvolutionFamily| -> CMat3 {
        let d = CMat3::diag(delta, delta.inv(), C64::new(1.0, 0.0));
        match family {
            InvolutionFamily::Conjugation => d * *b * d.conj().inverse(),
            InvolutionFamily::Outer => d * *b * d.conj(),
        }
    };

    if near(b.get(0, 1)) && near(b.get(1, 0)) {
        // Transposition pattern of P₀ type.
        match family {
            InvolutionFamily::Conjugation => {
                // |δ|² rescales B₁₂ and B₂₁ oppositely: balance them.
                let r = (b.get(1, 0).norm() / b.get(0, 1).norm()).powf(0.25);
                b = apply_d(&b, C64::new(r, 0.0), family);
            }
            InvolutionFamily::Outer => {
                // Scalar sets Q₁₂ = 1; the residual one-parameter move
                // (D-phase compensated by a scalar, which keeps Q₁₂ fixed)
                // rotates Q₃₃ onto the negative real axis.
                b = b.scale(b.get(0, 1).inv());
                let q33 = b.get(2, 2);
                if near(q33) {
                    let theta = (q33.arg() - std::f64::consts::PI) / 2.0;
                    b = apply_d(&b, C64::from_polar(1.0, theta), family)
                        .scale(C64::from_polar(1.0, -2.0 * theta));
                }
            }
        }
    } else if near(b.get(0, 0)) {
        // Diagonal pattern.
        match family {
            InvolutionFamily::Conjugation => {
                // Scalar pins the (3,3) entry, a D-phase rotates (1,1).
                b = b.scale(b.get(2, 2).inv());
                let theta = -b.get(0, 0).arg() / 2.0;
                b = apply_d(&b, C64::from_polar(1.0, theta), family);
            }
            InvolutionFamily::Outer => {
                b = b.scale(b.get(2, 2).inv());
                let r = b.get(0, 0).norm().powf(-0.5);
                b = apply_d(&b, C64::new(r, 0.0), family);
            }
        }
    }

    // Free scalar: first nonzero entry of row 1 becomes exactly 1.
    for j in 0..3 {
        let z = b.get(0, j);
        if near(z) {
            b = b.scale(z.inv());
            break;
        }
    }
    // Snap tiny residue.
    let mut out = CMat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            let z = b.get(i, j);
            if z.norm() > 1e-8 {
                out.set(i, j, z);
            }
        }
    }
    out
}

fn candidate_key(m: &CMat3) -> Vec<i64> {
    let mut key = Vec::with_capacity(18);
    for i in 0..3 {
        for j in 0..3 {
            let z = m.get(i, j);
            key.push((z.re * 1e6).round() as i64);
            key.push((z.im * 1e6).round() as i64);
        }
    }
    key
}

/// Enumerates generalized permutation matrices over the configured lattice,
/// keeps those satisfying every constraint below `config.tol`, and returns
/// the distinct canonical representatives (sorted deterministically).
pub fn classify_involutions(
    family: InvolutionFamily,
    relation: SigmaRelation,
    config: &SearchConfig,
) -> Result<Vec<ClassificationCandidate>> {
    let phases: Vec<C64> = (0..config.phase_count)
        .map(|k| {
            C64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * k as f64 / config.phase_count as f64,
            )
        })
        .collect();
    let entries: Vec<C64> = config
        .magnitudes
        .iter()
        .flat_map(|&m| phases.iter().map(move |&p| p * m))
        .collect();

    let mut canon: Vec<(Vec<i64>, ClassificationCandidate)> = Vec::new();
    for perm in PERMUTATIONS {
        for &e0 in &entries {
            for &e1 in &entries {
                for &e2 in &entries {
                    let mut m = CMat3::zero();
                    m.set(0, perm[0], e0);
                    m.set(1, perm[1], e1);
                    m.set(2, perm[2], e2);
                    let cand = ClassificationCandidate { family, relation, matrix: m };
                    let defects = constraint_defects(&cand);
                    if defects.max() > config.tol {
                        continue;
                    }
                    let c = canonicalize(family, &m);
                    let key = candidate_key(&c);
                    if !canon.iter().any(|(k, _)| *k == key) {
                        canon.push((key, ClassificationCandidate { family, relation, matrix: c }));
                    }
                }
            }
        }
    }
    if canon.is_empty() {
        return Err(Error::EmptySearch { tol: config.tol });
    }
    canon.sort_by(|(a, _), (b, _)| a.cmp(b));
    Ok(canon.into_iter().map(|(_, c)| c).collect())
}
