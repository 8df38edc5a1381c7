//! The real-form involutions of the twisted loop algebra, one per surface
//! class (the definite affine class splits into an elliptic and a
//! hyperbolic variant).

use super::loops::LaurentLoop;
use super::mat3::{i21, p0, CMat3};
use num_complex::Complex64 as C64;

/// The six geometry tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceClass {
    /// Minimal Lagrangian surfaces in CP².
    Cp2,
    /// Minimal Lagrangian surfaces in CH².
    Ch2,
    /// Timelike minimal Lagrangian surfaces in CH²₁.
    Ch21,
    /// Elliptic definite proper affine spheres (H = +1).
    AffDefEll,
    /// Hyperbolic definite proper affine spheres (H = −1).
    AffDefHyp,
    /// Indefinite proper affine spheres (H = −1).
    AffIndef,
}

impl SurfaceClass {
    pub const ALL: [SurfaceClass; 6] = [
        SurfaceClass::Cp2,
        SurfaceClass::Ch2,
        SurfaceClass::Ch21,
        SurfaceClass::AffDefEll,
        SurfaceClass::AffDefHyp,
        SurfaceClass::AffIndef,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SurfaceClass::Cp2 => "cp2",
            SurfaceClass::Ch2 => "ch2",
            SurfaceClass::Ch21 => "ch21",
            SurfaceClass::AffDefEll => "aff-def-ell",
            SurfaceClass::AffDefHyp => "aff-def-hyp",
            SurfaceClass::AffIndef => "aff-indef",
        }
    }

    /// Conformal classes use complex coordinates and λ on the unit circle;
    /// the others use asymptotic-line coordinates and λ on the positive
    /// real axis.
    pub fn is_conformal(self) -> bool {
        !matches!(self, SurfaceClass::Ch21 | SurfaceClass::AffIndef)
    }
}

/// λ-substitution of the loop-level involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMap {
    /// λ ↦ 1/λ̄ (conformal classes): conjugation flips coefficient degrees.
    InverseConjugate,
    /// λ ↦ λ̄ (asymptotic classes): conjugation preserves degrees.
    Conjugate,
}

/// A concrete real-form involution τ.
///
/// At the Lie-algebra level
/// τ̂(X) = sign · C · op(X̄) · C⁻¹, with op = transpose when `transpose` is
/// set; at the group level a transpose comes with an inverse instead of the
/// sign. On loops the λ-substitution from `lambda_map` is applied.
#[derive(Debug, Clone)]
pub struct InvolutionSpec {
    pub class: Option<SurfaceClass>,
    pub conjugator: CMat3,
    pub transpose: bool,
    pub lambda_map: LambdaMap,
    pub sign: f64,
}

impl InvolutionSpec {
    /// The canonical involution of a surface class.
    pub fn for_class(class: SurfaceClass) -> Self {
        let (conjugator, transpose, lambda_map, sign) = match class {
            SurfaceClass::Cp2 => {
                (CMat3::identity(), true, LambdaMap::InverseConjugate, -1.0)
            }
            SurfaceClass::Ch2 => (i21(), true, LambdaMap::InverseConjugate, -1.0),
            SurfaceClass::Ch21 => (p0(), true, LambdaMap::Conjugate, -1.0),
            SurfaceClass::AffDefEll => (p0(), false, LambdaMap::InverseConjugate, 1.0),
            SurfaceClass::AffDefHyp => {
                (i21() * p0(), false, LambdaMap::InverseConjugate, 1.0)
            }
            SurfaceClass::AffIndef => {
                (CMat3::identity(), false, LambdaMap::Conjugate, 1.0)
            }
        };
        InvolutionSpec { class: Some(class), conjugator, transpose, lambda_map, sign }
    }

    /// An involution outside the canonical table (used by the
    /// classification searches).
    pub fn custom(conjugator: CMat3, transpose: bool, lambda_map: LambdaMap, sign: f64) -> Self {
        InvolutionSpec { class: None, conjugator, transpose, lambda_map, sign }
    }

    /// σ and τ commute for the conformal classes; the asymptotic ones
    /// satisfy στσ = τ instead.
    pub fn commutes_with_sigma(&self) -> bool {
        self.lambda_map == LambdaMap::InverseConjugate
    }

    /// Lie-algebra level action on a constant matrix.
    pub fn apply_matrix(&self, x: &CMat3) -> CMat3 {
        let conj = x.conj();
        let core = if self.transpose { conj.transpose() } else { conj };
        (self.conjugator * core * self.conjugator.inverse()).scale(C64::new(self.sign, 0.0))
    }

    /// Group level action on a constant matrix (inverse-transpose where the
    /// algebra has minus-transpose).
    pub fn apply_group(&self, g: &CMat3) -> CMat3 {
        let conj = g.conj();
        let core = if self.transpose {
            conj.transpose().inverse()
        } else {
            conj
        };
        self.conjugator * core * self.conjugator.inverse()
    }

    /// Lie-algebra level action on a loop, coefficient-wise:
    /// the conjugation composed with the λ-substitution.
    pub fn apply_loop(&self, l: &LaurentLoop) -> LaurentLoop {
        let mut out = LaurentLoop::new(l.trunc());
        out.twisted = l.twisted;
        for (k, m) in l.support() {
            let src = self.apply_matrix(m);
            let dst = match self.lambda_map {
                LambdaMap::InverseConjugate => -k,
                LambdaMap::Conjugate => k,
            };
            out.set_coeff(dst, src);
        }
        out
    }

    /// Group-level action on a loop for the involutions without a
    /// transpose (AffDef, AffIndef), where the action stays
    /// coefficient-wise.
    pub fn apply_loop_group_linear(&self, l: &LaurentLoop) -> LaurentLoop {
        assert!(!self.transpose, "transpose involutions act nonlinearly on group loops");
        let mut out = LaurentLoop::new(l.trunc());
        out.twisted = l.twisted;
        for (k, m) in l.support() {
            let src = self.apply_group(m);
            let dst = match self.lambda_map {
                LambdaMap::InverseConjugate => -k,
                LambdaMap::Conjugate => k,
            };
            out.set_coeff(dst, src);
        }
        out
    }

    /// Group-level action evaluated pointwise: returns τ(g) at `lambda`
    /// given a sampler for g. `g_at` is queried at the mapped parameter.
    pub fn apply_group_at<F: FnOnce(C64) -> CMat3>(&self, lambda: C64, g_at: F) -> CMat3 {
        let mapped = match self.lambda_map {
            LambdaMap::InverseConjugate => C64::new(1.0, 0.0) / lambda.conj(),
            LambdaMap::Conjugate => lambda.conj(),
        };
        self.apply_group(&g_at(mapped))
    }

    /// Defect of the group reality condition τ(F) = F for a frame value at
    /// a geometric λ (|λ| = 1 conformal, λ real asymptotic, both of which
    /// are fixed by the λ-substitution).
    pub fn group_reality_defect(&self, f: &CMat3) -> f64 {
        (self.apply_group(f) - *f).norm()
    }
}
