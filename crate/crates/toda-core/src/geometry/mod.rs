//! The six geometry descriptors, their λ-family Maurer-Cartan forms, the
//! Tzitzéica residuals and the twisting/reality defect diagnostics.

mod alpha;
mod residual;

pub use alpha::{
    alpha_field, build_alpha, flatness_defect, symmetry_defects, AlphaField, AlphaParts,
};
pub use residual::tzitzeica_residual;
pub(crate) use residual::nonlinearity_signs;

use crate::algebra::{i21, p0, CMat3, InvolutionSpec, SurfaceClass};
use num_complex::Complex64 as C64;

/// Coordinate kind of a surface class: conformal (a, b) = (z, z̄) with the
/// convention f_z = ½(f_x − i f_y), or asymptotic (a, b) = (u, v).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Conformal,
    Asymptotic,
}

/// Everything fixed by the choice of surface class: involution, Hermitian
/// form, affine mean curvature and the λ parameter set.
#[derive(Debug, Clone)]
pub struct GeometrySpec {
    pub class: SurfaceClass,
    pub coord_kind: CoordKind,
    pub involution: InvolutionSpec,
    /// Matrix of the invariant Hermitian form ⟨z, w⟩ = Σ zᵢ Sᵢⱼ w̄ⱼ for the
    /// Lagrangian classes; `None` for the affine ones.
    pub signature: Option<CMat3>,
    /// Affine mean curvature for the affine-sphere classes (±1), −1 for the
    /// proper indefinite case; unused for the Lagrangian classes.
    pub h: f64,
    pub lambda_samples: Vec<C64>,
}

impl GeometrySpec {
    pub fn new(class: SurfaceClass) -> Self {
        let coord_kind = if class.is_conformal() { CoordKind::Conformal } else { CoordKind::Asymptotic };
        let signature = match class {
            SurfaceClass::Cp2 => Some(CMat3::identity()),
            SurfaceClass::Ch2 => Some(i21()),
            SurfaceClass::Ch21 => Some(p0()),
            _ => None,
        };
        let h = match class {
            SurfaceClass::AffDefEll => 1.0,
            _ => -1.0,
        };
        let lambda_samples = match coord_kind {
            CoordKind::Conformal => (0..16)
                .map(|k| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 16.0))
                .collect(),
            CoordKind::Asymptotic => {
                vec![C64::new(0.5, 0.0), C64::new(1.0, 0.0), C64::new(2.0, 0.0)]
            }
        };
        GeometrySpec {
            class,
            coord_kind,
            involution: InvolutionSpec::for_class(class),
            signature,
            h,
            lambda_samples,
        }
    }

    pub fn with_lambda_samples(mut self, samples: Vec<C64>) -> Self {
        assert!(samples.iter().all(|l| l.norm() > 0.0), "lambda samples must be nonzero");
        self.lambda_samples = samples;
        self
    }

    /// ⟨z, w⟩ in the class's Hermitian form (Lagrangian classes only).
    pub fn hermitian_form(&self, z: &[C64; 3], w: &[C64; 3]) -> C64 {
        let s = self.signature.expect("hermitian form only for Lagrangian classes");
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..3 {
            for j in 0..3 {
                acc += z[i] * s.get(i, j) * w[j].conj();
            }
        }
        acc
    }

    /// Target value of ⟨f, f⟩ for the homogeneous lift.
    pub fn lift_norm_target(&self) -> f64 {
        match self.class {
            SurfaceClass::Cp2 => 1.0,
            SurfaceClass::Ch2 | SurfaceClass::Ch21 => -1.0,
            _ => panic!("no lift target for affine classes"),
        }
    }
}

/// Pointwise data entering the Maurer-Cartan form: the metric potential ω,
/// its partials along the two coordinates (x, y for conformal classes,
/// u, v for asymptotic ones) and the cubic-differential values Q, R.
/// Conformal classes store R = conj(Q) so all six tags share one shape.
#[derive(Debug, Clone, Copy)]
pub struct PointData {
    pub omega: f64,
    pub omega_a: f64,
    pub omega_b: f64,
    pub q: C64,
    pub r: C64,
}

impl PointData {
    pub fn conformal(omega: f64, omega_x: f64, omega_y: f64, q: C64) -> Self {
        PointData { omega, omega_a: omega_x, omega_b: omega_y, q, r: q.conj() }
    }

    pub fn asymptotic(omega: f64, omega_u: f64, omega_v: f64, q: C64, r: C64) -> Self {
        PointData { omega, omega_a: omega_u, omega_b: omega_v, q, r }
    }

    /// Distance of (Q, R) from the axis required by the class: imaginary
    /// axis for CH²₁, real axis for indefinite affine spheres, none
    /// otherwise.
    pub fn reality_defect(&self, class: SurfaceClass) -> f64 {
        match class {
            SurfaceClass::Ch21 => self.q.re.abs().max(self.r.re.abs()),
            SurfaceClass::AffIndef => self.q.im.abs().max(self.r.im.abs()),
            _ => 0.0,
        }
    }
}
