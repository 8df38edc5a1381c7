//! Extended-frame integration dF = F·α^λ, surface extraction, and the
//! geometric validators for the extracted meshes.

mod integrate;
mod surface;
mod validate;

pub use integrate::{integrate_frame, FrameOptions};
pub use surface::{extract_surface, real_frame_conjugate, MeshData, SurfaceMesh};
pub use validate::{validate_surface, validate_surface_masked, CheckResult, ValidationReport};

use crate::algebra::CMat3;
use num_complex::Complex64 as C64;

/// λ-slice of an extended frame sampled over the grid.
#[derive(Debug, Clone)]
pub struct FrameField {
    frames: Vec<CMat3>,
    pub dims: (usize, usize),
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
    pub lambda: C64,
    pub base_index: (usize, usize),
    pub base_value: CMat3,
    /// Max grid deviation against the transposed integration order.
    pub path_defect: f64,
    /// Max |det F − 1| observed before renormalization.
    pub det_drift: f64,
}

impl FrameField {
    pub fn new(
        dims: (usize, usize),
        origin: (f64, f64),
        spacing: (f64, f64),
        lambda: C64,
        base_value: CMat3,
    ) -> Self {
        FrameField {
            frames: vec![CMat3::identity(); dims.0 * dims.1],
            dims,
            origin,
            spacing,
            lambda,
            base_index: (0, 0),
            base_value,
            path_defect: 0.0,
            det_drift: 0.0,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CMat3 {
        &self.frames[i * self.dims.1 + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, m: CMat3) {
        self.frames[i * self.dims.1 + j] = m;
    }

    pub fn frames(&self) -> &[CMat3] {
        &self.frames
    }

    /// Largest group-level reality defect ‖τ(F) − F‖ over the grid.
    pub fn reality_defect(&self, spec: &crate::algebra::InvolutionSpec) -> f64 {
        self.frames
            .iter()
            .map(|f| spec.group_reality_defect(f))
            .fold(0.0, f64::max)
    }
}
