//! Surface extraction: f = F·e₃, with the real-frame conjugation for the
//! definite affine classes.

use super::FrameField;
use crate::algebra::{CMat3, SurfaceClass};
use crate::geometry::GeometrySpec;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

const REAL_TOL: f64 = 1e-8;

/// Sample storage of a surface mesh.
#[derive(Debug, Clone)]
pub enum MeshData {
    /// Real points in ℝ³ (affine classes, or chart-projected lifts).
    R3(Vec<[f64; 3]>),
    /// Homogeneous lifts in ℂ³ (Lagrangian classes).
    Lift(Vec<[C64; 3]>),
}

/// Grid-sampled surface.
#[derive(Debug, Clone)]
pub struct SurfaceMesh {
    pub class: SurfaceClass,
    pub data: MeshData,
    pub dims: (usize, usize),
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
}

impl SurfaceMesh {
    pub fn len(&self) -> usize {
        match &self.data {
            MeshData::R3(v) => v.len(),
            MeshData::Lift(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sample as a complex 3-vector regardless of storage.
    pub fn sample(&self, i: usize, j: usize) -> [C64; 3] {
        let k = i * self.dims.1 + j;
        match &self.data {
            MeshData::R3(v) => {
                let p = v[k];
                [C64::new(p[0], 0.0), C64::new(p[1], 0.0), C64::new(p[2], 0.0)]
            }
            MeshData::Lift(v) => v[k],
        }
    }
}

/// The conjugator Ad(W) mapping a definite-affine complex frame to a real
/// SL₃ℝ frame: W = [[1/√2, 1/√2, 0], [i/√2, −i/√2, 0], [0, 0, s]] with
/// s = i for the elliptic case and s = 1 for the hyperbolic one. The
/// hyperbolic W is composed with the equi-affine reflection diag(−1, 1, 1):
/// without it the extracted immersion is orientation-reversed and the
/// volume identity det[f_z f_z̄ f_zz̄] = i e^{2ω} picks up a sign.
fn real_conjugator(class: SurfaceClass) -> CMat3 {
    let r = 1.0 / 2.0f64.sqrt();
    let (flip, s) = match class {
        SurfaceClass::AffDefEll => (1.0, C64::new(0.0, 1.0)),
        SurfaceClass::AffDefHyp => (-1.0, C64::new(1.0, 0.0)),
        _ => panic!("real conjugator only for the definite affine classes"),
    };
    CMat3::from_rows([
        [C64::new(flip * r, 0.0), C64::new(flip * r, 0.0), C64::new(0.0, 0.0)],
        [C64::new(0.0, r), C64::new(0.0, -r), C64::new(0.0, 0.0)],
        [C64::new(0.0, 0.0), C64::new(0.0, 0.0), s],
    ])
}

/// Conjugates a definite-affine frame to a real SL₃ℝ frame. Fails with
/// `ImaginaryResidue` when entries are not real to 1e−8, which indicates an
/// upstream reality defect.
pub fn real_frame_conjugate(geom: &GeometrySpec, field: &FrameField) -> Result<FrameField> {
    if !matches!(geom.class, SurfaceClass::AffDefEll | SurfaceClass::AffDefHyp) {
        return Err(Error::InvalidInput(format!(
            "real_frame_conjugate applies to definite affine classes, got {}",
            geom.class.name()
        )));
    }
    let w = real_conjugator(geom.class);
    let w_inv = w.inverse();
    let mut out = field.clone();
    let mut max_imag = 0.0f64;
    for i in 0..field.dims.0 {
        for j in 0..field.dims.1 {
            let m = w * *field.get(i, j) * w_inv;
            max_imag = max_imag.max(m.max_imag());
            out.set(i, j, m);
        }
    }
    if max_imag > REAL_TOL {
        return Err(Error::ImaginaryResidue { max_imag, tol: REAL_TOL });
    }
    out.base_value = w * field.base_value * w_inv;
    Ok(out)
}

/// Extracts the surface from a frame field: third column of the
/// (real-conjugated) frame for the affine classes, the homogeneous lift
/// for the Lagrangian ones.
pub fn extract_surface(geom: &GeometrySpec, field: &FrameField) -> Result<SurfaceMesh> {
    let (na, nb) = field.dims;
    let data = match geom.class {
        SurfaceClass::Cp2 | SurfaceClass::Ch2 | SurfaceClass::Ch21 => {
            let mut v = Vec::with_capacity(na * nb);
            for i in 0..na {
                for j in 0..nb {
                    v.push(field.get(i, j).col(2));
                }
            }
            MeshData::Lift(v)
        }
        SurfaceClass::AffIndef => {
            let mut v = Vec::with_capacity(na * nb);
            let mut max_imag = 0.0f64;
            for i in 0..na {
                for j in 0..nb {
                    let c = field.get(i, j).col(2);
                    for z in &c {
                        max_imag = max_imag.max(z.im.abs());
                    }
                    v.push([c[0].re, c[1].re, c[2].re]);
                }
            }
            if max_imag > REAL_TOL {
                return Err(Error::ImaginaryResidue { max_imag, tol: REAL_TOL });
            }
            MeshData::R3(v)
        }
        SurfaceClass::AffDefEll | SurfaceClass::AffDefHyp => {
            let real = real_frame_conjugate(geom, field)?;
            let mut v = Vec::with_capacity(na * nb);
            for i in 0..na {
                for j in 0..nb {
                    let c = real.get(i, j).col(2);
                    v.push([c[0].re, c[1].re, c[2].re]);
                }
            }
            MeshData::R3(v)
        }
    };
    Ok(SurfaceMesh {
        class: geom.class,
        data,
        dims: field.dims,
        origin: field.origin,
        spacing: field.spacing,
    })
}
