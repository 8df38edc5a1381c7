//! The λ-family Maurer-Cartan forms α^λ = λ⁻¹U₋₁ da + α₀ + λV₁ db and the
//! twisting/reality diagnostics.

use super::{CoordKind, GeometrySpec, PointData};
use crate::algebra::{grading_defect, CMat3, SurfaceClass};
use crate::pde::ScalarField;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

const REALITY_TOL: f64 = 1e-9;

/// The graded pieces of α^λ: U(λ) = λ⁻¹·u_m1 + u_0, V(λ) = v_0 + λ·v_p1.
#[derive(Debug, Clone, Copy)]
pub struct AlphaParts {
    pub u_m1: CMat3,
    pub u_0: CMat3,
    pub v_0: CMat3,
    pub v_p1: CMat3,
}

impl AlphaParts {
    pub fn u(&self, lambda: C64) -> CMat3 {
        self.u_m1.scale(C64::new(1.0, 0.0) / lambda) + self.u_0
    }

    pub fn v(&self, lambda: C64) -> CMat3 {
        self.v_0 + self.v_p1.scale(lambda)
    }
}

fn parts_unchecked(geom: &GeometrySpec, p: &PointData) -> AlphaParts {
    let z = C64::new(0.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let s = C64::new((0.5 * p.omega).exp(), 0.0);
    let em = (-p.omega).exp();
    let qd = p.q * em;
    let rd = p.r * em;

    // Diagonal λ⁰ parts from the ω-derivatives.
    let (d_u, d_v) = match geom.coord_kind {
        CoordKind::Conformal => {
            // ω_z = ½(ω_x − i ω_y), ω_z̄ its conjugate (ω is real).
            let wz = C64::new(0.5 * p.omega_a, -0.5 * p.omega_b);
            (wz * 0.5, wz.conj() * 0.5)
        }
        CoordKind::Asymptotic => {
            (C64::new(0.5 * p.omega_a, 0.0), C64::new(0.5 * p.omega_b, 0.0))
        }
    };
    let u_0 = CMat3::diag(d_u, -d_u, z);
    let v_0 = CMat3::diag(-d_v, d_v, z);

    // Off-diagonal entries (u13, u21, u32) and (v12, v23, v31) per class.
    // CP² uses the constant gauge diag(iλ, iλ⁻¹, 1): it is the one that
    // places U₋₁, V₁ in the ±1 eigenspaces of the twist (the λ-gauge leaves
    // a component in 𝔤₂).
    let (u13, u21, u32, v12, v23, v31) = match geom.class {
        SurfaceClass::Cp2 => (-i * s, -qd, -i * s, rd, -i * s, -i * s),
        SurfaceClass::Ch2 => (s, -qd, s, rd, s, s),
        SurfaceClass::Ch21 => (s, -qd, s, -rd, s, s),
        SurfaceClass::AffDefEll => (i * s, qd, i * s, rd, i * s, i * s),
        SurfaceClass::AffDefHyp => (s, qd, s, rd, s, s),
        SurfaceClass::AffIndef => (s, qd, s, rd, s, s),
    };
    let u_m1 = CMat3::from_rows([[z, z, u13], [u21, z, z], [z, u32, z]]);
    let v_p1 = CMat3::from_rows([[z, v12, z], [z, z, v23], [v31, z, z]]);

    AlphaParts { u_m1, u_0, v_0, v_p1 }
}

/// Graded pieces of the Maurer-Cartan form for admissible point data.
pub fn alpha_parts(geom: &GeometrySpec, p: &PointData) -> Result<AlphaParts> {
    let defect = p.reality_defect(geom.class);
    if defect > REALITY_TOL {
        return Err(Error::RealityViolation {
            class: geom.class.name(),
            detail: format!("Q/R off the required axis by {defect:.3e}"),
        });
    }
    Ok(parts_unchecked(geom, p))
}

/// The printed λ-dependent Lax pair (U, V) with the constant gauge folded
/// in. U carries only λ⁻¹ and λ⁰ parts, V only λ⁰ and λ¹ parts.
pub fn build_alpha(geom: &GeometrySpec, p: &PointData, lambda: C64) -> Result<(CMat3, CMat3)> {
    if lambda.norm() == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let parts = alpha_parts(geom, p)?;
    Ok((parts.u(lambda), parts.v(lambda)))
}

/// Twisting and reality defects of α^λ.
///
/// The twist defect measures the distance of each graded part from its
/// eigenspace. The reality defect measures ‖τ(α)(λ) − α(λ)‖ over the
/// geometry's λ samples with the full 1-form law: conformal conjugation
/// swaps the dz/dz̄ parts, asymptotic conjugation fixes each part.
pub fn symmetry_defects(geom: &GeometrySpec, p: &PointData) -> (f64, f64) {
    let parts = parts_unchecked(geom, p);
    let twist = grading_defect(&parts.u_m1, (-1i64).into())
        .max(grading_defect(&parts.u_0, 0.into()))
        .max(grading_defect(&parts.v_0, 0.into()))
        .max(grading_defect(&parts.v_p1, 1.into()));

    // Pointwise real-form condition at each sample: on the geometric
    // parameter set (|λ| = 1 conformal, λ > 0 asymptotic) the involution's
    // λ-substitution fixes the sample, so τ̂ applies at the same λ. Off
    // that set the condition fails generically.
    let spec = &geom.involution;
    let mut reality = 0.0f64;
    for &lambda in &geom.lambda_samples {
        let u = parts.u(lambda);
        let v = parts.v(lambda);
        let tu = spec.apply_matrix(&u);
        let tv = spec.apply_matrix(&v);
        let d = match geom.coord_kind {
            // conj(dz) = dz̄: the transformed dz̄ part must reproduce U.
            CoordKind::Conformal => (tv - u).norm().max((tu - v).norm()),
            CoordKind::Asymptotic => (tu - u).norm().max((tv - v).norm()),
        };
        reality = reality.max(d);
    }
    (twist, reality)
}

/// Maurer-Cartan data sampled over a full grid, for frame integration and
/// flatness diagnostics.
pub struct AlphaField {
    pub parts: Vec<AlphaParts>,
    pub dims: (usize, usize),
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
}

impl AlphaField {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &AlphaParts {
        &self.parts[i * self.dims.1 + j]
    }
}

/// Samples ω (with O(h²) grid derivatives) and the cubic data over the
/// grid of `omega`. Samplers receive the grid coordinates (a, b); conformal
/// classes read Q at z = a + ib and store R = conj(Q).
pub fn alpha_field(
    geom: &GeometrySpec,
    omega: &ScalarField,
    q: &dyn Fn(f64, f64) -> C64,
    r: &dyn Fn(f64, f64) -> C64,
) -> Result<AlphaField> {
    let (na, nb) = omega.dims();
    let da = omega.deriv4_a();
    let db = omega.deriv4_b();
    let mut parts = Vec::with_capacity(na * nb);
    let mut worst = 0.0f64;
    for i in 0..na {
        for j in 0..nb {
            let (a, b) = (omega.a(i), omega.b(j));
            let p = match geom.coord_kind {
                CoordKind::Conformal => {
                    PointData::conformal(omega.get(i, j), da.get(i, j), db.get(i, j), q(a, b))
                }
                CoordKind::Asymptotic => PointData::asymptotic(
                    omega.get(i, j),
                    da.get(i, j),
                    db.get(i, j),
                    q(a, b),
                    r(a, b),
                ),
            };
            worst = worst.max(p.reality_defect(geom.class));
            parts.push(parts_unchecked(geom, &p));
        }
    }
    if worst > REALITY_TOL {
        return Err(Error::RealityViolation {
            class: geom.class.name(),
            detail: format!("sampled Q/R off the required axis by {worst:.3e}"),
        });
    }
    Ok(AlphaField { parts, dims: (na, nb), origin: omega.origin(), spacing: omega.spacing() })
}

/// Discrete flatness defect ‖∂_a(α_b) − ∂_b(α_a) + [α_a, α_b]‖ of the
/// connection form at one λ, evaluated in the real grid coordinates.
/// For conformal classes α_x = U + V and α_y = i(U − V).
pub fn flatness_defect(
    geom: &GeometrySpec,
    omega: &ScalarField,
    q: &dyn Fn(f64, f64) -> C64,
    r: &dyn Fn(f64, f64) -> C64,
    lambda: C64,
) -> Result<ScalarField> {
    let field = alpha_field(geom, omega, q, r)?;
    let (na, nb) = field.dims;
    let i_unit = C64::new(0.0, 1.0);

    // Connection components in the real coordinates.
    let mut comp_a = Vec::with_capacity(na * nb);
    let mut comp_b = Vec::with_capacity(na * nb);
    for p in &field.parts {
        let u = p.u(lambda);
        let v = p.v(lambda);
        match geom.coord_kind {
            CoordKind::Conformal => {
                comp_a.push(u + v);
                comp_b.push((u - v).scale(i_unit));
            }
            CoordKind::Asymptotic => {
                comp_a.push(u);
                comp_b.push(v);
            }
        }
    }

    let deriv = |grid: &[CMat3], along_a: bool| -> Vec<CMat3> {
        let mut out = vec![CMat3::zero(); na * nb];
        let (n, h) = if along_a { (na, field.spacing.0) } else { (nb, field.spacing.1) };
        let idx = |i: usize, j: usize| i * nb + j;
        for i in 0..na {
            for j in 0..nb {
                let k = if along_a { i } else { j };
                let pick = |k2: usize| {
                    if along_a { grid[idx(k2, j)] } else { grid[idx(i, k2)] }
                };
                let two_h = C64::new(1.0 / (2.0 * h), 0.0);
                let d = if k == 0 {
                    (-pick(0).scale(C64::new(3.0, 0.0)) + pick(1).scale(C64::new(4.0, 0.0))
                        - pick(2))
                    .scale(two_h)
                } else if k == n - 1 {
                    (pick(n - 1).scale(C64::new(3.0, 0.0)) - pick(n - 2).scale(C64::new(4.0, 0.0))
                        + pick(n - 3))
                    .scale(two_h)
                } else {
                    (pick(k + 1) - pick(k - 1)).scale(two_h)
                };
                out[idx(i, j)] = d;
            }
        }
        out
    };

    let db_da = deriv(&comp_b, true);
    let da_db = deriv(&comp_a, false);
    let mut out = ScalarField::zeros(field.origin, field.spacing, field.dims)?;
    for i in 0..na {
        for j in 0..nb {
            let k = i * nb + j;
            let defect = db_da[k] - da_db[k] + comp_a[k].commutator(&comp_b[k]);
            out.set(i, j, defect.norm());
        }
    }
    Ok(out)
}
