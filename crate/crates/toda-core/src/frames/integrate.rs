//! RK4 integration of the extended-frame equation over the grid.

use super::FrameField;
use crate::algebra::CMat3;
use crate::geometry::{alpha_field, tzitzeica_residual, CoordKind, GeometrySpec};
use crate::pde::ScalarField;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// Tunables for [`integrate_frame`].
#[derive(Debug, Clone, Copy)]
pub struct FrameOptions {
    /// Largest admissible interior Tzitzéica residual of the input data.
    pub residual_tol: f64,
    /// Largest admissible determinant drift per grid point.
    pub det_tol: f64,
}

impl Default for FrameOptions {
    fn default() -> Self {
        // The residual gate must admit O(h²) discrete solutions on coarse
        // grids; it exists to reject structurally wrong data, not to grade
        // solution quality (the path defect reports that).
        FrameOptions { residual_tol: 0.1, det_tol: 1e-6 }
    }
}

/// Polynomial interpolation of a matrix-valued grid line at fractional
/// offset k + t, cubic where four nodes exist.
fn interp(line: &[CMat3], k: usize, t: f64) -> CMat3 {
    let n = line.len();
    let combine = |nodes: &[usize], x: f64| -> CMat3 {
        let mut acc = CMat3::zero();
        for (m, &nm) in nodes.iter().enumerate() {
            let mut w = 1.0;
            for (j, _) in nodes.iter().enumerate() {
                if j != m {
                    w *= (x - j as f64) / (m as f64 - j as f64);
                }
            }
            acc = acc + line[nm].scale(C64::new(w, 0.0));
        }
        acc
    };
    if n == 2 {
        return combine(&[0, 1], t);
    }
    if n == 3 {
        return combine(&[0, 1, 2], k as f64 + t);
    }
    let s = k.saturating_sub(1).min(n - 4);
    combine(&[s, s + 1, s + 2, s + 3], (k - s) as f64 + t)
}

/// One RK4 substep of F' = F·M(t) over [t0, t0 + dt] (t relative to node k,
/// dt in fractions of the grid step h).
fn rk4_substep(f: &CMat3, line: &[CMat3], k: usize, t0: f64, dt: f64, h: f64) -> CMat3 {
    let m0 = interp(line, k, t0);
    let mh = interp(line, k, t0 + 0.5 * dt);
    let m1 = interp(line, k, t0 + dt);
    let step = dt * h;
    let hs = C64::new(step, 0.0);
    let half = C64::new(0.5 * step, 0.0);
    let k1 = *f * m0;
    let k2 = (*f + k1.scale(half)) * mh;
    let k3 = (*f + k2.scale(half)) * mh;
    let k4 = (*f + k3.scale(hs)) * m1;
    *f + (k1 + k2.scale(C64::new(2.0, 0.0)) + k3.scale(C64::new(2.0, 0.0)) + k4)
        .scale(C64::new(step / 6.0, 0.0))
}

/// Advances one grid cell with two RK4 half-steps (the full-step variant
/// leaves ~2e−8 truncation at h = 1/32, just over the gates used here).
fn rk4_step(f: &CMat3, line: &[CMat3], k: usize, h: f64) -> CMat3 {
    let mid = rk4_substep(f, line, k, 0.0, 0.5, h);
    rk4_substep(&mid, line, k, 0.5, 0.5, h)
}

struct Sweep {
    frames: Vec<CMat3>,
    det_drift: f64,
}

/// Integrates first along the `a` grid line at b = b₀, then along `b` for
/// each column when `transposed` is false; the other order otherwise.
fn sweep(
    ma: &[CMat3],
    mb: &[CMat3],
    dims: (usize, usize),
    spacing: (f64, f64),
    base: &CMat3,
    transposed: bool,
) -> Sweep {
    let (na, nb) = dims;
    let mut frames = vec![CMat3::identity(); na * nb];
    let idx = |i: usize, j: usize| i * nb + j;
    let mut det_drift = 0.0f64;

    let renorm = |m: CMat3, drift: &mut f64| -> CMat3 {
        let d = m.det();
        *drift = drift.max((d - C64::new(1.0, 0.0)).norm());
        let (r, theta) = d.to_polar();
        let scale = C64::from_polar(r.powf(-1.0 / 3.0), -theta / 3.0);
        m.scale(scale)
    };

    if !transposed {
        let row: Vec<CMat3> = (0..na).map(|i| ma[idx(i, 0)]).collect();
        frames[idx(0, 0)] = *base;
        for i in 0..na - 1 {
            let next = rk4_step(&frames[idx(i, 0)], &row, i, spacing.0);
            frames[idx(i + 1, 0)] = renorm(next, &mut det_drift);
        }
        for i in 0..na {
            let col: Vec<CMat3> = (0..nb).map(|j| mb[idx(i, j)]).collect();
            for j in 0..nb - 1 {
                let next = rk4_step(&frames[idx(i, j)], &col, j, spacing.1);
                frames[idx(i, j + 1)] = renorm(next, &mut det_drift);
            }
        }
    } else {
        let col: Vec<CMat3> = (0..nb).map(|j| mb[idx(0, j)]).collect();
        frames[idx(0, 0)] = *base;
        for j in 0..nb - 1 {
            let next = rk4_step(&frames[idx(0, j)], &col, j, spacing.1);
            frames[idx(0, j + 1)] = renorm(next, &mut det_drift);
        }
        for j in 0..nb {
            let row: Vec<CMat3> = (0..na).map(|i| ma[idx(i, j)]).collect();
            for i in 0..na - 1 {
                let next = rk4_step(&frames[idx(i, j)], &row, i, spacing.0);
                frames[idx(i + 1, j)] = renorm(next, &mut det_drift);
            }
        }
    }
    Sweep { frames, det_drift }
}

/// Integrates the extended frame dF = F·α^λ over the grid of `omega` with
/// F = `base` at the grid origin. The (ω, Q, R) data must satisfy the
/// class's Tzitzéica equation to `opts.residual_tol`; the output carries a
/// path-independence defect measured against the transposed integration
/// order.
pub fn integrate_frame(
    geom: &GeometrySpec,
    omega: &ScalarField,
    q: &dyn Fn(f64, f64) -> C64,
    r: &dyn Fn(f64, f64) -> C64,
    lambda: C64,
    base: CMat3,
    opts: FrameOptions,
) -> Result<FrameField> {
    if lambda.norm() == 0.0 {
        return Err(Error::ZeroLambda);
    }
    let residual = tzitzeica_residual(geom, omega, q, r)?.max_abs_interior(1);
    if residual > opts.residual_tol {
        return Err(Error::ResidualTooLarge { found: residual, threshold: opts.residual_tol });
    }

    let alpha = alpha_field(geom, omega, q, r)?;
    let (na, nb) = alpha.dims;
    let i_unit = C64::new(0.0, 1.0);
    let mut ma = Vec::with_capacity(na * nb);
    let mut mb = Vec::with_capacity(na * nb);
    for p in &alpha.parts {
        let u = p.u(lambda);
        let v = p.v(lambda);
        match geom.coord_kind {
            CoordKind::Conformal => {
                ma.push(u + v);
                mb.push((u - v).scale(i_unit));
            }
            CoordKind::Asymptotic => {
                ma.push(u);
                mb.push(v);
            }
        }
    }

    let fwd = sweep(&ma, &mb, alpha.dims, alpha.spacing, &base, false);
    let rev = sweep(&ma, &mb, alpha.dims, alpha.spacing, &base, true);
    let path_defect = fwd
        .frames
        .iter()
        .zip(rev.frames.iter())
        .map(|(a, b)| (*a - *b).norm())
        .fold(0.0, f64::max);
    let det_drift = fwd.det_drift;
    if det_drift > opts.det_tol {
        return Err(Error::NonUnitDeterminant { drift: det_drift, tol: opts.det_tol, i: 0, j: 0 });
    }

    let mut field = FrameField::new(alpha.dims, alpha.origin, alpha.spacing, lambda, base);
    field.frames = fwd.frames;
    field.path_defect = path_defect;
    field.det_drift = det_drift;
    Ok(field)
}
