//! Geometric validators: the extracted mesh is checked against the
//! defining identities of its surface class with centered finite
//! differences (4th order, so stencil error stays below the gate
//! tolerances on the grids used here).

use super::surface::SurfaceMesh;
use crate::algebra::SurfaceClass;
use crate::geometry::GeometrySpec;
use crate::pde::ScalarField;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// One validator entry.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub defect: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Pass/fail record of all checks that apply to a mesh.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_defect(&self) -> f64 {
        self.checks.iter().map(|c| c.defect).fold(0.0, f64::max)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, defect: f64, tol: f64) {
        self.checks.push(CheckResult { name: name.to_string(), defect, tol, pass: defect <= tol });
    }
}

/// Vector-valued grid with derivative stencils and a validity margin.
#[derive(Clone)]
struct VecGrid {
    data: Vec<[C64; 3]>,
    dims: (usize, usize),
    spacing: (f64, f64),
    margin: usize,
}

impl VecGrid {
    fn from_mesh(mesh: &SurfaceMesh) -> Self {
        let (na, nb) = mesh.dims;
        let mut data = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                data.push(mesh.sample(i, j));
            }
        }
        VecGrid { data, dims: mesh.dims, spacing: mesh.spacing, margin: 0 }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> [C64; 3] {
        self.data[i * self.dims.1 + j]
    }

    fn map2(&self, other: &VecGrid, f: impl Fn(C64, C64) -> C64) -> VecGrid {
        let mut out = self.clone();
        out.margin = self.margin.max(other.margin);
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            for k in 0..3 {
                o[k] = f(o[k], b[k]);
            }
        }
        out
    }

    /// Applies the tensor product of two 1-D centered stencils (along a and
    /// b respectively). Each stencil is given by its full weight list over
    /// offsets −reach..=+reach.
    fn tensor_stencil(&self, wa: &[f64], wb: &[f64], scale: f64) -> VecGrid {
        let (na, nb) = self.dims;
        let ra = wa.len() / 2;
        let rb = wb.len() / 2;
        let mut out = self.clone();
        out.margin = self.margin + ra.max(rb);
        for v in out.data.iter_mut() {
            *v = [C64::new(0.0, 0.0); 3];
        }
        for i in ra..na.saturating_sub(ra) {
            for j in rb..nb.saturating_sub(rb) {
                let mut acc = [C64::new(0.0, 0.0); 3];
                for (p, &ca) in wa.iter().enumerate() {
                    if ca == 0.0 {
                        continue;
                    }
                    let ii = i + p - ra;
                    for (q, &cb) in wb.iter().enumerate() {
                        if cb == 0.0 {
                            continue;
                        }
                        let s = self.get(ii, j + q - rb);
                        let w = ca * cb;
                        for k in 0..3 {
                            acc[k] += s[k] * w;
                        }
                    }
                }
                for (k, z) in acc.into_iter().enumerate() {
                    out.data[i * nb + j][k] = z * scale;
                }
            }
        }
        out
    }

    fn axis_stencil(&self, along_a: bool, weights: &[f64], scale: f64) -> VecGrid {
        let id = [1.0];
        if along_a {
            self.tensor_stencil(weights, &id, scale)
        } else {
            self.tensor_stencil(&id, weights, scale)
        }
    }

    // 6th-order centered weights (offsets −reach..=+reach).
    const W1: [f64; 7] = [-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]; // /(60h)
    const W2: [f64; 7] = [2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]; // /(180h²)
    const W3: [f64; 9] = [
        -7.0 / 240.0,
        3.0 / 10.0,
        -169.0 / 120.0,
        61.0 / 30.0,
        0.0,
        -61.0 / 30.0,
        169.0 / 120.0,
        -3.0 / 10.0,
        7.0 / 240.0,
    ]; // /h³

    /// 6th-order first derivative, margin +3.
    fn d1(&self, along_a: bool) -> VecGrid {
        let h = if along_a { self.spacing.0 } else { self.spacing.1 };
        self.axis_stencil(along_a, &Self::W1, 1.0 / (60.0 * h))
    }

    /// 6th-order second derivative, margin +3.
    fn d2(&self, along_a: bool) -> VecGrid {
        let h = if along_a { self.spacing.0 } else { self.spacing.1 };
        self.axis_stencil(along_a, &Self::W2, 1.0 / (180.0 * h * h))
    }

    /// 6th-order third derivative, margin +4.
    fn d3(&self, along_a: bool) -> VecGrid {
        let h = if along_a { self.spacing.0 } else { self.spacing.1 };
        self.axis_stencil(along_a, &Self::W3, 1.0 / (h * h * h))
    }

    /// Mixed ∂_a∂_b as a single tensor stencil, margin +3.
    fn d1d1(&self) -> VecGrid {
        let s = 1.0 / (3600.0 * self.spacing.0 * self.spacing.1);
        self.tensor_stencil(&Self::W1, &Self::W1, s)
    }

    /// Mixed ∂²_a∂_b, margin +3.
    fn d2d1(&self) -> VecGrid {
        let s = 1.0 / (180.0 * self.spacing.0 * self.spacing.0 * 60.0 * self.spacing.1);
        self.tensor_stencil(&Self::W2, &Self::W1, s)
    }

    /// Mixed ∂_a∂²_b, margin +3.
    fn d1d2(&self) -> VecGrid {
        let s = 1.0 / (60.0 * self.spacing.0 * 180.0 * self.spacing.1 * self.spacing.1);
        self.tensor_stencil(&Self::W1, &Self::W2, s)
    }

    /// ∂_z = ½(∂_x − i ∂_y), margin +3.
    fn dz(&self) -> VecGrid {
        let dx = self.d1(true);
        let dy = self.d1(false);
        let i = C64::new(0.0, 1.0);
        dx.map2(&dy, move |a, b| (a - i * b) * 0.5)
    }

    /// ∂_z̄ = ½(∂_x + i ∂_y), margin +3.
    fn dzbar(&self) -> VecGrid {
        let dx = self.d1(true);
        let dy = self.d1(false);
        let i = C64::new(0.0, 1.0);
        dx.map2(&dy, move |a, b| (a + i * b) * 0.5)
    }

    /// ∂_z∂_z̄ = ¼(∂²_x + ∂²_y), margin +3.
    fn dzzbar(&self) -> VecGrid {
        let xx = self.d2(true);
        let yy = self.d2(false);
        xx.map2(&yy, |a, b| (a + b) * 0.25)
    }

    /// ∂²_z = ¼(∂²_x − ∂²_y − 2i ∂_x∂_y), margin +3.
    fn dzz(&self) -> VecGrid {
        let xx = self.d2(true);
        let yy = self.d2(false);
        let xy = self.d1d1();
        let i = C64::new(0.0, 1.0);
        let mut out = xx.map2(&yy, |a, b| a - b);
        out = out.map2(&xy, move |a, b| (a - i * b * 2.0) * 0.25);
        out
    }

    /// ∂³_z = ⅛(∂³_x − 3i ∂²_x∂_y − 3 ∂_x∂²_y + i ∂³_y), margin +4.
    fn dzzz(&self) -> VecGrid {
        let xxx = self.d3(true);
        let yyy = self.d3(false);
        let xxy = self.d2d1();
        let xyy = self.d1d2();
        let i = C64::new(0.0, 1.0);
        let mut out = xxx.map2(&xxy, move |a, b| a - i * b * 3.0);
        out = out.map2(&xyy, |a, b| a - b * 3.0);
        out = out.map2(&yyy, move |a, b| (a + i * b) * 0.125);
        out
    }
}

fn det3(a: [C64; 3], b: [C64; 3], c: [C64; 3]) -> C64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

fn vec_norm(v: [C64; 3]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scans grid points at least `margin` from the edges whose full stencil
/// window avoids masked nodes, folding the maximum.
fn scan_max_masked(
    dims: (usize, usize),
    margin: usize,
    mask: Option<&[bool]>,
    mut f: impl FnMut(usize, usize) -> f64,
) -> f64 {
    let window_clear = |i: usize, j: usize| -> bool {
        let Some(m) = mask else { return true };
        for a in i.saturating_sub(margin)..=(i + margin).min(dims.0 - 1) {
            for b in j.saturating_sub(margin)..=(j + margin).min(dims.1 - 1) {
                if !m[a * dims.1 + b] {
                    return false;
                }
            }
        }
        true
    };
    let mut worst = 0.0f64;
    for i in margin..dims.0.saturating_sub(margin) {
        for j in margin..dims.1.saturating_sub(margin) {
            if window_clear(i, j) {
                worst = worst.max(f(i, j));
            }
        }
    }
    worst
}

/// Checks the defining geometric identities of the mesh's class against the
/// supplied ω field (and, when given, the cubic samplers Q and R for the
/// cubic-form recovery defects). All derivatives are centered differences;
/// each check scans the interior where its stencil is valid.
pub fn validate_surface(
    geom: &GeometrySpec,
    mesh: &SurfaceMesh,
    omega: &ScalarField,
    q: Option<&dyn Fn(f64, f64) -> C64>,
    r: Option<&dyn Fn(f64, f64) -> C64>,
) -> Result<ValidationReport> {
    validate_surface_masked(geom, mesh, omega, q, r, None)
}

/// [`validate_surface`] with singular grid points excluded: any stencil
/// window touching a masked node is skipped.
pub fn validate_surface_masked(
    geom: &GeometrySpec,
    mesh: &SurfaceMesh,
    omega: &ScalarField,
    q: Option<&dyn Fn(f64, f64) -> C64>,
    r: Option<&dyn Fn(f64, f64) -> C64>,
    mask: Option<&[bool]>,
) -> Result<ValidationReport> {
    if mesh.dims != omega.dims() {
        return Err(Error::InvalidInput(format!(
            "mesh dims {:?} do not match omega dims {:?}",
            mesh.dims,
            omega.dims()
        )));
    }
    let f = VecGrid::from_mesh(mesh);
    let mut report = ValidationReport { checks: Vec::new() };
    let dims = mesh.dims;

    match geom.class {
        SurfaceClass::AffIndef => {
            let fu = f.d1(true);
            let fv = f.d1(false);
            let fuv = f.d1d1();
            let m = fuv.margin;
            let vol = scan_max_masked(dims, m, mask, |i, j| {
                let e2w = (2.0 * omega.get(i, j)).exp();
                (det3(fu.get(i, j), fv.get(i, j), fuv.get(i, j)) - C64::new(e2w, 0.0)).norm()
            });
            report.push("volume", vol, 1e-6);

            // Proper sphere: ξ = e^{−ω} f_uv equals f itself.
            let normal = scan_max_masked(dims, m, mask, |i, j| {
                let ew = omega.get(i, j).exp();
                let fij = f.get(i, j);
                let mut d = [C64::new(0.0, 0.0); 3];
                for k in 0..3 {
                    d[k] = fuv.get(i, j)[k] - fij[k] * ew;
                }
                vec_norm(d) * (-omega.get(i, j)).exp()
            });
            report.push("affine-normal", normal, 1e-6);

            // Null-coordinate conditions det[f_u f_v f_uu] = 0 etc.
            let fuu = f.d2(true);
            let fvv = f.d2(false);
            let m2 = fuu.margin.max(fv.margin);
            let null = scan_max_masked(dims, m2, mask, |i, j| {
                det3(fu.get(i, j), fv.get(i, j), fuu.get(i, j))
                    .norm()
                    .max(det3(fu.get(i, j), fv.get(i, j), fvv.get(i, j)).norm())
            });
            report.push("null-coordinates", null, 1e-5);

            if let (Some(qf), Some(rf)) = (q, r) {
                let fuuu = f.d3(true);
                let fvvv = f.d3(false);
                let m3 = fuuu.margin;
                let qdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let want = qf(omega.a(i), omega.b(j)).powi(2);
                    (det3(fu.get(i, j), fuu.get(i, j), fuuu.get(i, j)) - want).norm()
                });
                report.push("cubic-q", qdef, 1e-5);
                let rdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let want = -rf(omega.a(i), omega.b(j)).powi(2);
                    (det3(fv.get(i, j), fvv.get(i, j), fvvv.get(i, j)) - want).norm()
                });
                report.push("cubic-r", rdef, 1e-5);
            }
        }

        SurfaceClass::AffDefEll | SurfaceClass::AffDefHyp => {
            let fz = f.dz();
            let fzb = f.dzbar();
            let fzzb = f.dzzbar();
            let m = fz.margin.max(fzzb.margin);
            let i_unit = C64::new(0.0, 1.0);
            let vol = scan_max_masked(dims, m, mask, |i, j| {
                let e2w = (2.0 * omega.get(i, j)).exp();
                (det3(fz.get(i, j), fzb.get(i, j), fzzb.get(i, j)) - i_unit * e2w).norm()
            });
            report.push("volume", vol, 1e-6);

            // ξ = e^{−ω} f_zz̄ = −H f.
            let h = geom.h;
            let normal = scan_max_masked(dims, m, mask, |i, j| {
                let ew = omega.get(i, j).exp();
                let fij = f.get(i, j);
                let mut d = [C64::new(0.0, 0.0); 3];
                for k in 0..3 {
                    d[k] = fzzb.get(i, j)[k] + fij[k] * (h * ew);
                }
                vec_norm(d) * (-omega.get(i, j)).exp()
            });
            report.push("affine-normal", normal, 1e-6);

            let fzz = f.dzz();
            let mc = fzz.margin;
            let conf = scan_max_masked(dims, mc, mask, |i, j| {
                det3(fz.get(i, j), fzb.get(i, j), fzz.get(i, j)).norm()
            });
            report.push("affine-conformal", conf, 1e-5);

            if let Some(qf) = q {
                let fzzz = f.dzzz();
                let m3 = fzzz.margin;
                let qdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let z = C64::new(omega.a(i), omega.b(j));
                    let want = i_unit * qf(z.re, z.im).powi(2);
                    (det3(fz.get(i, j), fzz.get(i, j), fzzz.get(i, j)) - want).norm()
                });
                report.push("cubic-q", qdef, 1e-5);
            }
        }

        SurfaceClass::Cp2 | SurfaceClass::Ch2 => {
            let target = geom.lift_norm_target();
            let norm_def = scan_max_masked(dims, 0, mask, |i, j| {
                let s = f.get(i, j);
                (geom.hermitian_form(&s, &s) - C64::new(target, 0.0)).norm()
            });
            report.push("lift-norm", norm_def, 1e-6);

            let fz = f.dz();
            let fzb = f.dzbar();
            let m = fz.margin;
            let horiz = scan_max_masked(dims, m, mask, |i, j| {
                let s = f.get(i, j);
                geom.hermitian_form(&fz.get(i, j), &s)
                    .norm()
                    .max(geom.hermitian_form(&fzb.get(i, j), &s).norm())
            });
            report.push("horizontality", horiz, 1e-6);

            let confo = scan_max_masked(dims, m, mask, |i, j| {
                geom.hermitian_form(&fz.get(i, j), &fzb.get(i, j)).norm()
            });
            report.push("conformality", confo, 1e-5);

            let metric = scan_max_masked(dims, m, mask, |i, j| {
                let ew = omega.get(i, j).exp();
                let a = (geom.hermitian_form(&fz.get(i, j), &fz.get(i, j))
                    - C64::new(ew, 0.0))
                .norm();
                let b = (geom.hermitian_form(&fzb.get(i, j), &fzb.get(i, j))
                    - C64::new(ew, 0.0))
                .norm();
                a.max(b)
            });
            report.push("metric", metric, 1e-5);

            if let Some(qf) = q {
                let fzzz = f.dzzz();
                let m3 = fzzz.margin;
                let qdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let s = f.get(i, j);
                    let want = qf(omega.a(i), omega.b(j));
                    (geom.hermitian_form(&fzzz.get(i, j), &s) - want).norm()
                });
                report.push("cubic-q", qdef, 1e-4);
            }
        }

        SurfaceClass::Ch21 => {
            let target = geom.lift_norm_target();
            let norm_def = scan_max_masked(dims, 0, mask, |i, j| {
                let s = f.get(i, j);
                (geom.hermitian_form(&s, &s) - C64::new(target, 0.0)).norm()
            });
            report.push("lift-norm", norm_def, 1e-6);

            let fu = f.d1(true);
            let fv = f.d1(false);
            let m = fu.margin;
            let horiz = scan_max_masked(dims, m, mask, |i, j| {
                let s = f.get(i, j);
                geom.hermitian_form(&fu.get(i, j), &s)
                    .norm()
                    .max(geom.hermitian_form(&fv.get(i, j), &s).norm())
            });
            report.push("horizontality", horiz, 1e-6);

            let null = scan_max_masked(dims, m, mask, |i, j| {
                geom.hermitian_form(&fu.get(i, j), &fu.get(i, j))
                    .norm()
                    .max(geom.hermitian_form(&fv.get(i, j), &fv.get(i, j)).norm())
            });
            report.push("null-directions", null, 1e-5);

            let metric = scan_max_masked(dims, m, mask, |i, j| {
                let ew = omega.get(i, j).exp();
                (geom.hermitian_form(&fu.get(i, j), &fv.get(i, j)) - C64::new(ew, 0.0)).norm()
            });
            report.push("metric", metric, 1e-5);

            if let (Some(qf), Some(rf)) = (q, r) {
                let fuuu = f.d3(true);
                let fvvv = f.d3(false);
                let m3 = fuuu.margin;
                let qdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let s = f.get(i, j);
                    (geom.hermitian_form(&fuuu.get(i, j), &s) - qf(omega.a(i), omega.b(j)))
                        .norm()
                });
                report.push("cubic-q", qdef, 1e-4);
                let rdef = scan_max_masked(dims, m3, mask, |i, j| {
                    let s = f.get(i, j);
                    (geom.hermitian_form(&fvvv.get(i, j), &s) - rf(omega.a(i), omega.b(j)))
                        .norm()
                });
                report.push("cubic-r", rdef, 1e-4);
            }
        }
    }

    Ok(report)
}
