//! Mesh export: OBJ for ℝ³ meshes, CSV for both representations. Writes
//! are atomic (temp file in the target directory, then rename) and use
//! 17-significant-digit floats so files round-trip exactly.

use crate::CliError;
use std::fmt::Write as _;
use std::path::Path;
use toda_core::frames::{MeshData, SurfaceMesh};

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn atomic_write(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, contents)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Chart projection of a Lagrangian lift: w = (f₁/f₃, f₂/f₃), exported to
/// ℝ³ as (Re w₁, Im w₁, Re w₂). Fails listing the grid indices where the
/// third lift coordinate vanishes.
pub fn chart_project(mesh: &SurfaceMesh) -> Result<SurfaceMesh, CliError> {
    let MeshData::Lift(lift) = &mesh.data else {
        return Ok(mesh.clone());
    };
    let (na, nb) = mesh.dims;
    let mut bad = Vec::new();
    let mut pts = Vec::with_capacity(lift.len());
    for i in 0..na {
        for j in 0..nb {
            let f = lift[i * nb + j];
            if f[2].norm() < 1e-12 {
                bad.push((i, j));
                pts.push([0.0, 0.0, 0.0]);
            } else {
                let w1 = f[0] / f[2];
                let w2 = f[1] / f[2];
                pts.push([w1.re, w1.im, w2.re]);
            }
        }
    }
    if !bad.is_empty() {
        return Err(CliError::UnsupportedRepresentation { indices: bad });
    }
    Ok(SurfaceMesh {
        class: mesh.class,
        data: MeshData::R3(pts),
        dims: mesh.dims,
        origin: mesh.origin,
        spacing: mesh.spacing,
    })
}

/// OBJ export: `v x y z` lines in row-major grid order plus quad faces over
/// the grid cells. Requires an ℝ³ mesh.
pub fn export_obj(mesh: &SurfaceMesh, path: &Path) -> Result<(), CliError> {
    let MeshData::R3(pts) = &mesh.data else {
        return Err(CliError::UnsupportedRepresentation { indices: vec![] });
    };
    let (na, nb) = mesh.dims;
    let mut out = String::new();
    for p in pts {
        let _ = writeln!(out, "v {} {} {}", fmt(p[0]), fmt(p[1]), fmt(p[2]));
    }
    for i in 0..na - 1 {
        for j in 0..nb - 1 {
            let a = i * nb + j + 1;
            let b = (i + 1) * nb + j + 1;
            let c = (i + 1) * nb + j + 2;
            let d = i * nb + j + 2;
            let _ = writeln!(out, "f {a} {b} {c} {d}");
        }
    }
    atomic_write(path, &out)
}

/// CSV export: `u,v,x,y,z` for ℝ³ meshes, `u,v,re1,im1,re2,im2,re3,im3`
/// for homogeneous lifts.
pub fn export_csv(mesh: &SurfaceMesh, path: &Path) -> Result<(), CliError> {
    let (na, nb) = mesh.dims;
    let mut out = String::new();
    match &mesh.data {
        MeshData::R3(pts) => {
            out.push_str("u,v,x,y,z\n");
            for i in 0..na {
                for j in 0..nb {
                    let u = mesh.origin.0 + mesh.spacing.0 * i as f64;
                    let v = mesh.origin.1 + mesh.spacing.1 * j as f64;
                    let p = pts[i * nb + j];
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{}",
                        fmt(u),
                        fmt(v),
                        fmt(p[0]),
                        fmt(p[1]),
                        fmt(p[2])
                    );
                }
            }
        }
        MeshData::Lift(lift) => {
            out.push_str("u,v,re1,im1,re2,im2,re3,im3\n");
            for i in 0..na {
                for j in 0..nb {
                    let u = mesh.origin.0 + mesh.spacing.0 * i as f64;
                    let v = mesh.origin.1 + mesh.spacing.1 * j as f64;
                    let f = lift[i * nb + j];
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        fmt(u),
                        fmt(v),
                        fmt(f[0].re),
                        fmt(f[0].im),
                        fmt(f[1].re),
                        fmt(f[1].im),
                        fmt(f[2].re),
                        fmt(f[2].im)
                    );
                }
            }
        }
    }
    atomic_write(path, &out)
}
