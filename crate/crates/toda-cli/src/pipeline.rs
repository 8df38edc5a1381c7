//! Mode dispatch: runs the requested pipeline and produces a deterministic
//! summary plus optional mesh/table artifacts.

use crate::config::{
    potential_terms, BoundaryConfig, GoursatConfig, Mode, PipelineConfig,
};
use crate::export::{chart_project, export_csv, export_obj};
use crate::CliError;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use toda_core::algebra::CMat3;
use toda_core::factorization::{
    dpw_asymptotic, dpw_conformal, DpwOptions, Potential, PotentialPair,
};
use toda_core::frames::{
    extract_surface, integrate_frame, validate_surface, FrameOptions, MeshData, SurfaceMesh,
};
use toda_core::geometry::{symmetry_defects, tzitzeica_residual, CoordKind, GeometrySpec, PointData};
use toda_core::pde::{solve_elliptic, solve_hyperbolic, GoursatData, ScalarField};
use toda_core::realforms::{classify_involutions, SearchConfig};

#[derive(Debug, Clone, Serialize)]
pub struct GateRecord {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub defect: f64,
    pub tol: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InfoRecord {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverSummary {
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaskSummary {
    pub masked: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatrixRecord {
    /// Row-major entries as [re, im].
    pub entries: [[[f64; 2]; 3]; 3],
}

/// Deterministic run summary; no wall-clock data (timings go to stderr so
/// identical configs produce byte-identical summaries).
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub mode: Mode,
    pub geometry: Option<String>,
    pub pass: bool,
    pub gates: Vec<GateRecord>,
    /// Ungated diagnostics.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub info: Vec<InfoRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<CheckRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mask: Option<MaskSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<MatrixRecord>>,
}

impl Summary {
    fn new(mode: Mode, geometry: Option<String>) -> Self {
        Summary {
            mode,
            geometry,
            pass: true,
            gates: Vec::new(),
            info: Vec::new(),
            solver: None,
            checks: None,
            mask: None,
            canonical: None,
        }
    }

    fn gate(&mut self, name: &str, value: f64, tol: f64) {
        let pass = value <= tol;
        self.pass &= pass;
        self.gates.push(GateRecord { name: name.to_string(), value, tol, pass });
    }

    fn attach_report(&mut self, report: &toda_core::frames::ValidationReport) {
        let mut checks = Vec::new();
        for c in &report.checks {
            self.pass &= c.pass;
            checks.push(CheckRecord {
                name: c.name.clone(),
                defect: c.defect,
                tol: c.tol,
                pass: c.pass,
            });
        }
        self.checks = Some(checks);
    }
}

struct Solved {
    geom: GeometrySpec,
    omega: ScalarField,
    solver: Option<SolverSummary>,
}

fn boundary_field(cfg: &PipelineConfig) -> Result<ScalarField, CliError> {
    let g = cfg.grid_spec()?;
    let mut field = ScalarField::zeros(g.origin, g.spacing, g.dims)
        .map_err(|e| CliError::Config(format!("grid: {e}")))?;
    match cfg.data.boundary.as_ref().unwrap_or(&BoundaryConfig::Zero) {
        BoundaryConfig::Zero => {}
        BoundaryConfig::Constant { value } => {
            field = field.map(|_| *value);
        }
        BoundaryConfig::Values { values } => {
            if values.len() != g.dims.0 * g.dims.1 {
                return Err(CliError::Config(format!(
                    "data.boundary.values: expected {} entries, got {}",
                    g.dims.0 * g.dims.1,
                    values.len()
                )));
            }
            for i in 0..g.dims.0 {
                for j in 0..g.dims.1 {
                    field.set(i, j, values[i * g.dims.1 + j]);
                }
            }
        }
    }
    Ok(field)
}

fn goursat_data(cfg: &PipelineConfig) -> Result<GoursatData, CliError> {
    let g = cfg.grid_spec()?;
    Ok(match cfg.data.goursat.as_ref().unwrap_or(&GoursatConfig::Zero) {
        GoursatConfig::Zero => GoursatData::zero(g.dims),
        GoursatConfig::Constant { value } => GoursatData {
            on_u_axis: vec![*value; g.dims.0],
            on_v_axis: vec![*value; g.dims.1],
        },
        GoursatConfig::Values { u_axis, v_axis } => GoursatData {
            on_u_axis: u_axis.clone(),
            on_v_axis: v_axis.clone(),
        },
    })
}

fn solve(cfg: &PipelineConfig) -> Result<Solved, CliError> {
    let class = cfg.surface_class()?;
    let geom = GeometrySpec::new(class);
    let g = cfg.grid_spec()?;
    let q = cfg.data.q.clone();
    let r = cfg.data.r.clone();
    match geom.coord_kind {
        CoordKind::Conformal => {
            let boundary = boundary_field(cfg)?;
            let qf = move |a: f64, b: f64| q.eval(C64::new(a, b));
            let sol = solve_elliptic(&geom, &qf, &boundary, None, cfg.tolerances.newton)?;
            Ok(Solved {
                geom,
                omega: sol.omega,
                solver: Some(SolverSummary { iterations: sol.iterations, residual: sol.residual }),
            })
        }
        CoordKind::Asymptotic => {
            let data = goursat_data(cfg)?;
            let qf = move |u: f64| q.eval(C64::new(u, 0.0));
            let rf = move |v: f64| r.eval(C64::new(v, 0.0));
            let omega =
                solve_hyperbolic(&geom, &qf, &rf, &data, g.origin, g.spacing, g.dims, None)?;
            Ok(Solved { geom, omega, solver: None })
        }
    }
}

fn samplers(
    cfg: &PipelineConfig,
    geom: &GeometrySpec,
) -> (Box<dyn Fn(f64, f64) -> C64>, Box<dyn Fn(f64, f64) -> C64>) {
    let q = cfg.data.q.clone();
    let r = cfg.data.r.clone();
    match geom.coord_kind {
        CoordKind::Conformal => {
            let q2 = q.clone();
            (
                Box::new(move |a, b| q.eval(C64::new(a, b))),
                Box::new(move |a, b| q2.eval(C64::new(a, b)).conj()),
            )
        }
        CoordKind::Asymptotic => (
            Box::new(move |a, _| q.eval(C64::new(a, 0.0))),
            Box::new(move |_, b| r.eval(C64::new(b, 0.0))),
        ),
    }
}

fn write_residual_csv(
    path: &Path,
    omega: &ScalarField,
    residual: &ScalarField,
) -> Result<(), CliError> {
    let (na, nb) = omega.dims();
    let mut out = String::from("u,v,omega,residual\n");
    for i in 0..na {
        for j in 0..nb {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                omega.a(i),
                omega.b(j),
                omega.get(i, j),
                residual.get(i, j)
            );
        }
    }
    crate::export::atomic_write(path, &out)
}

fn export_mesh_files(
    cfg: &PipelineConfig,
    out_dir: &Path,
    mesh: &SurfaceMesh,
) -> Result<(), CliError> {
    if let Some(name) = &cfg.output.mesh_obj {
        let target = if cfg.output.chart || !matches!(mesh.data, MeshData::R3(_)) {
            chart_project(mesh)?
        } else {
            mesh.clone()
        };
        export_obj(&target, &out_dir.join(name))?;
    }
    if let Some(name) = &cfg.output.mesh_csv {
        export_csv(mesh, &out_dir.join(name))?;
    }
    Ok(())
}

/// Runs the configured pipeline, writes the requested artifacts under
/// `out_dir`, and returns the summary (also written there when configured).
pub fn run_pipeline(cfg: &PipelineConfig, out_dir: &Path) -> Result<Summary, CliError> {
    let mut summary = Summary::new(cfg.mode, cfg.geometry.clone());
    match cfg.mode {
        Mode::Solve => {
            let solved = solve(cfg)?;
            let (qf, rf) = samplers(cfg, &solved.geom);
            let residual = tzitzeica_residual(&solved.geom, &solved.omega, &qf, &rf)?;
            let max_res = residual.max_abs_interior(1);
            summary.solver = solved.solver.clone();
            let gate_tol = match solved.geom.coord_kind {
                CoordKind::Conformal => cfg.tolerances.newton * 10.0,
                // Marching residual through the independent checker is
                // O(h²) by construction.
                CoordKind::Asymptotic => {
                    let (ha, hb) = solved.omega.spacing();
                    10.0 * ha.max(hb).powi(2)
                }
            };
            summary.gate("tzitzeica-residual", max_res, gate_tol * cfg.tolerances.gate_scale);
            if let Some(name) = &cfg.output.residual_csv {
                write_residual_csv(&out_dir.join(name), &solved.omega, &residual)?;
            }
        }

        Mode::LaxCheck => {
            let solved = solve(cfg)?;
            let (qf, rf) = samplers(cfg, &solved.geom);
            let geom = &solved.geom;
            let omega = &solved.omega;
            let da = omega.deriv_a();
            let db = omega.deriv_b();
            let (na, nb) = omega.dims();
            let mut twist = 0.0f64;
            let mut reality = 0.0f64;
            for i in 0..na {
                for j in 0..nb {
                    let (a, b) = (omega.a(i), omega.b(j));
                    let p = match geom.coord_kind {
                        CoordKind::Conformal => PointData::conformal(
                            omega.get(i, j),
                            da.get(i, j),
                            db.get(i, j),
                            qf(a, b),
                        ),
                        CoordKind::Asymptotic => PointData::asymptotic(
                            omega.get(i, j),
                            da.get(i, j),
                            db.get(i, j),
                            qf(a, b),
                            rf(a, b),
                        ),
                    };
                    let (t, re) = symmetry_defects(geom, &p);
                    twist = twist.max(t);
                    reality = reality.max(re);
                }
            }
            summary.gate("twist-defect", twist, 1e-10 * cfg.tolerances.gate_scale);
            summary.gate("reality-defect", reality, 1e-10 * cfg.tolerances.gate_scale);

            // Zero-curvature against the scalar equation at each λ sample.
            let mut flat = 0.0f64;
            for &lam in &geom.lambda_samples {
                let d = toda_core::geometry::flatness_defect(geom, omega, &qf, &rf, lam)?;
                flat = flat.max(d.max_abs_interior(1));
            }
            let res = tzitzeica_residual(geom, omega, &qf, &rf)?.max_abs_interior(1);
            let (ha, hb) = omega.spacing();
            let h2 = ha.max(hb).powi(2);
            summary.gate(
                "flatness-defect",
                flat,
                (50.0 * (res + h2)).max(1e-9) * cfg.tolerances.gate_scale,
            );
        }

        Mode::Integrate => {
            let solved = solve(cfg)?;
            let (qf, rf) = samplers(cfg, &solved.geom);
            summary.solver = solved.solver.clone();
            let lambda = cfg
                .lambda
                .as_ref()
                .and_then(|l| l.first())
                .map(|l| C64::new(l[0], l[1]))
                .unwrap_or(C64::new(1.0, 0.0));
            let opts = FrameOptions {
                residual_tol: cfg.tolerances.frame_residual,
                ..FrameOptions::default()
            };
            let frame = integrate_frame(
                &solved.geom,
                &solved.omega,
                &qf,
                &rf,
                lambda,
                CMat3::identity(),
                opts,
            )?;
            let mesh = extract_surface(&solved.geom, &frame)?;
            let report =
                validate_surface(&solved.geom, &mesh, &solved.omega, Some(&qf), Some(&rf))?;
            summary.attach_report(&report);
            summary.gate("path-independence", frame.path_defect, 1e-4 * cfg.tolerances.gate_scale);
            summary.gate("det-drift", frame.det_drift, 1e-6 * cfg.tolerances.gate_scale);
            summary.gate(
                "frame-reality",
                frame.reality_defect(&solved.geom.involution),
                1e-6 * cfg.tolerances.gate_scale,
            );
            export_mesh_files(cfg, out_dir, &mesh)?;
        }

        Mode::Dpw => {
            let class = cfg.surface_class()?;
            let geom = GeometrySpec::new(class);
            let pot_cfg = cfg
                .potential
                .as_ref()
                .ok_or_else(|| CliError::Config("potential: missing".into()))?;
            let opts = DpwOptions { trunc: cfg.trunc, threads: cfg.threads, gauge: None };
            let out = match geom.coord_kind {
                CoordKind::Conformal => {
                    let eta = pot_cfg
                        .eta
                        .as_ref()
                        .ok_or_else(|| CliError::Config("potential.eta: missing".into()))?;
                    let eta = Potential::conformal(potential_terms(eta)?)?;
                    dpw_conformal(&eta, &geom.involution, &cfg.grid_spec()?, &opts)?
                }
                CoordKind::Asymptotic => {
                    let e1 = pot_cfg
                        .eta1
                        .as_ref()
                        .ok_or_else(|| CliError::Config("potential.eta1: missing".into()))?;
                    let e2 = pot_cfg
                        .eta2
                        .as_ref()
                        .ok_or_else(|| CliError::Config("potential.eta2: missing".into()))?;
                    let pair = PotentialPair::new(
                        potential_terms(e1)?,
                        potential_terms(e2)?,
                        &geom.involution,
                    )?;
                    dpw_asymptotic(&pair, &geom.involution, &cfg.grid_spec()?, &opts)?
                }
            };
            summary.attach_report(&out.report);
            summary.mask = Some(MaskSummary {
                masked: out.masked_count,
                total: out.mask.len(),
            });
            summary.gate("masked-points", out.masked_count as f64, 0.0);
            summary.gate("split-residual", out.max_split_residual, 1e-8 * cfg.tolerances.gate_scale);
            if geom.coord_kind == CoordKind::Asymptotic {
                summary.gate(
                    "matching-defect",
                    out.max_matching_defect,
                    1e-6 * cfg.tolerances.gate_scale,
                );
            }
            // Off-circle λ samples of the asymptotic classes amplify loop
            // truncation noise, so the gate applies to the surface slice;
            // the all-sample maximum is recorded ungated.
            summary.gate(
                "frame-reality",
                out.reality_defect_surface,
                1e-7 * cfg.tolerances.gate_scale,
            );
            summary.info.push(InfoRecord {
                name: "frame-reality-all-lambda".into(),
                value: out.reality_defect,
            });
            export_mesh_files(cfg, out_dir, &out.mesh)?;
        }

        Mode::Classify => {
            let (family, relation) = cfg.classify_request()?;
            let search = SearchConfig::default();
            let found = classify_involutions(family, relation, &search)?;
            let mut records = Vec::new();
            for c in &found {
                let mut entries = [[[0.0; 2]; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        let z = c.matrix.get(i, j);
                        entries[i][j] = [z.re, z.im];
                    }
                }
                records.push(MatrixRecord { entries });
            }
            summary.canonical = Some(records);
            summary.gate("canonical-count", if found.is_empty() { 1.0 } else { 0.0 }, 0.0);
        }
    }

    if let Some(name) = &cfg.output.summary {
        let text = serde_json::to_string_pretty(&summary)
            .map_err(|e| CliError::Config(format!("summary serialization: {e}")))?;
        crate::export::atomic_write(&out_dir.join(name), &(text + "\n"))?;
    }
    Ok(summary)
}

/// Computed artifact paths for a config (used by the binary for logging).
pub fn artifact_paths(cfg: &PipelineConfig, out_dir: &Path) -> Vec<PathBuf> {
    [&cfg.output.summary, &cfg.output.mesh_obj, &cfg.output.mesh_csv, &cfg.output.residual_csv]
        .into_iter()
        .flatten()
        .map(|n| out_dir.join(n))
        .collect()
}
