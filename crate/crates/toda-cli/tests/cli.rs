//! CLI pipeline tests beyond the determinism criterion: the other modes,
//! export schemas and error paths.

use std::path::Path;
use std::process::Command;
use toda_cli::export::{chart_project, export_csv};
use toda_core::algebra::SurfaceClass;
use toda_core::frames::{MeshData, SurfaceMesh};

fn toda() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toda"))
}

fn write_config(dir: &Path, name: &str, contents: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn solve_mode_emits_residual_table() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "solve.json",
        r#"{
          "mode": "solve",
          "geometry": "cp2",
          "grid": { "origin": [0.0, 0.0], "spacing": [0.0625, 0.0625], "dims": [17, 17] },
          "data": { "q": { "kind": "constant", "re": 1.0 }, "boundary": { "kind": "zero" } },
          "output": { "summary": "summary.json", "residual_csv": "residual.csv" }
        }"#,
    );
    let out = tmp.path().join("out");
    let status = toda()
        .args(["solve", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.join("residual.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,v,omega,residual"));
    assert_eq!(lines.count(), 17 * 17);
}

#[test]
fn lax_check_mode_gates_on_symmetries() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "lax.json",
        r#"{
          "mode": "lax-check",
          "geometry": "aff-indef",
          "grid": { "origin": [0.0, 0.0], "spacing": [0.03125, 0.03125], "dims": [33, 33] },
          "data": {
            "q": { "kind": "constant", "re": 1.0 },
            "r": { "kind": "constant", "re": 1.0 },
            "goursat": { "kind": "zero" }
          },
          "output": { "summary": "summary.json" }
        }"#,
    );
    let out = tmp.path().join("out");
    let status = toda()
        .args(["lax-check", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], serde_json::Value::Bool(true));
    let gates = summary["gates"].as_array().unwrap();
    assert!(gates.iter().any(|g| g["name"] == "twist-defect"));
    assert!(gates.iter().any(|g| g["name"] == "flatness-defect"));
}

#[test]
fn conformal_dpw_exports_chart_projected_obj_and_lift_csv() {
    let tmp = tempfile::tempdir().unwrap();
    // Vacuum CH² potential on a small grid.
    let cfg = write_config(
        tmp.path(),
        "dpw.json",
        r#"{
          "mode": "dpw",
          "geometry": "ch2",
          "grid": { "origin": [0.0, 0.0], "spacing": [0.02, 0.02], "dims": [9, 9] },
          "trunc": 8,
          "potential": {
            "eta": [ { "degree": -1, "coeffs": [
              [[[0,0],[0,0],[1,0]],
               [[-1,0],[0,0],[0,0]],
               [[0,0],[1,0],[0,0]]]
            ] } ]
          },
          "output": { "summary": "summary.json", "mesh_obj": "mesh.obj", "mesh_csv": "lift.csv", "chart": true }
        }"#,
    );
    let out = tmp.path().join("out");
    let status = toda()
        .args(["dpw", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());

    let obj = std::fs::read_to_string(out.join("mesh.obj")).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 81);

    // Homogeneous lift CSV: u, v plus three complex components.
    let csv = std::fs::read_to_string(out.join("lift.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("u,v,re1,im1,re2,im2,re3,im3"));
    let first = lines.next().unwrap();
    assert_eq!(first.split(',').count(), 8);
}

#[test]
fn chart_projection_rejects_vanishing_third_coordinate() {
    use num_complex::Complex64 as C64;
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mut lift = vec![[one, z, one]; 9];
    lift[4] = [one, one, z]; // f₃ = 0 at grid index (1, 1)
    let mesh = SurfaceMesh {
        class: SurfaceClass::Cp2,
        data: MeshData::Lift(lift),
        dims: (3, 3),
        origin: (0.0, 0.0),
        spacing: (0.1, 0.1),
    };
    match chart_project(&mesh) {
        Err(toda_cli::CliError::UnsupportedRepresentation { indices }) => {
            assert_eq!(indices, vec![(1, 1)]);
        }
        other => panic!("expected UnsupportedRepresentation, got {other:?}"),
    }
    // CSV export of the lift itself still works.
    let tmp = tempfile::tempdir().unwrap();
    export_csv(&mesh, &tmp.path().join("lift.csv")).unwrap();
}

#[test]
fn tiny_mesh_obj_counts() {
    let mesh = SurfaceMesh {
        class: SurfaceClass::AffIndef,
        data: MeshData::R3(vec![[0.0, 0.0, 1.0]; 9]),
        dims: (3, 3),
        origin: (0.0, 0.0),
        spacing: (0.1, 0.1),
    };
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("tiny.obj");
    toda_cli::export::export_obj(&mesh, &path).unwrap();
    let obj = std::fs::read_to_string(&path).unwrap();
    assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 9);
    assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 4);
}

#[test]
fn exit_status_reflects_failed_gates() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "integrate.json",
        r#"{
          "mode": "integrate",
          "geometry": "aff-indef",
          "grid": { "origin": [0.0, 0.0], "spacing": [0.0625, 0.0625], "dims": [17, 17] },
          "data": {
            "q": { "kind": "constant", "re": 1.0 },
            "r": { "kind": "constant", "re": 1.0 },
            "goursat": { "kind": "zero" }
          },
          "output": { "summary": "summary.json" }
        }"#,
    );
    let out = tmp.path().join("out");
    // An absurdly small gate scale makes the (nonzero) path-independence
    // defect fail its gate; the exit status must follow the summary.
    let output = toda()
        .args(["integrate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .args(["--tol", "1e-12"])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["pass"], serde_json::Value::Bool(false));
}

#[test]
fn mode_mismatch_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "solve.json",
        r#"{
          "mode": "solve",
          "geometry": "cp2",
          "grid": { "origin": [0, 0], "spacing": [0.1, 0.1], "dims": [9, 9] }
        }"#,
    );
    let output = toda()
        .args(["dpw", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}
