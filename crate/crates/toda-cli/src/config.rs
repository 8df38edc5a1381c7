//! JSON pipeline configuration and its validation.

use crate::CliError;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use toda_core::algebra::{CMat3, SurfaceClass};
use toda_core::factorization::{GridSpec, MatPoly};
use toda_core::realforms::{InvolutionFamily, SigmaRelation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Solve,
    LaxCheck,
    Integrate,
    Dpw,
    Classify,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub origin: [f64; 2],
    pub spacing: [f64; 2],
    pub dims: [usize; 2],
}

/// Scalar sampler: a constant or a polynomial (coefficients as [re, im]
/// pairs) in z for the conformal classes, in u or v for the asymptotic
/// ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SamplerConfig {
    Constant { re: f64, #[serde(default)] im: f64 },
    Poly { coeffs: Vec<[f64; 2]> },
}

impl SamplerConfig {
    pub fn eval(&self, t: C64) -> C64 {
        match self {
            SamplerConfig::Constant { re, im } => C64::new(*re, *im),
            SamplerConfig::Poly { coeffs } => {
                let mut acc = C64::new(0.0, 0.0);
                let mut p = C64::new(1.0, 0.0);
                for c in coeffs {
                    acc += C64::new(c[0], c[1]) * p;
                    p *= t;
                }
                acc
            }
        }
    }
}

fn default_q() -> SamplerConfig {
    SamplerConfig::Constant { re: 1.0, im: 0.0 }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryConfig {
    Zero,
    Constant { value: f64 },
    /// Full row-major grid of values; only the boundary trace is used.
    Values { values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GoursatConfig {
    Zero,
    Constant { value: f64 },
    Values { u_axis: Vec<f64>, v_axis: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DataConfig {
    #[serde(default = "default_q")]
    pub q: SamplerConfig,
    #[serde(default = "default_q")]
    pub r: SamplerConfig,
    #[serde(default)]
    pub boundary: Option<BoundaryConfig>,
    #[serde(default)]
    pub goursat: Option<GoursatConfig>,
}

impl Default for DataConfig {
    fn default() -> Self {
        DataConfig { q: default_q(), r: default_q(), boundary: None, goursat: None }
    }
}

/// One λ-degree of a potential: a matrix-valued polynomial, entries as
/// [re, im].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialTermConfig {
    pub degree: i32,
    /// Polynomial coefficients, each a 3×3 matrix of [re, im] entries.
    pub coeffs: Vec<[[[f64; 2]; 3]; 3]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PotentialConfig {
    /// Conformal potential (modes with a conformal geometry).
    #[serde(default)]
    pub eta: Option<Vec<PotentialTermConfig>>,
    /// Asymptotic pair.
    #[serde(default)]
    pub eta1: Option<Vec<PotentialTermConfig>>,
    #[serde(default)]
    pub eta2: Option<Vec<PotentialTermConfig>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub family: String,
    pub relation: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct OutputConfig {
    #[serde(default)]
    pub summary: Option<String>,
    #[serde(default)]
    pub mesh_obj: Option<String>,
    #[serde(default)]
    pub mesh_csv: Option<String>,
    #[serde(default)]
    pub residual_csv: Option<String>,
    /// Chart-project Lagrangian lifts before OBJ export.
    #[serde(default)]
    pub chart: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Gate scale multiplying the per-check tolerances.
    #[serde(default = "one")]
    pub gate_scale: f64,
    /// Tzitzéica residual admission threshold for frame integration.
    #[serde(default = "default_residual_tol")]
    pub frame_residual: f64,
    /// Elliptic Newton target residual.
    #[serde(default = "default_newton_tol")]
    pub newton: f64,
}

fn one() -> f64 {
    1.0
}
fn default_residual_tol() -> f64 {
    0.1
}
fn default_newton_tol() -> f64 {
    1e-10
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig { gate_scale: 1.0, frame_residual: 0.1, newton: 1e-10 }
    }
}

/// Full pipeline configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub mode: Mode,
    #[serde(default)]
    pub geometry: Option<String>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub data: DataConfig,
    #[serde(default)]
    pub potential: Option<PotentialConfig>,
    #[serde(default)]
    pub classify: Option<ClassifyConfig>,
    /// λ samples as [re, im]; defaults to the geometry's parameter set.
    #[serde(default)]
    pub lambda: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub tolerances: ToleranceConfig,
    /// Loop truncation degree for the factorization pipelines.
    #[serde(default = "default_trunc")]
    pub trunc: i32,
    #[serde(default = "default_threads")]
    pub threads: usize,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_trunc() -> i32 {
    8
}
fn default_threads() -> usize {
    1
}

impl PipelineConfig {
    pub fn from_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn surface_class(&self) -> Result<SurfaceClass, CliError> {
        let name = self
            .geometry
            .as_deref()
            .ok_or_else(|| CliError::Config("geometry: missing".into()))?;
        SurfaceClass::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| CliError::Config(format!("geometry: unknown tag '{name}'")))
    }

    pub fn grid_spec(&self) -> Result<GridSpec, CliError> {
        let g = self.grid.as_ref().ok_or_else(|| CliError::Config("grid: missing".into()))?;
        if g.dims[0] < 3 || g.dims[1] < 3 {
            return Err(CliError::Config(format!(
                "grid.dims: need at least 3 per side, got [{}, {}]",
                g.dims[0], g.dims[1]
            )));
        }
        if g.spacing[0] <= 0.0 || g.spacing[1] <= 0.0 {
            return Err(CliError::Config("grid.spacing: must be positive".into()));
        }
        Ok(GridSpec {
            origin: (g.origin[0], g.origin[1]),
            spacing: (g.spacing[0], g.spacing[1]),
            dims: (g.dims[0], g.dims[1]),
        })
    }

    pub fn classify_request(&self) -> Result<(InvolutionFamily, SigmaRelation), CliError> {
        let c = self
            .classify
            .as_ref()
            .ok_or_else(|| CliError::Config("classify: missing".into()))?;
        let family = match c.family.as_str() {
            "conjugation" => InvolutionFamily::Conjugation,
            "outer" => InvolutionFamily::Outer,
            other => {
                return Err(CliError::Config(format!("classify.family: unknown '{other}'")))
            }
        };
        let relation = match c.relation.as_str() {
            "commuting" => SigmaRelation::Commuting,
            "split" => SigmaRelation::Split,
            other => {
                return Err(CliError::Config(format!("classify.relation: unknown '{other}'")))
            }
        };
        Ok((family, relation))
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.tolerances.gate_scale <= 0.0 || self.tolerances.newton <= 0.0 {
            return Err(CliError::Config("tolerances: must be positive".into()));
        }
        if self.trunc < 1 {
            return Err(CliError::Config("trunc: must be at least 1".into()));
        }
        match self.mode {
            Mode::Classify => {
                self.classify_request()?;
            }
            Mode::Dpw => {
                self.surface_class()?;
                self.grid_spec()?;
                if self.potential.is_none() {
                    return Err(CliError::Config("potential: missing".into()));
                }
            }
            _ => {
                self.surface_class()?;
                self.grid_spec()?;
            }
        }
        Ok(())
    }
}

pub fn potential_terms(
    terms: &[PotentialTermConfig],
) -> Result<BTreeMap<i32, MatPoly>, CliError> {
    let mut map = BTreeMap::new();
    for t in terms {
        if t.coeffs.is_empty() {
            return Err(CliError::Config(format!(
                "potential degree {}: empty coefficient list",
                t.degree
            )));
        }
        let coeffs: Vec<CMat3> = t
            .coeffs
            .iter()
            .map(|m| {
                let mut out = CMat3::zero();
                for i in 0..3 {
                    for j in 0..3 {
                        out.set(i, j, C64::new(m[i][j][0], m[i][j][1]));
                    }
                }
                out
            })
            .collect();
        map.insert(t.degree, MatPoly::new(coeffs));
    }
    Ok(map)
}
