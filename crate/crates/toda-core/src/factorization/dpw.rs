//! The two loop-group construction pipelines: holomorphic potential with
//! Iwasawa splitting (conformal classes), potential pair with Birkhoff
//! splitting (asymptotic classes).

use super::birkhoff::birkhoff_split;
use super::iwasawa::iwasawa_split;
use super::potential::{integrate_potential, Potential, PotentialPair};
use crate::algebra::{CMat3, InvolutionSpec, LaurentLoop, SurfaceClass};
use crate::frames::{extract_surface, validate_surface_masked, FrameField, SurfaceMesh, ValidationReport};
use crate::geometry::GeometrySpec;
use crate::pde::ScalarField;
use crate::{Error, Result};
use num_complex::Complex64 as C64;

/// Rectangular evaluation grid.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub origin: (f64, f64),
    pub spacing: (f64, f64),
    pub dims: (usize, usize),
}

/// Pipeline tunables.
#[derive(Debug, Clone, Copy)]
pub struct DpwOptions {
    /// Loop truncation degree.
    pub trunc: i32,
    /// Worker threads for the per-node splits (output is independent of
    /// this value).
    pub threads: usize,
    /// Constant gauge applied on the right of the asymptotic frame
    /// (F₀ in G₀; identity by default).
    pub gauge: Option<CMat3>,
}

impl Default for DpwOptions {
    fn default() -> Self {
        DpwOptions { trunc: 8, threads: 1, gauge: None }
    }
}

/// Output of a construction pipeline.
pub struct DpwOutput {
    /// One frame field per λ sample of the geometry.
    pub frames: Vec<FrameField>,
    /// Surface extracted at λ = 1.
    pub mesh: SurfaceMesh,
    pub report: ValidationReport,
    /// Metric potential recovered from the splitting normalizers.
    pub omega: ScalarField,
    /// Per-node big-cell flags (row-major); false = singular, excluded from
    /// validation statistics.
    pub mask: Vec<bool>,
    pub masked_count: usize,
    /// Largest split reassembly residual over unmasked nodes.
    pub max_split_residual: f64,
    /// Largest ‖C₁L₊ − C₂L₋‖ over unmasked nodes (asymptotic pipeline).
    pub max_matching_defect: f64,
    /// Largest group reality defect ‖τ(F) − F‖ over frames and λ samples.
    /// Off-circle samples of the asymptotic classes amplify the truncation
    /// noise by |λ|^N, so this is an honest but pessimistic number there.
    pub reality_defect: f64,
    /// Group reality defect of the λ = 1 frame (the surface slice).
    pub reality_defect_surface: f64,
}

/// Sign relating the entry product (η₋₁)₁₃(η₋₁)₂₁(η₋₁)₃₂ of a potential to
/// the cubic differential Q of the resulting surface.
fn cubic_sign_u(class: SurfaceClass) -> f64 {
    match class {
        SurfaceClass::Cp2 | SurfaceClass::AffDefHyp | SurfaceClass::AffIndef => 1.0,
        SurfaceClass::Ch2 | SurfaceClass::AffDefEll | SurfaceClass::Ch21 => -1.0,
    }
}

/// Same for the λ¹ coefficient of the v-potential and R.
fn cubic_sign_v(class: SurfaceClass) -> f64 {
    match class {
        SurfaceClass::AffIndef => 1.0,
        SurfaceClass::Ch21 => -1.0,
        _ => 1.0,
    }
}

fn entry_product_u(m: &CMat3) -> C64 {
    m.get(0, 2) * m.get(1, 0) * m.get(2, 1)
}

fn entry_product_v(m: &CMat3) -> C64 {
    m.get(0, 1) * m.get(1, 2) * m.get(2, 0)
}

/// Runs `job` over all node indices, optionally on `threads` workers with
/// statically chunked ranges (deterministic output).
fn for_each_node<T: Send, F: Fn(usize) -> T + Sync>(n: usize, threads: usize, job: F) -> Vec<T> {
    if threads <= 1 || n < 2 * threads {
        return (0..n).map(job).collect();
    }
    let mut out: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let chunk = n.div_ceil(threads);
    std::thread::scope(|scope| {
        for (c, slice) in out.chunks_mut(chunk).enumerate() {
            let job = &job;
            scope.spawn(move || {
                for (off, slot) in slice.iter_mut().enumerate() {
                    *slot = Some(job(c * chunk + off));
                }
            });
        }
    });
    out.into_iter().map(|t| t.unwrap()).collect()
}

fn geometry_for(spec: &InvolutionSpec) -> Result<GeometrySpec> {
    let class = spec
        .class
        .ok_or_else(|| Error::InvalidInput("pipeline needs a surface-class involution".into()))?;
    Ok(GeometrySpec::new(class))
}

struct NodeSplit {
    f_loop: Option<LaurentLoop>,
    normalizer: f64,
    residual: f64,
    matching: f64,
    ok: bool,
}

/// The loop group procedure for surfaces of conformal type: integrate
/// dC = Cη from the grid origin, Iwasawa-split C = F·V₊ per node, extract
/// and validate the surface at λ = 1.
pub fn dpw_conformal(
    eta: &Potential,
    spec: &InvolutionSpec,
    grid: &GridSpec,
    opts: &DpwOptions,
) -> Result<DpwOutput> {
    let geom = geometry_for(spec)?;
    if !geom.class.is_conformal() {
        return Err(Error::InvalidInput(format!(
            "dpw_conformal needs a conformal class, got {}",
            geom.class.name()
        )));
    }
    let (na, nb) = grid.dims;
    if na < 3 || nb < 3 {
        return Err(Error::GridTooSmall(na, nb));
    }
    let trunc = opts.trunc;
    let base = LaurentLoop::identity(trunc);

    // C over the grid: along the first row in x, then along y per column
    // (dz = i dy).
    let z0 = C64::new(grid.origin.0, grid.origin.1);
    let row = integrate_potential(eta, z0, C64::new(grid.spacing.0, 0.0), na - 1, &base, trunc);
    let mut c_loops: Vec<Option<LaurentLoop>> = vec![None; na * nb];
    for i in 0..na {
        let zi = z0 + C64::new(grid.spacing.0 * i as f64, 0.0);
        let col = integrate_potential(eta, zi, C64::new(0.0, grid.spacing.1), nb - 1, &row[i], trunc);
        for (j, c) in col.into_iter().enumerate() {
            c_loops[i * nb + j] = Some(c);
        }
    }
    let c_loops: Vec<LaurentLoop> = c_loops.into_iter().map(|c| c.unwrap()).collect();

    let splits: Vec<NodeSplit> = for_each_node(na * nb, opts.threads, |k| {
        match iwasawa_split(&c_loops[k], spec) {
            Ok(pair) => NodeSplit {
                normalizer: pair.plus_factor.coeff(0).get(0, 0).re,
                residual: pair.residual,
                f_loop: Some(pair.minus_or_real_factor),
                matching: 0.0,
                ok: true,
            },
            Err(_) => NodeSplit {
                f_loop: None,
                normalizer: 1.0,
                residual: f64::INFINITY,
                matching: 0.0,
                ok: false,
            },
        }
    });

    assemble_conformal_output(&geom, spec, grid, splits, eta)
}

/// The loop group procedure for surfaces of asymptotic line type:
/// integrate the pair dC₁ = C₁η₁(u), dC₂ = C₂η₂(v), Birkhoff-split
/// C₁⁻¹C₂ = L₊·L₋⁻¹ per node, form W = C₁L₊ (= C₂L₋), gauge and validate.
pub fn dpw_asymptotic(
    pair: &PotentialPair,
    spec: &InvolutionSpec,
    grid: &GridSpec,
    opts: &DpwOptions,
) -> Result<DpwOutput> {
    let geom = geometry_for(spec)?;
    if geom.class.is_conformal() {
        return Err(Error::InvalidInput(format!(
            "dpw_asymptotic needs an asymptotic class, got {}",
            geom.class.name()
        )));
    }
    let (na, nb) = grid.dims;
    if na < 3 || nb < 3 {
        return Err(Error::GridTooSmall(na, nb));
    }
    let trunc = opts.trunc;
    let base = LaurentLoop::identity(trunc);
    let c1 = integrate_potential(
        &pair.eta1,
        C64::new(grid.origin.0, 0.0),
        C64::new(grid.spacing.0, 0.0),
        na - 1,
        &base,
        trunc,
    );
    let c2 = integrate_potential(
        &pair.eta2,
        C64::new(grid.origin.1, 0.0),
        C64::new(grid.spacing.1, 0.0),
        nb - 1,
        &base,
        trunc,
    );

    let samples = (8 * trunc as usize).max(64);
    let splits: Vec<NodeSplit> = for_each_node(na * nb, opts.threads, |k| {
        let (i, j) = (k / nb, k % nb);
        let psi = LaurentLoop::from_circle_samples(
            |lam| {
                let a = c1[i].eval(lam).unwrap();
                let b = c2[j].eval(lam).unwrap();
                a.inverse() * b
            },
            samples,
            2 * trunc,
        );
        match birkhoff_split(&psi) {
            Ok(p) => {
                // Matching defect ‖C₁L₊ − C₂L₋‖ over circle samples.
                let mut matching = 0.0f64;
                for s in 0..samples {
                    let lam = C64::from_polar(
                        1.0,
                        2.0 * std::f64::consts::PI * s as f64 / samples as f64,
                    );
                    let w1 = c1[i].eval(lam).unwrap() * p.plus_factor.eval(lam).unwrap();
                    let w2 = c2[j].eval(lam).unwrap()
                        * p.minus_or_real_factor.eval(lam).unwrap();
                    matching = matching.max((w1 - w2).norm());
                }
                NodeSplit {
                    normalizer: p.plus_factor.coeff(0).get(0, 0).norm(),
                    residual: p.residual,
                    matching,
                    f_loop: Some(p.plus_factor),
                    ok: true,
                }
            }
            Err(_) => NodeSplit {
                f_loop: None,
                normalizer: 1.0,
                residual: f64::INFINITY,
                matching: f64::INFINITY,
                ok: false,
            },
        }
    });

    // Frames F(λ) = C₁(λ)·L₊(λ)·F₀ per λ sample.
    let gauge = opts.gauge.unwrap_or_else(CMat3::identity);
    let mut frames = Vec::new();
    let mut reality = 0.0f64;
    let mut reality_surface = 0.0f64;
    let one = C64::new(1.0, 0.0);
    for &lam in &geom.lambda_samples {
        let mut field = FrameField::new(grid.dims, grid.origin, grid.spacing, lam, gauge);
        let mut worst = 0.0f64;
        for i in 0..na {
            for j in 0..nb {
                let k = i * nb + j;
                if let Some(lp) = &splits[k].f_loop {
                    let f = c1[i].eval(lam).unwrap() * lp.eval(lam).unwrap() * gauge;
                    worst = worst.max(spec.group_reality_defect(&f));
                    field.set(i, j, f);
                }
            }
        }
        reality = reality.max(worst);
        if (lam - one).norm() < 1e-12 {
            reality_surface = worst;
        }
        frames.push(field);
    }

    // ω from the splitting normalizer. With L₋(∞) = I the frame W = C₁L₊
    // carries a residual diagonal gauge diag(δ, δ⁻¹, 1) (which fixes e₃, so
    // the surface is unaffected); the gauge-invariant combination is the
    // entry product e^ω = (η₁,₋₁)₁₃(u)·(η₂,₁)₂₃(v) / (L₊)₀₁₁.
    let mut omega = ScalarField::zeros(grid.origin, grid.spacing, grid.dims)?;
    let eta2_top = |v: f64| {
        pair.eta2
            .terms()
            .get(&1)
            .map(|p| p.eval(C64::new(v, 0.0)))
            .unwrap_or_else(CMat3::zero)
            .get(1, 2)
            .norm()
    };
    for i in 0..na {
        for j in 0..nb {
            let k = i * nb + j;
            if splits[k].ok {
                let a = pair.eta1.lowest(C64::new(omega.a(i), 0.0)).get(0, 2).norm();
                let b = eta2_top(omega.b(j));
                let w = (a * b / splits[k].normalizer).max(1e-300).ln();
                omega.set(i, j, w);
            }
        }
    }

    let mask: Vec<bool> = splits.iter().map(|s| s.ok).collect();
    let masked_count = mask.iter().filter(|m| !**m).count();
    let max_split_residual = splits
        .iter()
        .filter(|s| s.ok)
        .map(|s| s.residual)
        .fold(0.0f64, f64::max);
    let max_matching_defect = splits
        .iter()
        .filter(|s| s.ok)
        .map(|s| s.matching)
        .fold(0.0f64, f64::max);

    let surface_idx = lambda_one_index(&geom);
    let mesh = extract_surface(&geom, &frames[surface_idx])?;

    let sq = cubic_sign_u(geom.class);
    let sr = cubic_sign_v(geom.class);
    let eta1 = pair.eta1.clone();
    let eta2 = pair.eta2.clone();
    let qf = move |a: f64, _b: f64| entry_product_u(&eta1.lowest(C64::new(a, 0.0))) * sq;
    let rf = move |_a: f64, b: f64| {
        entry_product_v(&eta2.terms().get(&1).map(|p| p.eval(C64::new(b, 0.0))).unwrap_or_else(CMat3::zero))
            * sr
    };
    let report = validate_surface_masked(&geom, &mesh, &omega, Some(&qf), Some(&rf), Some(&mask))?;

    Ok(DpwOutput {
        frames,
        mesh,
        report,
        omega,
        mask,
        masked_count,
        max_split_residual,
        max_matching_defect,
        reality_defect: reality,
        reality_defect_surface: reality_surface,
    })
}

fn lambda_one_index(geom: &GeometrySpec) -> usize {
    let one = C64::new(1.0, 0.0);
    geom.lambda_samples
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (*a - one)
                .norm()
                .partial_cmp(&(*b - one).norm())
                .unwrap()
        })
        .map(|(i, _)| i)
        .unwrap()
}

// Tail of the conformal pipeline: frames from the F-loops, ω from the
// split normalizers, surface extraction and masked validation.
fn assemble_conformal_output(
    geom: &GeometrySpec,
    spec: &InvolutionSpec,
    grid: &GridSpec,
    splits: Vec<NodeSplit>,
    eta: &Potential,
) -> Result<DpwOutput> {
    let (na, nb) = grid.dims;
    let mut frames = Vec::new();
    let mut reality = 0.0f64;
    let mut reality_surface = 0.0f64;
    let one = C64::new(1.0, 0.0);
    for &lam in &geom.lambda_samples {
        let mut field = FrameField::new(grid.dims, grid.origin, grid.spacing, lam, CMat3::identity());
        let mut worst = 0.0f64;
        for i in 0..na {
            for j in 0..nb {
                let k = i * nb + j;
                if let Some(fl) = &splits[k].f_loop {
                    let f = fl.eval(lam).unwrap();
                    worst = worst.max(spec.group_reality_defect(&f));
                    field.set(i, j, f);
                }
            }
        }
        reality = reality.max(worst);
        if (lam - one).norm() < 1e-12 {
            reality_surface = worst;
        }
        frames.push(field);
    }

    // ω from the split normalizer v: e^{ω/2} = |v·(η₋₁)₁₃(z)|.
    let mut omega = ScalarField::zeros(grid.origin, grid.spacing, grid.dims)?;
    for i in 0..na {
        for j in 0..nb {
            let k = i * nb + j;
            if splits[k].ok {
                let z = C64::new(omega.a(i), omega.b(j));
                let a = eta.lowest(z).get(0, 2).norm();
                let w = 2.0 * (splits[k].normalizer * a).max(1e-300).ln();
                omega.set(i, j, w);
            }
        }
    }

    let mask: Vec<bool> = splits.iter().map(|s| s.ok).collect();
    let masked_count = mask.iter().filter(|m| !**m).count();
    let max_split_residual = splits
        .iter()
        .filter(|s| s.ok)
        .map(|s| s.residual)
        .fold(0.0f64, f64::max);

    let surface_idx = lambda_one_index(geom);
    let mesh = extract_surface(geom, &frames[surface_idx])?;

    let sq = cubic_sign_u(geom.class);
    let eta_c = eta.clone();
    let qf = move |a: f64, b: f64| entry_product_u(&eta_c.lowest(C64::new(a, b))) * sq;
    let report = validate_surface_masked(geom, &mesh, &omega, Some(&qf), None, Some(&mask))?;

    Ok(DpwOutput {
        frames,
        mesh,
        report,
        omega,
        mask,
        masked_count,
        max_split_residual,
        max_matching_defect: 0.0,
        reality_defect: reality,
        reality_defect_surface: reality_surface,
    })
}
