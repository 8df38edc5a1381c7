//! Acceptance suite: one test per criterion, each printing a PASS line
//! with the measured numbers (run with `--nocapture` to see them).

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;
use toda_core::algebra::{
    eig_project, i21, p0, p_sigma, twist_sigma_hat, CMat3, EigenIndex, InvolutionSpec,
    LaurentLoop, SurfaceClass,
};
use toda_core::factorization::{
    birkhoff_split, dpw_asymptotic, dpw_conformal, iwasawa_split, DpwOptions, GridSpec, MatPoly,
    Potential, PotentialPair,
};
use toda_core::frames::{
    extract_surface, integrate_frame, real_frame_conjugate, validate_surface, FrameOptions,
};
use toda_core::geometry::{
    build_alpha, symmetry_defects, CoordKind, GeometrySpec, PointData,
};
use toda_core::pde::{solve_elliptic, solve_hyperbolic, GoursatData, ScalarField, BLOWUP_GUARD};
use toda_core::realforms::{
    canonicalize, classify_involutions, InvolutionFamily, SearchConfig, SigmaRelation,
};
use toda_core::Error;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rand_c64(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0))
}

fn rand_mat(r: &mut ChaCha8Rng) -> CMat3 {
    let mut m = CMat3::zero();
    for i in 0..3 {
        for j in 0..3 {
            m.set(i, j, rand_c64(r));
        }
    }
    m
}

fn rand_untwisted_loop(r: &mut ChaCha8Rng, trunc: i32) -> LaurentLoop {
    let mut l = LaurentLoop::new(trunc);
    for k in -2..=2i32 {
        l.set_coeff(k, rand_mat(r));
    }
    l
}

fn rand_graded(r: &mut ChaCha8Rng, j: i64) -> CMat3 {
    eig_project(&rand_mat(r), EigenIndex::new(j))
}

fn rand_near_identity_twisted(r: &mut ChaCha8Rng, trunc: i32, scale: f64) -> LaurentLoop {
    let mut arg = LaurentLoop::new(trunc);
    for k in [-1i32, 0, 1] {
        arg.set_coeff(k, rand_graded(r, k as i64).scale(C64::new(scale, 0.0)));
    }
    let mut l = arg.exp();
    l.twisted = true;
    l
}

fn admissible_point(r: &mut ChaCha8Rng, class: SurfaceClass) -> PointData {
    let omega = r.gen_range(-1.0..1.0);
    let da = r.gen_range(-1.0..1.0);
    let db = r.gen_range(-1.0..1.0);
    match class {
        SurfaceClass::Ch21 => PointData::asymptotic(
            omega,
            da,
            db,
            C64::new(0.0, r.gen_range(-1.0..1.0)),
            C64::new(0.0, r.gen_range(-1.0..1.0)),
        ),
        SurfaceClass::AffIndef => PointData::asymptotic(
            omega,
            da,
            db,
            C64::new(r.gen_range(-1.0..1.0), 0.0),
            C64::new(r.gen_range(-1.0..1.0), 0.0),
        ),
        _ => PointData::conformal(omega, da, db, rand_c64(r)),
    }
}

#[test]
fn criterion_1_algebra_suite() {
    let start = Instant::now();
    let mut r = rng(41);

    // σ̂ order exactly 6 and P² = I.
    assert!((p_sigma() * p_sigma() - CMat3::identity()).norm() < 1e-12);
    for _ in 0..100 {
        let x = rand_mat(&mut r);
        let mut y = x;
        for _ in 0..3 {
            y = twist_sigma_hat(&y);
        }
        assert!((y - x).norm() > 1e-6, "sigma^3 = id on a generic matrix");
        for _ in 0..3 {
            y = twist_sigma_hat(&y);
        }
        assert!((y - x).norm() < 1e-12, "sigma^6 != id");
    }

    // Grading bracket closure [𝔤_i, 𝔤_j] ⊂ 𝔤_{i+j}.
    for _ in 0..100 {
        let i = r.gen_range(0..6i64);
        let j = r.gen_range(0..6i64);
        let xi = rand_graded(&mut r, i);
        let yj = rand_graded(&mut r, j);
        let br = xi.commutator(&yj);
        for k in 0..6i64 {
            if k != (i + j).rem_euclid(6) {
                assert!(
                    eig_project(&br, EigenIndex::new(k)).norm() < 1e-12,
                    "bracket [g_{i}, g_{j}] leaked into g_{k}"
                );
            }
        }
    }

    // Involution squares and commutation relations on random loops.
    for n in 0..100 {
        let class = SurfaceClass::ALL[n % 6];
        let spec = InvolutionSpec::for_class(class);
        let l = rand_untwisted_loop(&mut r, 4);
        let twice = spec.apply_loop(&spec.apply_loop(&l));
        assert!(twice.sub(&l).norm() < 1e-12, "{class:?}: tau^2 != id");
        if spec.commutes_with_sigma() {
            let st = spec.apply_loop(&l.sigma_twist());
            let ts = spec.apply_loop(&l).sigma_twist();
            assert!(st.sub(&ts).norm() < 1e-12, "{class:?}: sigma tau != tau sigma");
        } else {
            let sts = spec.apply_loop(&l.sigma_twist()).sigma_twist();
            assert!(
                sts.sub(&spec.apply_loop(&l)).norm() < 1e-12,
                "{class:?}: sigma tau sigma != tau"
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1 took {elapsed:?}");
    println!("ACCEPTANCE 1 (algebra suite): PASS in {elapsed:.2?}");
}

#[test]
fn criterion_2_lax_suite() {
    let mut r = rng(42);
    let mut worst_twist = 0.0f64;
    let mut worst_reality = 0.0f64;
    for class in SurfaceClass::ALL {
        let geom = GeometrySpec::new(class);
        for _ in 0..100 {
            let p = admissible_point(&mut r, class);
            let (t, re) = symmetry_defects(&geom, &p);
            worst_twist = worst_twist.max(t);
            worst_reality = worst_reality.max(re);
        }
    }
    assert!(worst_twist < 1e-12, "twist defect {worst_twist:.3e}");
    assert!(worst_reality < 1e-12, "reality defect {worst_reality:.3e}");

    // Substitution examples at λ = 1, gauges folded. The CP² family uses
    // the constant gauge diag(iλ, iλ⁻¹, 1) (the printed λ-gauge is not
    // σ̂-twisted), so its entries carry −i where the other classes have 1.
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let mi = C64::new(0.0, -1.0);
    let i = C64::new(0.0, 1.0);

    let cases: Vec<(SurfaceClass, PointData, CMat3, CMat3)> = vec![
        (
            SurfaceClass::AffIndef,
            PointData::asymptotic(0.0, 0.0, 0.0, one, one),
            CMat3::from_rows([[o, o, one], [one, o, o], [o, one, o]]),
            CMat3::from_rows([[o, one, o], [o, o, one], [one, o, o]]),
        ),
        (
            SurfaceClass::Cp2,
            PointData::conformal(0.0, 0.0, 0.0, one),
            CMat3::from_rows([[o, o, mi], [-one, o, o], [o, mi, o]]),
            CMat3::from_rows([[o, one, o], [o, o, mi], [mi, o, o]]),
        ),
        (
            SurfaceClass::Ch2,
            PointData::conformal(0.0, 0.0, 0.0, one),
            CMat3::from_rows([[o, o, one], [-one, o, o], [o, one, o]]),
            CMat3::from_rows([[o, one, o], [o, o, one], [one, o, o]]),
        ),
        (
            SurfaceClass::AffDefEll,
            PointData::conformal(0.0, 0.0, 0.0, one),
            CMat3::from_rows([[o, o, i], [one, o, o], [o, i, o]]),
            CMat3::from_rows([[o, one, o], [o, o, i], [i, o, o]]),
        ),
        (
            SurfaceClass::AffDefHyp,
            PointData::conformal(0.0, 0.0, 0.0, one),
            CMat3::from_rows([[o, o, one], [one, o, o], [o, one, o]]),
            CMat3::from_rows([[o, one, o], [o, o, one], [one, o, o]]),
        ),
        (
            SurfaceClass::Ch21,
            PointData::asymptotic(0.0, 0.0, 0.0, i, C64::new(0.0, -1.0)),
            CMat3::from_rows([[o, o, one], [mi, o, o], [o, one, o]]),
            CMat3::from_rows([[o, i, o], [o, o, one], [one, o, o]]),
        ),
    ];
    for (class, p, u_want, v_want) in cases {
        let geom = GeometrySpec::new(class);
        let (u, v) = build_alpha(&geom, &p, one).unwrap();
        assert!((u - u_want).norm() < 1e-14, "{class:?} U mismatch");
        assert!((v - v_want).norm() < 1e-14, "{class:?} V mismatch");
    }
    println!(
        "ACCEPTANCE 2 (Lax suite): PASS — twist {worst_twist:.2e}, reality {worst_reality:.2e}"
    );
}

/// One-variable exact Tzitzéica profile: fine-step RK4 for
/// g'' = rhs(g) sampled so that PDE grid node i sits at ODE node
/// `i * refine`. The trace of such a global solution is corner-compatible,
/// so the discrete solutions converge cleanly at second order.
fn ode_profile(rhs: impl Fn(f64) -> f64, a0: f64, h: f64, n: usize, refine: usize) -> Vec<f64> {
    let dt = h / refine as f64;
    let mut g = a0;
    let mut dg = 0.0;
    let mut out = Vec::with_capacity((n - 1) * refine + 1);
    out.push(g);
    for _ in 0..(n - 1) * refine {
        // RK4 on the first-order system (g, g').
        let f = |y: (f64, f64)| (y.1, rhs(y.0));
        let y = (g, dg);
        let k1 = f(y);
        let k2 = f((y.0 + 0.5 * dt * k1.0, y.1 + 0.5 * dt * k1.1));
        let k3 = f((y.0 + 0.5 * dt * k2.0, y.1 + 0.5 * dt * k2.1));
        let k4 = f((y.0 + dt * k3.0, y.1 + dt * k3.1));
        g += dt / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
        dg += dt / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
        out.push(g);
    }
    out
}

/// Solved ω with nontrivial interior for every class: the boundary or
/// Goursat data is the trace of a globally smooth one-variable solution,
/// and the discrete solver reproduces it.
fn solved_field(class: SurfaceClass, n: usize) -> (GeometrySpec, ScalarField) {
    let geom = GeometrySpec::new(class);
    let refine = 64;
    match geom.coord_kind {
        CoordKind::Conformal => {
            // ω(x, y) = g(x) with ¼ g'' + c₁e^g + c₂e^{−2g} = 0.
            let (c1, c2) = match class {
                SurfaceClass::Cp2 => (1.0, -1.0),
                SurfaceClass::AffDefEll => (1.0, 1.0),
                SurfaceClass::Ch2 => (-1.0, -1.0),
                _ => (-1.0, 1.0),
            };
            // The CP² profile oscillates; the others ride unstable or
            // strictly convex branches, so their domains stay short enough
            // to keep ω tame.
            let (len, a0) = match class {
                SurfaceClass::Cp2 => (1.0, 0.3),
                SurfaceClass::AffDefEll | SurfaceClass::Ch2 => (0.25, 0.0),
                _ => (0.5, 0.05),
            };
            let h = len / (n - 1) as f64;
            let profile = ode_profile(
                |g| -4.0 * (c1 * g.exp() + c2 * (-2.0 * g).exp()),
                a0,
                h,
                n,
                refine,
            );
            let boundary = ScalarField::from_fn((0.0, 0.0), (h, h), (n, n), |x, _| {
                profile[(x / h * refine as f64).round() as usize]
            })
            .unwrap();
            let q = |_: f64, _: f64| C64::new(1.0, 0.0);
            let sol = solve_elliptic(&geom, &q, &boundary, None, 1e-11).unwrap();
            (geom, sol.omega)
        }
        CoordKind::Asymptotic => {
            // ω(u, v) = g(u + v) with g'' = e^g − e^{−2g} (QR = 1 for both
            // asymptotic classes below); g rides an unstable branch, so the
            // domain stays at [0, 1/2]².
            let h = 0.5 / (n - 1) as f64;
            let profile = ode_profile(
                |g| g.exp() - (-2.0 * g).exp(),
                0.05,
                h,
                2 * n,
                refine,
            );
            let data = GoursatData::from_fns(
                (0.0, 0.0),
                (h, h),
                (n, n),
                |u| profile[(u / h * refine as f64).round() as usize],
                |v| profile[(v / h * refine as f64).round() as usize],
            );
            let (q, r): (fn(f64) -> C64, fn(f64) -> C64) = if class == SurfaceClass::Ch21 {
                (|_| C64::new(0.0, 1.0), |_| C64::new(0.0, -1.0))
            } else {
                (|_| C64::new(1.0, 0.0), |_| C64::new(1.0, 0.0))
            };
            let omega =
                solve_hyperbolic(&geom, &q, &r, &data, (0.0, 0.0), (h, h), (n, n), None).unwrap();
            (geom, omega)
        }
    }
}

fn class_samplers(
    class: SurfaceClass,
) -> (Box<dyn Fn(f64, f64) -> C64>, Box<dyn Fn(f64, f64) -> C64>) {
    match class {
        SurfaceClass::Ch21 => (
            Box::new(|_, _| C64::new(0.0, 1.0)),
            Box::new(|_, _| C64::new(0.0, -1.0)),
        ),
        _ => (
            Box::new(|_, _| C64::new(1.0, 0.0)),
            Box::new(|_, _| C64::new(1.0, 0.0)),
        ),
    }
}

#[test]
fn criterion_3_flatness_iff_pde() {
    for class in SurfaceClass::ALL {
        let (qf, rf) = class_samplers(class);
        let mut defects = Vec::new();
        for n in [17usize, 33, 65] {
            let (geom, omega) = solved_field(class, n);
            let frame = integrate_frame(
                &geom,
                &omega,
                &qf,
                &rf,
                C64::new(1.0, 0.0),
                CMat3::identity(),
                FrameOptions::default(),
            )
            .unwrap();
            defects.push(frame.path_defect);
        }
        let o1 = (defects[0] / defects[1]).log2();
        let o2 = (defects[1] / defects[2]).log2();
        assert!(
            o1 >= 1.9 && o2 >= 1.9,
            "{class:?}: path-defect orders ({o1:.2}, {o2:.2}), defects {defects:?}"
        );

        // Perturbing ω by 1e−3 breaks the defect by ≥ 10× at fixed h.
        let (geom, omega) = solved_field(class, 65);
        let mut perturbed = omega.clone();
        for i in 0..65 {
            for j in 0..65 {
                let bump = 1e-3
                    * (3.0 * std::f64::consts::PI * i as f64 / 64.0).sin()
                    * (3.0 * std::f64::consts::PI * j as f64 / 64.0).sin();
                perturbed.set(i, j, omega.get(i, j) + bump);
            }
        }
        // The admission gate is configurable; the perturbed field is
        // deliberately far from a solution.
        let loose = FrameOptions { residual_tol: 10.0, ..FrameOptions::default() };
        let base = integrate_frame(
            &geom,
            &omega,
            &qf,
            &rf,
            C64::new(1.0, 0.0),
            CMat3::identity(),
            loose,
        )
        .unwrap()
        .path_defect;
        let broken = integrate_frame(
            &geom,
            &perturbed,
            &qf,
            &rf,
            C64::new(1.0, 0.0),
            CMat3::identity(),
            loose,
        )
        .unwrap()
        .path_defect;
        assert!(
            broken >= 10.0 * base,
            "{class:?}: perturbation ratio {:.1} (base {base:.3e}, broken {broken:.3e})",
            broken / base
        );
        println!(
            "ACCEPTANCE 3 ({}): PASS — orders ({o1:.2}, {o2:.2}), perturbation x{:.0}",
            class.name(),
            broken / base
        );
    }
}

#[test]
fn criterion_4_vacuum_surfaces() {
    let one = |_: f64, _: f64| C64::new(1.0, 0.0);

    // Indefinite vacuum on 65×65 over [0, 1]².
    let start = Instant::now();
    let geom = GeometrySpec::new(SurfaceClass::AffIndef);
    let h = 1.0 / 64.0;
    let omega = ScalarField::zeros((0.0, 0.0), (h, h), (65, 65)).unwrap();
    let frame = integrate_frame(
        &geom,
        &omega,
        &one,
        &one,
        C64::new(1.0, 0.0),
        CMat3::identity(),
        FrameOptions::default(),
    )
    .unwrap();
    assert!(frame.det_drift < 1e-8, "det drift {:.3e}", frame.det_drift);
    let mesh = extract_surface(&geom, &frame).unwrap();
    let report = validate_surface(&geom, &mesh, &omega, Some(&one), Some(&one)).unwrap();
    let vol = report.get("volume").unwrap().defect;
    let normal = report.get("affine-normal").unwrap().defect;
    let cq = report.get("cubic-q").unwrap().defect;
    let cr = report.get("cubic-r").unwrap().defect;
    assert!(vol < 1e-6, "volume {vol:.3e}");
    assert!(normal < 1e-6, "normal {normal:.3e}");
    assert!(cq < 1e-5 && cr < 1e-5, "cubic ({cq:.3e}, {cr:.3e})");
    let t1 = start.elapsed();
    assert!(t1.as_secs_f64() < 30.0);

    // Hyperbolic definite vacuum: conformal checks plus the real-frame
    // conjugation residue.
    let start = Instant::now();
    let geom = GeometrySpec::new(SurfaceClass::AffDefHyp);
    let frame = integrate_frame(
        &geom,
        &omega,
        &one,
        &one,
        C64::new(1.0, 0.0),
        CMat3::identity(),
        FrameOptions::default(),
    )
    .unwrap();
    let real = real_frame_conjugate(&geom, &frame).unwrap();
    let mut residue = 0.0f64;
    for i in 0..65 {
        for j in 0..65 {
            residue = residue.max(real.get(i, j).max_imag());
        }
    }
    assert!(residue < 1e-8, "imaginary residue {residue:.3e}");
    let mesh = extract_surface(&geom, &frame).unwrap();
    let report = validate_surface(&geom, &mesh, &omega, Some(&one), None).unwrap();
    assert!(report.all_pass(), "hyperbolic vacuum report: {:#?}", report.checks);
    let t2 = start.elapsed();
    assert!(t2.as_secs_f64() < 30.0);
    println!(
        "ACCEPTANCE 4 (vacuum surfaces): PASS — indefinite (vol {vol:.2e}, normal {normal:.2e}, cubic {cq:.2e}/{cr:.2e}) in {t1:.2?}; hyperbolic residue {residue:.2e} in {t2:.2?}"
    );
}

#[test]
fn criterion_5_pde_solvers() {
    use std::f64::consts::PI;
    // Elliptic manufactured order.
    let geom = GeometrySpec::new(SurfaceClass::Cp2);
    let exact = |x: f64, y: f64| 0.1 * (PI * x).sin() * (PI * y).sin();
    let q1 = |_: f64, _: f64| C64::new(1.0, 0.0);
    let mut errs = Vec::new();
    for n in [17usize, 33, 65] {
        let h = 1.0 / (n - 1) as f64;
        let boundary = ScalarField::from_fn((0.0, 0.0), (h, h), (n, n), exact).unwrap();
        let forcing = ScalarField::from_fn((0.0, 0.0), (h, h), (n, n), |x, y| {
            let w = exact(x, y);
            -(-0.5 * PI * PI * w + w.exp() - (-2.0 * w).exp())
        })
        .unwrap();
        let sol = solve_elliptic(&geom, &q1, &boundary, Some(&forcing), 1e-11).unwrap();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((sol.omega.get(i, j) - exact(sol.omega.a(i), sol.omega.b(j))).abs());
            }
        }
        errs.push(worst);
    }
    let eo1 = (errs[0] / errs[1]).log2();
    let eo2 = (errs[1] / errs[2]).log2();
    assert!(eo1 >= 1.9 && eo2 >= 1.9, "elliptic orders ({eo1:.2}, {eo2:.2})");

    // Hyperbolic manufactured order.
    let geom_h = GeometrySpec::new(SurfaceClass::AffIndef);
    let exact_h = |u: f64, v: f64| 0.1 * u.sin() * v.sin();
    let one = |_t: f64| C64::new(1.0, 0.0);
    let mut errs_h = Vec::new();
    for n in [17usize, 33, 65] {
        let h = 1.0 / (n - 1) as f64;
        let forcing = ScalarField::from_fn((0.0, 0.0), (h, h), (n, n), |u, v| {
            let w = exact_h(u, v);
            -(0.1 * u.cos() * v.cos() - w.exp() + (-2.0 * w).exp())
        })
        .unwrap();
        let data = GoursatData::zero((n, n));
        let omega = solve_hyperbolic(
            &geom_h,
            &one,
            &one,
            &data,
            (0.0, 0.0),
            (h, h),
            (n, n),
            Some(&forcing),
        )
        .unwrap();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((omega.get(i, j) - exact_h(omega.a(i), omega.b(j))).abs());
            }
        }
        errs_h.push(worst);
    }
    let ho1 = (errs_h[0] / errs_h[1]).log2();
    let ho2 = (errs_h[1] / errs_h[2]).log2();
    assert!(ho1 >= 1.9 && ho2 >= 1.9, "hyperbolic orders ({ho1:.2}, {ho2:.2})");

    // Trivial solutions: ≤ 3 Newton steps, exact marching. ω ≡ 0 is an
    // exact root for CP² (e⁰ − 1) and hyperbolic definite affine spheres
    // (−e⁰ + 1); CH² has no constant solution since its nonlinearity is
    // e^ω + |Q|²e^{−2ω} > 0.
    let boundary = ScalarField::zeros((0.0, 0.0), (1.0 / 16.0, 1.0 / 16.0), (17, 17)).unwrap();
    let sol = solve_elliptic(&geom, &q1, &boundary, None, 1e-10).unwrap();
    assert!(sol.iterations <= 3 && sol.omega.max_abs() < 1e-12);
    let sol_hyp = solve_elliptic(
        &GeometrySpec::new(SurfaceClass::AffDefHyp),
        &q1,
        &boundary,
        None,
        1e-10,
    )
    .unwrap();
    assert!(sol_hyp.iterations <= 3 && sol_hyp.omega.max_abs() < 1e-12);
    let omega = solve_hyperbolic(
        &geom_h,
        &one,
        &one,
        &GoursatData::zero((33, 33)),
        (0.0, 0.0),
        (1.0 / 32.0, 1.0 / 32.0),
        (33, 33),
        None,
    )
    .unwrap();
    assert_eq!(omega.max_abs(), 0.0, "marching must recover the vacuum exactly");

    // Blow-up guard.
    let res = solve_hyperbolic(
        &geom_h,
        &one,
        &one,
        &GoursatData {
            on_u_axis: vec![20.0; 9],
            on_v_axis: vec![20.0; 9],
        },
        (0.0, 0.0),
        (1.0, 1.0),
        (9, 9),
        None,
    );
    match res {
        Err(Error::Blowup { value, .. }) => assert!(value.abs() > BLOWUP_GUARD),
        other => panic!("expected Blowup, got {other:?}"),
    }
    println!(
        "ACCEPTANCE 5 (PDE solvers): PASS — elliptic orders ({eo1:.2}, {eo2:.2}), hyperbolic ({ho1:.2}, {ho2:.2}), trivial in {} steps, guard ok",
        sol.iterations
    );
}

#[test]
fn criterion_6_factorization() {
    let start = Instant::now();
    let mut r = rng(77);
    let spec = InvolutionSpec::for_class(SurfaceClass::Cp2);
    let mut worst_birkhoff = 0.0f64;
    let mut worst_iwasawa = 0.0f64;
    let mut worst_resplit = 0.0f64;
    for _ in 0..100 {
        let l = rand_near_identity_twisted(&mut r, 8, 0.1);
        let b = birkhoff_split(&l).unwrap();
        worst_birkhoff = worst_birkhoff.max(b.residual);
        let iw = iwasawa_split(&l, &spec).unwrap();
        worst_iwasawa = worst_iwasawa.max(iw.residual);

        // Re-splitting the reassembled product reproduces the factors.
        let reassembled = b.plus_factor.mul(&b.minus_or_real_factor.inverse_minus());
        let b2 = birkhoff_split(&reassembled).unwrap();
        worst_resplit = worst_resplit
            .max(b.plus_factor.sub(&b2.plus_factor).norm())
            .max(b.minus_or_real_factor.sub(&b2.minus_or_real_factor).norm());
    }
    assert!(worst_birkhoff < 1e-9, "birkhoff residual {worst_birkhoff:.3e}");
    assert!(worst_iwasawa < 1e-9, "iwasawa residual {worst_iwasawa:.3e}");
    assert!(worst_resplit < 1e-9, "re-split deviation {worst_resplit:.3e}");

    // The homomorphism loop diag(λ, λ⁻¹, 1) lies off the big cell.
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let hom = LaurentLoop::from_coeffs(
        [
            (1, CMat3::diag(one, zero, zero)),
            (0, CMat3::diag(zero, zero, one)),
            (-1, CMat3::diag(zero, one, zero)),
        ],
        8,
    );
    assert!(matches!(birkhoff_split(&hom), Err(Error::SingularCell { .. })));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "criterion 6 took {elapsed:?}");
    println!(
        "ACCEPTANCE 6 (factorization): PASS in {elapsed:.2?} — birkhoff {worst_birkhoff:.2e}, iwasawa {worst_iwasawa:.2e}, resplit {worst_resplit:.2e}"
    );
}

#[test]
fn criterion_7_dpw_end_to_end() {
    let o = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);

    // Vacuum conformal potential (CH²): all validation defects < 1e−5.
    let e = CMat3::from_rows([[o, o, one], [-one, o, o], [o, one, o]]);
    let mut terms = BTreeMap::new();
    terms.insert(-1, MatPoly::constant(e));
    let eta = Potential::conformal(terms).unwrap();
    let spec = InvolutionSpec::for_class(SurfaceClass::Ch2);
    let grid = GridSpec { origin: (0.0, 0.0), spacing: (0.5 / 16.0, 0.5 / 16.0), dims: (17, 17) };
    let opts = DpwOptions { trunc: 12, threads: 1, gauge: None };
    let out = dpw_conformal(&eta, &spec, &grid, &opts).unwrap();
    assert_eq!(out.masked_count, 0);
    let ch2_max = out.report.max_defect();
    assert!(ch2_max < 1e-5, "CH2 vacuum defects: {:#?}", out.report.checks);
    assert!(out.reality_defect < 1e-8, "reality {:.3e}", out.reality_defect);

    // Nontrivial potential with Q(z) = z: the cubic differential is
    // recovered pointwise to 1e−4.
    let mut terms = BTreeMap::new();
    terms.insert(
        -1,
        MatPoly::new(vec![
            CMat3::from_rows([[o, o, one], [o, o, o], [o, one, o]]),
            CMat3::from_rows([[o, o, o], [-one, o, o], [o, o, o]]),
        ]),
    );
    let eta_z = Potential::conformal(terms).unwrap();
    let out_z = dpw_conformal(&eta_z, &spec, &grid, &opts).unwrap();
    assert_eq!(out_z.masked_count, 0);
    let cubic = out_z.report.get("cubic-q").unwrap().defect;
    assert!(cubic < 1e-4, "Q(z) = z recovery defect {cubic:.3e}");

    // Vacuum asymptotic pair: matches direct Lax integration up to one
    // constant gauge; matching defect < 1e−9.
    let a = CMat3::from_rows([[o, o, one], [one, o, o], [o, one, o]]);
    let spec2 = InvolutionSpec::for_class(SurfaceClass::AffIndef);
    let mut t1 = BTreeMap::new();
    t1.insert(-1, MatPoly::constant(a));
    let mut t2 = BTreeMap::new();
    t2.insert(1, MatPoly::constant(a.transpose()));
    let pair = PotentialPair::new(t1, t2, &spec2).unwrap();
    let n = 17;
    let h = 1.0 / (n - 1) as f64;
    let grid2 = GridSpec { origin: (0.0, 0.0), spacing: (h, h), dims: (n, n) };
    let opts2 = DpwOptions { trunc: 14, threads: 1, gauge: None };
    let out2 = dpw_asymptotic(&pair, &spec2, &grid2, &opts2).unwrap();
    assert_eq!(out2.masked_count, 0);
    assert!(
        out2.max_matching_defect < 1e-9,
        "matching defect {:.3e}",
        out2.max_matching_defect
    );

    let geom = GeometrySpec::new(SurfaceClass::AffIndef);
    let omega = ScalarField::zeros((0.0, 0.0), (h, h), (n, n)).unwrap();
    let qf = |_: f64, _: f64| C64::new(1.0, 0.0);
    let direct = integrate_frame(
        &geom,
        &omega,
        &qf,
        &qf,
        C64::new(1.0, 0.0),
        CMat3::identity(),
        FrameOptions::default(),
    )
    .unwrap();
    let idx = out2
        .frames
        .iter()
        .position(|f| (f.lambda - one).norm() < 1e-12)
        .unwrap();
    // Both frames are I at the base point, so the constant gauge linking
    // them is the identity.
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            dev = dev.max((*out2.frames[idx].get(i, j) - *direct.get(i, j)).norm());
        }
    }
    assert!(dev < 1e-6, "dpw vs direct Lax integration: {dev:.3e}");

    println!(
        "ACCEPTANCE 7 (loop-group pipelines): PASS — CH2 max defect {ch2_max:.2e}, Q(z)=z {cubic:.2e}, matching {:.2e}, vs-direct {dev:.2e}",
        out2.max_matching_defect
    );
}

#[test]
fn criterion_8_classification() {
    let start = Instant::now();
    let cfg = SearchConfig::default();
    let close = |a: &CMat3, b: &CMat3| (*a - *b).norm() < 1e-6;

    let found = classify_involutions(InvolutionFamily::Conjugation, SigmaRelation::Commuting, &cfg)
        .unwrap();
    assert_eq!(found.len(), 2, "{found:?}");
    assert!(found.iter().any(|c| close(&c.matrix, &p0())));
    assert!(found.iter().any(|c| close(&c.matrix, &(i21() * p0()))));

    let found =
        classify_involutions(InvolutionFamily::Outer, SigmaRelation::Commuting, &cfg).unwrap();
    assert_eq!(found.len(), 2, "{found:?}");
    assert!(found.iter().any(|c| close(&c.matrix, &CMat3::identity())));
    assert!(found.iter().any(|c| close(&c.matrix, &i21())));

    let found = classify_involutions(InvolutionFamily::Conjugation, SigmaRelation::Split, &cfg)
        .unwrap();
    assert_eq!(found.len(), 1, "{found:?}");
    assert!(close(&found[0].matrix, &CMat3::identity()));

    let found =
        classify_involutions(InvolutionFamily::Outer, SigmaRelation::Split, &cfg).unwrap();
    assert_eq!(found.len(), 1, "{found:?}");
    assert!(close(&found[0].matrix, &p0()));

    // The geometry involutions each land in exactly one canonical class.
    let assignments = [
        (SurfaceClass::Cp2, InvolutionFamily::Outer, SigmaRelation::Commuting, CMat3::identity()),
        (SurfaceClass::Ch2, InvolutionFamily::Outer, SigmaRelation::Commuting, i21()),
        (SurfaceClass::Ch21, InvolutionFamily::Outer, SigmaRelation::Split, p0()),
        (SurfaceClass::AffDefEll, InvolutionFamily::Conjugation, SigmaRelation::Commuting, p0()),
        (
            SurfaceClass::AffDefHyp,
            InvolutionFamily::Conjugation,
            SigmaRelation::Commuting,
            i21() * p0(),
        ),
        (SurfaceClass::AffIndef, InvolutionFamily::Conjugation, SigmaRelation::Split, CMat3::identity()),
    ];
    for (class, family, relation, want) in assignments {
        let spec = InvolutionSpec::for_class(class);
        // The involution's conjugator canonicalizes to the predicted class
        // representative, and the relation matches the spec's flag.
        assert_eq!(
            relation == SigmaRelation::Commuting,
            spec.commutes_with_sigma(),
            "{class:?} relation flag"
        );
        let canon = canonicalize(family, &spec.conjugator);
        let want_canon = canonicalize(family, &want);
        assert!(
            close(&canon, &want_canon),
            "{class:?} canonicalizes to the wrong representative"
        );
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 8 took {elapsed:?}");
    println!("ACCEPTANCE 8 (classification): PASS in {elapsed:.2?}");
}
