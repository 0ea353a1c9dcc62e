//! Implementations behind the CLI subcommands. Each returns a process exit
//! code: 0 = success/verified, 1 = mathematical failure (falsification or
//! non-convergence), 2 = usage or input error.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use hypersc::analyzer::{
    self, certify, certify_field, CertifyTarget, SCReport, SamplerConfig, Witness, BOUND_SLACK,
};
use hypersc::fields::{ball_barrier, ScalarField, SquaredDistanceField};
use hypersc::hyperboloid::{HPoint, HTangent};
use hypersc::meb;
use hypersc::newton::{minimize, newton_direction, MinimizeOptions, StepKind};
use hypersc::oracles::{fd_directional, fd_hessian_derivative};
use hypersc::product::{ProductPoint, ProductTangent};

use crate::formats::{
    self, points_file_to_instance, render_trace_csv, ConfigEcho, IterationCounts, ResultFile,
    TraceRow,
};
use crate::jsonfmt::to_json_string;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MATH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn random_unit(rng: &mut ChaCha8Rng, x: &HPoint) -> HTangent {
    let basis = x.tangent_basis();
    loop {
        let mut acc = HTangent::zero(x.clone());
        for b in &basis {
            let g: f64 = rng.sample(StandardNormal);
            acc = acc.add(&b.scale(g)).expect("same base");
        }
        if acc.local_norm() > 1e-9 {
            return acc.scale(1.0 / acc.local_norm());
        }
    }
}

fn write_or_stdout(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("writing {}: {e}", p.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

// --- check-derivatives ----------------------------------------------------

pub struct CheckDerivativesArgs {
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub kappa: f64,
}

#[derive(Serialize)]
struct DerivErrors {
    df: f64,
    hessian: f64,
    hessian_derivative: f64,
    hessian_derivative_mixed: f64,
    barrier_df: f64,
    barrier_hessian: f64,
    barrier_hessian_derivative: f64,
}

#[derive(Serialize)]
struct WorstCase {
    kind: String,
    rel_err: f64,
    arc: f64,
}

#[derive(Serialize)]
struct DerivReport {
    command: String,
    dim: usize,
    kappa: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    max_rel_err: DerivErrors,
    worst: WorstCase,
    pass: bool,
}

fn rel_err(oracle: f64, closed: f64) -> f64 {
    (oracle - closed).abs() / closed.abs().max(1.0)
}

pub fn run_check_derivatives(args: &CheckDerivativesArgs) -> i32 {
    if args.dim < 2 {
        eprintln!("check-derivatives: --dim must be >= 2 (got {})", args.dim);
        return EXIT_USAGE;
    }
    if !(args.kappa.is_finite() && args.kappa > 0.0) {
        eprintln!(
            "check-derivatives: --kappa must be positive (got {})",
            args.kappa
        );
        return EXIT_USAGE;
    }
    if !(args.tol > 0.0) {
        eprintln!(
            "check-derivatives: --tol must be positive (got {})",
            args.tol
        );
        return EXIT_USAGE;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let apex = HPoint::apex(args.dim, args.kappa);
    let mut errs = DerivErrors {
        df: 0.0,
        hessian: 0.0,
        hessian_derivative: 0.0,
        hessian_derivative_mixed: 0.0,
        barrier_df: 0.0,
        barrier_hessian: 0.0,
        barrier_hessian_derivative: 0.0,
    };
    let mut worst = WorstCase {
        kind: String::new(),
        rel_err: 0.0,
        arc: 0.0,
    };

    for _ in 0..args.samples {
        let w = random_unit(&mut rng, &apex);
        let xh = apex
            .exp(&w.scale(rng.random::<f64>()))
            .expect("exp from apex");
        let arc = (rng.random::<f64>() * (20.0f64.ln() - 0.01f64.ln()) + 0.01f64.ln()).exp();
        let dir = random_unit(&mut rng, &xh);
        let pole = xh
            .exp(&dir.scale(-arc / args.kappa.sqrt()))
            .expect("pole placement");
        let x = ProductPoint::hyperbolic(xh.clone());
        let u = ProductTangent::hyperbolic(random_unit(&mut rng, &xh));
        let v = ProductTangent::hyperbolic(random_unit(&mut rng, &xh));

        let f = SquaredDistanceField::new(pole.clone());
        // A ball barrier whose boundary stays away from x.
        let radius = (arc / args.kappa.sqrt()) * 1.5 + 1.0;
        let barrier = ball_barrier(pole, radius);

        let mut offer = |kind: &str, e: f64, slot: &mut f64| {
            *slot = slot.max(e);
            if e > worst.rel_err {
                worst = WorstCase {
                    kind: kind.to_string(),
                    rel_err: e,
                    arc,
                };
            }
        };

        let e = rel_err(fd_directional(&f, &x, &u, 1), f.differential_apply(&x, &u));
        offer("df", e, &mut errs.df);
        let e = rel_err(
            fd_directional(&f, &x, &u, 2),
            f.hessian_bilinear(&x, &u, &u),
        );
        offer("hessian", e, &mut errs.hessian);
        let e = rel_err(
            fd_directional(&f, &x, &u, 3),
            f.hessian_derivative_bilinear(&x, &u, &u, &u),
        );
        offer("hessian_derivative", e, &mut errs.hessian_derivative);
        let e = rel_err(
            fd_hessian_derivative(&f, &x, &v, &u),
            f.hessian_derivative_bilinear(&x, &v, &u, &u),
        );
        offer(
            "hessian_derivative_mixed",
            e,
            &mut errs.hessian_derivative_mixed,
        );

        let e = rel_err(
            fd_directional(&barrier, &x, &u, 1),
            barrier.differential_apply(&x, &u),
        );
        offer("barrier_df", e, &mut errs.barrier_df);
        let e = rel_err(
            fd_directional(&barrier, &x, &u, 2),
            barrier.hessian_bilinear(&x, &u, &u),
        );
        offer("barrier_hessian", e, &mut errs.barrier_hessian);
        let e = rel_err(
            fd_directional(&barrier, &x, &u, 3),
            barrier.hessian_derivative_bilinear(&x, &u, &u, &u),
        );
        offer(
            "barrier_hessian_derivative",
            e,
            &mut errs.barrier_hessian_derivative,
        );
    }

    let pass = worst.rel_err <= args.tol;
    let report = DerivReport {
        command: "check-derivatives".into(),
        dim: args.dim,
        kappa: args.kappa,
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        max_rel_err: errs,
        worst,
        pass,
    };
    println!("{}", to_json_string(&report));
    if pass {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

// --- certify-sc -------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldChoice {
    Sqdist,
    BallBarrier,
    MebBarrier,
}

pub struct CertifyArgs {
    pub field: FieldChoice,
    pub kappa: f64,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub lmax: f64,
    pub radius: Vec<f64>,
    pub points: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Serialize)]
struct WitnessJson {
    ratio: f64,
    x_hyper: Vec<f64>,
    x_eucl: Vec<f64>,
    u_hyper: Vec<f64>,
    u_eucl: Vec<f64>,
    v_hyper: Vec<f64>,
    v_eucl: Vec<f64>,
    pole: Vec<f64>,
    arc: f64,
    from_probe: bool,
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        WitnessJson {
            ratio: w.ratio,
            x_hyper: w.x_hyper.clone(),
            x_eucl: w.x_eucl.clone(),
            u_hyper: w.u_hyper.clone(),
            u_eucl: w.u_eucl.clone(),
            v_hyper: w.v_hyper.clone(),
            v_eucl: w.v_eucl.clone(),
            pole: w.pole.clone(),
            arc: w.arc,
            from_probe: w.from_probe,
        }
    }
}

#[derive(Serialize)]
struct ProbePointJson {
    arc: f64,
    sc: f64,
    wsc: f64,
    sc_analytic: Option<f64>,
    wsc_analytic: Option<f64>,
}

#[derive(Serialize)]
struct SCReportJson {
    max_sc_ratio: f64,
    max_wsc_ratio: f64,
    sc_witness: WitnessJson,
    wsc_witness: WitnessJson,
    samples: usize,
    seed: u64,
    probe_curve: Vec<ProbePointJson>,
}

impl From<&SCReport> for SCReportJson {
    fn from(r: &SCReport) -> Self {
        SCReportJson {
            max_sc_ratio: r.max_sc_ratio,
            max_wsc_ratio: r.max_wsc_ratio,
            sc_witness: (&r.sc_witness).into(),
            wsc_witness: (&r.wsc_witness).into(),
            samples: r.samples,
            seed: r.seed,
            probe_curve: r
                .probe_curve
                .iter()
                .map(|p| ProbePointJson {
                    arc: p.arc,
                    sc: p.sc,
                    wsc: p.wsc,
                    sc_analytic: p.sc_analytic,
                    wsc_analytic: p.wsc_analytic,
                })
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct BoundsJson {
    sc_bound: f64,
    wsc_bound: Option<f64>,
    barrier_nu: Option<f64>,
    barrier_worst_ratio: Option<f64>,
}

#[derive(Serialize)]
struct CertifyReport {
    command: String,
    field: String,
    kappa: f64,
    dim: usize,
    report: SCReportJson,
    bounds: BoundsJson,
    tightness_scan: Option<Vec<(f64, f64)>>,
    pass: bool,
}

pub fn run_certify(args: &CertifyArgs) -> i32 {
    if args.dim < 2 {
        eprintln!("certify-sc: --dim must be >= 2 (got {})", args.dim);
        return EXIT_USAGE;
    }
    if !(args.kappa.is_finite() && args.kappa > 0.0) {
        eprintln!("certify-sc: --kappa must be positive (got {})", args.kappa);
        return EXIT_USAGE;
    }
    let mut config = SamplerConfig::new(args.seed, args.samples);
    config.arc_max = args.lmax;
    config.threads = args.threads;

    match args.field {
        FieldChoice::Sqdist => {
            let target = CertifyTarget::Sqdist {
                dim: args.dim,
                kappa: args.kappa,
            };
            let report = match certify(&target, &config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_USAGE;
                }
            };
            let sc_bound = analyzer::sqdist_sc_bound(args.kappa);
            let wsc_bound = analyzer::sqdist_wsc_bound(args.kappa);
            let pass = report.max_sc_ratio <= sc_bound + BOUND_SLACK
                && report.max_wsc_ratio <= wsc_bound + BOUND_SLACK;
            let out = CertifyReport {
                command: "certify-sc".into(),
                field: "sqdist".into(),
                kappa: args.kappa,
                dim: args.dim,
                report: (&report).into(),
                bounds: BoundsJson {
                    sc_bound,
                    wsc_bound: Some(wsc_bound),
                    barrier_nu: None,
                    barrier_worst_ratio: None,
                },
                tightness_scan: None,
                pass,
            };
            println!("{}", to_json_string(&out));
            if pass {
                EXIT_OK
            } else {
                EXIT_MATH
            }
        }
        FieldChoice::BallBarrier => {
            if args.radius.is_empty() || args.radius.iter().any(|r| !(*r > 0.0)) {
                eprintln!("certify-sc: --radius must list positive radii");
                return EXIT_USAGE;
            }
            let r0 = args.radius[0];
            let target = CertifyTarget::BallBarrier {
                dim: args.dim,
                kappa: args.kappa,
                radius: r0,
            };
            let report = match certify(&target, &config) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_USAGE;
                }
            };
            let sigma = analyzer::sigma_tilde_ball(args.kappa, r0);
            let mut pass = report.max_sc_ratio <= sigma + BOUND_SLACK;
            let scan = if args.radius.len() > 1 {
                match analyzer::tightness_scan(&args.radius, args.kappa) {
                    Ok(s) => {
                        for (radius, ratio) in &s {
                            pass &= *ratio
                                <= analyzer::sigma_tilde_ball(args.kappa, *radius) + BOUND_SLACK;
                        }
                        Some(s)
                    }
                    Err(e) => {
                        eprintln!("certify-sc: {e}");
                        return EXIT_USAGE;
                    }
                }
            } else {
                None
            };
            let out = CertifyReport {
                command: "certify-sc".into(),
                field: "ball-barrier".into(),
                kappa: args.kappa,
                dim: args.dim,
                report: (&report).into(),
                bounds: BoundsJson {
                    sc_bound: sigma,
                    wsc_bound: Some(sigma),
                    barrier_nu: None,
                    barrier_worst_ratio: None,
                },
                tightness_scan: scan,
                pass,
            };
            println!("{}", to_json_string(&out));
            if pass {
                EXIT_OK
            } else {
                EXIT_MATH
            }
        }
        FieldChoice::MebBarrier => {
            let instance = match &args.points {
                Some(path) => match load_instance(path, 1e-4) {
                    Ok(i) => i,
                    Err((code, msg)) => {
                        eprintln!("certify-sc: {msg}");
                        return code;
                    }
                },
                None => builtin_instance(args.kappa),
            };
            let mp = match meb::build_problem(&instance) {
                Ok(mp) => mp,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_USAGE;
                }
            };
            let n_points = (args.samples / 8).clamp(1, 2000);
            let interior = match meb::sample_interior(&mp, n_points, args.seed) {
                Ok(i) => i,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_MATH;
                }
            };
            let report = match certify_field(mp.problem.barrier.as_ref(), &interior, args.seed, 8) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_MATH;
                }
            };
            // The barrier is 1-self-concordant with parameter nu.
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed ^ 0x5eed);
            let samples: Vec<(ProductPoint, ProductTangent)> = interior
                .iter()
                .map(|x| {
                    let basis = x.tangent_basis();
                    let mut acc = x.zero_tangent();
                    for b in &basis {
                        let g: f64 = rng.sample(StandardNormal);
                        acc = acc.add(&b.scale(g)).expect("same base");
                    }
                    (x.clone(), acc)
                })
                .collect();
            let bp = match analyzer::barrier_parameter_check(
                mp.problem.barrier.as_ref(),
                mp.derived.nu,
                &samples,
            ) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("certify-sc: {e}");
                    return EXIT_MATH;
                }
            };
            let pass = report.max_sc_ratio <= 1.0 + BOUND_SLACK && bp.ok;
            let out = CertifyReport {
                command: "certify-sc".into(),
                field: "meb-barrier".into(),
                kappa: args.kappa,
                dim: instance.points[0].dim(),
                report: (&report).into(),
                bounds: BoundsJson {
                    sc_bound: 1.0,
                    wsc_bound: Some(1.0),
                    barrier_nu: Some(mp.derived.nu),
                    barrier_worst_ratio: Some(bp.worst_ratio),
                },
                tightness_scan: None,
                pass,
            };
            println!("{}", to_json_string(&out));
            if pass {
                EXIT_OK
            } else {
                EXIT_MATH
            }
        }
    }
}

/// Deterministic five-point instance used when no points file is given.
fn builtin_instance(kappa: f64) -> meb::MebInstance {
    let apex = HPoint::apex(2, kappa);
    let b = apex.tangent_basis();
    let spots: [(f64, f64); 5] = [
        (0.0, 0.0),
        (0.9, 0.2),
        (-0.4, 0.7),
        (0.3, -0.8),
        (-0.6, -0.3),
    ];
    let points = spots
        .iter()
        .map(|(a, c)| {
            let w = b[0].scale(*a).add(&b[1].scale(*c)).expect("same base");
            apex.exp(&w).expect("exp from apex")
        })
        .collect();
    meb::MebInstance::new(points, kappa, 1e-4).expect("builtin instance is valid")
}

// --- newton-demo ------------------------------------------------------------

pub struct NewtonDemoArgs {
    pub kappa: f64,
    pub radius: f64,
    pub dim: usize,
    pub seed: u64,
    pub lambda_target: f64,
    pub trace: Option<PathBuf>,
}

#[derive(Serialize)]
struct NewtonDemoReport {
    command: String,
    kappa: f64,
    radius: f64,
    dim: usize,
    seed: u64,
    sigma: f64,
    lambda_target: f64,
    start_arc: f64,
    damped_steps: u64,
    full_steps: u64,
    final_lambda: f64,
    final_value: f64,
    pass: bool,
}

pub fn run_newton_demo(args: &NewtonDemoArgs) -> i32 {
    if args.dim < 2 || !(args.radius > 0.0) || !(args.kappa > 0.0) || !(args.lambda_target > 0.0) {
        eprintln!("newton-demo: need --dim >= 2 and positive --radius/--kappa/--lambda-target");
        return EXIT_USAGE;
    }
    let pole = HPoint::apex(args.dim, args.kappa);
    let barrier = ball_barrier(pole.clone(), args.radius);
    let sigma = analyzer::sigma_tilde_ball(args.kappa, args.radius);

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let dir = random_unit(&mut rng, &pole);
    let start_arc = rng.random::<f64>() * 0.9 * args.radius;
    let x0 = ProductPoint::hyperbolic(pole.exp(&dir.scale(start_arc)).expect("interior start"));

    let mut opts = MinimizeOptions::new(sigma, args.lambda_target);
    opts.f_lower = Some(-(args.radius * args.radius).ln());
    let (xmin, trace) = match minimize(&barrier, &x0, &opts) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("newton-demo: {e}");
            return EXIT_MATH;
        }
    };
    let final_state = newton_direction(&barrier, &xmin).expect("final state");

    if let Some(path) = &args.trace {
        let rows: Vec<TraceRow> = trace
            .records
            .iter()
            .map(|r| TraceRow {
                iter: r.iter as u64,
                phase: match r.kind {
                    StepKind::Damped => "damped".into(),
                    StepKind::Full => "full".into(),
                    StepKind::None => "done".into(),
                },
                t: 0.0,
                lambda: r.lambda,
                objective: r.value,
                gap_bound: None,
            })
            .collect();
        if let Err(e) = write_or_stdout(Some(path), &render_trace_csv(&rows)) {
            eprintln!("newton-demo: {e}");
            return EXIT_USAGE;
        }
    }

    let pass = final_state.decrement <= args.lambda_target;
    let report = NewtonDemoReport {
        command: "newton-demo".into(),
        kappa: args.kappa,
        radius: args.radius,
        dim: args.dim,
        seed: args.seed,
        sigma,
        lambda_target: args.lambda_target,
        start_arc,
        damped_steps: trace.damped_steps() as u64,
        full_steps: trace.full_steps() as u64,
        final_lambda: final_state.decrement,
        final_value: final_state.value,
        pass,
    };
    println!("{}", to_json_string(&report));
    if pass {
        EXIT_OK
    } else {
        EXIT_MATH
    }
}

// --- meb / oracle-meb -------------------------------------------------------

pub struct MebArgs {
    pub points: PathBuf,
    pub epsilon: f64,
    pub trace: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

pub struct OracleMebArgs {
    pub points: PathBuf,
    pub iters: u64,
    pub out: Option<PathBuf>,
}

fn load_instance(path: &Path, epsilon: f64) -> Result<meb::MebInstance, (i32, String)> {
    let bytes = std::fs::read(path)
        .map_err(|e| (EXIT_USAGE, format!("reading {}: {e}", path.display())))?;
    let pf = formats::parse_points_file(&bytes).map_err(|e| (EXIT_USAGE, e.to_string()))?;
    points_file_to_instance(&pf, epsilon).map_err(|e| (EXIT_USAGE, e.to_string()))
}

fn echo_for(
    command: &str,
    path: &Path,
    instance: &meb::MebInstance,
    epsilon: Option<f64>,
    iters: Option<u64>,
) -> ConfigEcho {
    ConfigEcho {
        command: command.into(),
        points_file: Some(path.display().to_string()),
        model: None,
        kappa: instance.kappa,
        dim: instance.points[0].dim(),
        num_points: instance.points.len(),
        epsilon,
        iters,
    }
}

pub fn run_meb(args: &MebArgs) -> i32 {
    if !(args.epsilon > 0.0) {
        eprintln!("meb: --epsilon must be positive (got {})", args.epsilon);
        return EXIT_USAGE;
    }
    let instance = match load_instance(&args.points, args.epsilon) {
        Ok(i) => i,
        Err((code, msg)) => {
            eprintln!("meb: {msg}");
            return code;
        }
    };
    let (sol, trace) = match meb::solve(&instance) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("meb: {e}");
            return EXIT_MATH;
        }
    };

    if let Some(path) = &args.trace {
        let mut rows = Vec::new();
        for (iter, lambda, objective) in &trace.centering {
            rows.push(TraceRow {
                iter: *iter as u64,
                phase: "center".into(),
                t: 0.0,
                lambda: *lambda,
                objective: *objective,
                gap_bound: None,
            });
        }
        for r in &trace.path {
            rows.push(TraceRow {
                iter: r.iter as u64,
                phase: "path".into(),
                t: r.t,
                lambda: r.lambda,
                objective: r.objective,
                gap_bound: Some(r.gap_bound),
            });
        }
        if let Err(e) = write_or_stdout(Some(path), &render_trace_csv(&rows)) {
            eprintln!("meb: {e}");
            return EXIT_USAGE;
        }
    }

    let result = ResultFile {
        method: "path-following".into(),
        center: sol.center.coords().to_vec(),
        radius: sol.radius,
        s: sol.s,
        gap_certificate: Some(sol.gap_certificate),
        alpha0: sol.alpha0,
        iterations: IterationCounts {
            centering: Some(sol.iterations.centering as u64),
            path: Some(sol.iterations.path as u64),
            oracle: None,
        },
        config_echo: echo_for("meb", &args.points, &instance, Some(args.epsilon), None),
    };
    if let Err(e) = write_or_stdout(args.out.as_deref(), &to_json_string(&result)) {
        eprintln!("meb: {e}");
        return EXIT_USAGE;
    }
    EXIT_OK
}

pub fn run_oracle_meb(args: &OracleMebArgs) -> i32 {
    if args.iters == 0 {
        eprintln!("oracle-meb: --iters must be positive");
        return EXIT_USAGE;
    }
    // Oracle accuracy is controlled by the iteration count, not epsilon; the
    // instance still needs a positive value.
    let instance = match load_instance(&args.points, 1e-6) {
        Ok(i) => i,
        Err((code, msg)) => {
            eprintln!("oracle-meb: {msg}");
            return code;
        }
    };
    let sol = match meb::oracle_solve(&instance, args.iters as usize) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("oracle-meb: {e}");
            return EXIT_MATH;
        }
    };
    let result = ResultFile {
        method: "oracle".into(),
        center: sol.center.coords().to_vec(),
        radius: sol.radius,
        s: sol.s,
        gap_certificate: None,
        alpha0: None,
        iterations: IterationCounts {
            centering: None,
            path: None,
            oracle: Some(args.iters),
        },
        config_echo: echo_for(
            "oracle-meb",
            &args.points,
            &instance,
            None,
            Some(args.iters),
        ),
    };
    if let Err(e) = write_or_stdout(args.out.as_deref(), &to_json_string(&result)) {
        eprintln!("oracle-meb: {e}");
        return EXIT_USAGE;
    }
    EXIT_OK
}

/// Reads `HYPERSC_THREADS`, silently ignoring unparsable values.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("HYPERSC_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
}
