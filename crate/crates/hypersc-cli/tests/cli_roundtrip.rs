//! End-to-end tests of the binary: exit codes, file round-trips, trace
//! invariants, and error messages naming offending point indices.

use std::path::PathBuf;
use std::process::{Command, Output};

use hypersc_cli::formats::{parse_result_file, parse_trace_csv, validate_trace};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hypersc"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn hypersc")
}

fn write_points(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, content).unwrap();
    p
}

const FIVE_POINTS: &str = r#"{"model":"tangent","kappa":1.0,"dim":2,"points":[[0.0,0.0],[0.9,0.2],[-0.4,0.7],[0.3,-0.8],[-0.6,-0.3]]}"#;

#[test]
fn check_derivatives_passes_and_fails_by_tolerance() {
    let out = run(&[
        "check-derivatives",
        "--dim",
        "2",
        "--samples",
        "200",
        "--seed",
        "7",
        "--tol",
        "1e-6",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));

    // A tolerance below the finite-difference noise floor must fail.
    let out = run(&[
        "check-derivatives",
        "--dim",
        "2",
        "--samples",
        "200",
        "--seed",
        "7",
        "--tol",
        "1e-15",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // dim 1 is a usage error.
    let out = run(&["check-derivatives", "--dim", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn meb_writes_result_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let points = write_points(&dir, "pts.json", FIVE_POINTS);
    let out_path = dir.path().join("result.json");
    let trace_path = dir.path().join("trace.csv");

    let out = run(&[
        "meb",
        "--points",
        points.to_str().unwrap(),
        "--epsilon",
        "1e-4",
        "--out",
        out_path.to_str().unwrap(),
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let result = parse_result_file(&std::fs::read(&out_path).unwrap()).unwrap();
    assert_eq!(result.method, "path-following");
    assert!((result.radius - result.s.sqrt()).abs() <= 1e-12);
    assert!(result.gap_certificate.unwrap() <= 1e-4);

    let rows = parse_trace_csv(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    validate_trace(&rows).unwrap();
    assert!(rows.iter().any(|r| r.phase == "center"));
    assert!(rows.iter().any(|r| r.phase == "path"));
}

#[test]
fn meb_exit_codes_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();

    // Missing file.
    let out = run(&[
        "meb",
        "--points",
        dir.path().join("absent.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Malformed JSON.
    let p = write_points(&dir, "bad.json", "{not json");
    let out = run(&["meb", "--points", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    // Off-sheet point: the message names the index.
    let p = write_points(
        &dir,
        "offsheet.json",
        r#"{"model":"hyperboloid","kappa":1.0,"dim":2,"points":[[1.0,0.0,0.0],[1.0,0.7,0.0]]}"#,
    );
    let out = run(&["meb", "--points", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("point 1"));

    // Bad epsilon.
    let p = write_points(&dir, "ok.json", FIVE_POINTS);
    let out = run(&["meb", "--points", p.to_str().unwrap(), "--epsilon", "-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_meb_matches_path_following() {
    let dir = tempfile::tempdir().unwrap();
    let points = write_points(&dir, "pts.json", FIVE_POINTS);
    let ipm_path = dir.path().join("ipm.json");
    let orc_path = dir.path().join("oracle.json");

    let out = run(&[
        "meb",
        "--points",
        points.to_str().unwrap(),
        "--epsilon",
        "1e-5",
        "--out",
        ipm_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = run(&[
        "oracle-meb",
        "--points",
        points.to_str().unwrap(),
        "--iters",
        "300000",
        "--out",
        orc_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let ipm = parse_result_file(&std::fs::read(&ipm_path).unwrap()).unwrap();
    let orc = parse_result_file(&std::fs::read(&orc_path).unwrap()).unwrap();
    assert_eq!(orc.method, "oracle");
    assert!((ipm.radius - orc.radius).abs() <= 1e-3);

    // Single point: radius zero.
    let single = write_points(
        &dir,
        "one.json",
        r#"{"model":"tangent","kappa":1.0,"dim":2,"points":[[0.4,-0.2]]}"#,
    );
    let out = run(&[
        "oracle-meb",
        "--points",
        single.to_str().unwrap(),
        "--iters",
        "10",
        "--out",
        orc_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let orc = parse_result_file(&std::fs::read(&orc_path).unwrap()).unwrap();
    assert_eq!(orc.radius, 0.0);
}

#[test]
fn certify_sc_exit_codes() {
    let out = run(&[
        "certify-sc",
        "--field",
        "sqdist",
        "--samples",
        "3000",
        "--seed",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert!(report["report"]["max_sc_ratio"].as_f64().unwrap() <= 0.5 + 1e-9);

    // Unknown field value: clap usage error.
    let out = run(&["certify-sc", "--field", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_sc_ball_barrier_radius_sweep_and_meb_barrier() {
    // A radius list triggers the tightness scan.
    let out = run(&[
        "certify-sc",
        "--field",
        "ball-barrier",
        "--radius",
        "10,20,40",
        "--samples",
        "2000",
        "--seed",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let scan = report["tightness_scan"].as_array().unwrap();
    assert_eq!(scan.len(), 3);
    let r20 = scan[1][1].as_f64().unwrap();
    let r40 = scan[2][1].as_f64().unwrap();
    assert!(r40 / r20 >= 1.6);

    // The product-manifold barrier of the built-in instance passes all
    // certification checks simultaneously.
    let out = run(&[
        "certify-sc",
        "--field",
        "meb-barrier",
        "--samples",
        "1600",
        "--seed",
        "5",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));
    assert!(report["report"]["max_sc_ratio"].as_f64().unwrap() <= 1.0 + 1e-9);
    let worst = report["bounds"]["barrier_worst_ratio"].as_f64().unwrap();
    let nu = report["bounds"]["barrier_nu"].as_f64().unwrap();
    assert!(worst <= nu + 1e-9);
}

#[test]
fn newton_demo_runs_and_traces() {
    let dir = tempfile::tempdir().unwrap();
    let trace_path = dir.path().join("newton.csv");
    let out = run(&[
        "newton-demo",
        "--radius",
        "5",
        "--seed",
        "3",
        "--trace",
        trace_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["final_lambda"].as_f64().unwrap() <= 1e-10);
    let rows = parse_trace_csv(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert!(!rows.is_empty());
}

#[test]
fn bundled_instance_matches_golden_oracle() {
    // The committed golden result was produced by `oracle-meb --iters 1000000`
    // on the bundled five-point instance.
    let dir = env!("CARGO_MANIFEST_DIR");
    let points = format!("{dir}/tests/data/five_points.json");
    let golden = parse_result_file(
        &std::fs::read(format!("{dir}/tests/data/five_points_oracle.json")).unwrap(),
    )
    .unwrap();

    let out_dir = tempfile::tempdir().unwrap();
    let out_path = out_dir.path().join("result.json");
    let out = run(&[
        "meb",
        "--points",
        &points,
        "--epsilon",
        "1e-5",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let result = parse_result_file(&std::fs::read(&out_path).unwrap()).unwrap();
    assert!(
        (result.radius - golden.radius).abs() <= 1e-3,
        "radius {} vs golden {}",
        result.radius,
        golden.radius
    );
    assert!(result.gap_certificate.unwrap() <= 1e-5);
}

#[test]
fn tangent_and_hyperboloid_models_agree() {
    // The same instance expressed in both input models solves identically.
    let dir = tempfile::tempdir().unwrap();
    let tangent = write_points(
        &dir,
        "tan.json",
        r#"{"model":"tangent","kappa":1.0,"dim":2,"points":[[1.0,0.0],[-1.0,0.0]]}"#,
    );
    let c1 = 1.0f64.cosh();
    let s1 = 1.0f64.sinh();
    let hyper = write_points(
        &dir,
        "hyp.json",
        &format!(
            r#"{{"model":"hyperboloid","kappa":1.0,"dim":2,"points":[[{c1:.17e},{s1:.17e},0.0],[{c1:.17e},{:.17e},0.0]]}}"#,
            -s1
        ),
    );
    let out_t = dir.path().join("t.json");
    let out_h = dir.path().join("h.json");
    assert_eq!(
        run(&[
            "meb",
            "--points",
            tangent.to_str().unwrap(),
            "--epsilon",
            "1e-4",
            "--out",
            out_t.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        run(&[
            "meb",
            "--points",
            hyper.to_str().unwrap(),
            "--epsilon",
            "1e-4",
            "--out",
            out_h.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    let rt = parse_result_file(&std::fs::read(&out_t).unwrap()).unwrap();
    let rh = parse_result_file(&std::fs::read(&out_h).unwrap()).unwrap();
    assert!((rt.radius - rh.radius).abs() <= 1e-9);
    assert!((rt.radius - 1.0).abs() <= 1e-4);
}
