use std::fs;
use std::process::Command;
use std::sync::Arc;

use weiso::io::{write_mesh, write_problem, write_profile};
use weiso::{run, EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION_FAILED};
use weiso_core::pde::{EllipticProblem, MatrixField};
use weiso_core::spline::Interpolation;
use weiso_core::{StarProfile, TriMesh, WeightParams};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn weiso(args: &str) -> Run {
    let mut argv = vec!["weiso"];
    argv.extend(args.split_whitespace());
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(r: &Run) -> serde_json::Value {
    serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", r.stdout))
}

#[test]
fn constants_prints_closed_forms() {
    let r = weiso("constants --N 2 --alpha 1 --k 1 --l 0");
    assert_eq!(r.code, EXIT_OK);
    let v = json(&r);
    assert!((v["c_rad"].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!((v["kappa"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(v["inputs"]["N"], 2);
}

#[test]
fn missing_required_flag_is_usage_error() {
    let r = weiso("verify-isoperimetric --N 2 --alpha 1 --l 0");
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("--k"), "{}", r.stderr);
}

#[test]
fn unknown_flags_and_commands_are_usage_errors() {
    assert_eq!(weiso("constants --N 2 --alpha 1 --bogus 3").code, EXIT_USAGE);
    assert_eq!(weiso("frobnicate").code, EXIT_USAGE);
    assert_eq!(weiso("").code, EXIT_USAGE);
    assert_eq!(weiso("constants --N two --alpha 1").code, EXIT_USAGE);
    assert_eq!(weiso("constants --N 2 --alpha 1 --format xml").code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let r = weiso("--help");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("verify-isoperimetric"));
    assert_eq!(weiso("sweep --help").code, EXIT_OK);
}

#[test]
fn invalid_parameters_are_input_errors() {
    assert_eq!(weiso("constants --N 1 --alpha 1").code, EXIT_USAGE);
    assert_eq!(weiso("measure --N 2 --l 0 --alpha -1").code, EXIT_USAGE);
    assert_eq!(weiso("verify-ps --N 3 --k -1 --l -2 --alpha 1").code, EXIT_USAGE);
    assert_eq!(weiso("rearrange --l 0 --alpha 1 --function nope").code, EXIT_USAGE);
    assert_eq!(weiso("verify-isoperimetric --N 2 --k 1 --l 0 --alpha 1 --threads 0").code, EXIT_USAGE);
}

#[test]
fn verify_isoperimetric_passes() {
    let r = weiso("verify-isoperimetric --N 2 --alpha 1 --k 1 --l 0 --samples 200 --seed 7");
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["case_count"], 203);
    assert_eq!(v["cases"].as_array().unwrap().len(), 203);
}

#[test]
fn verification_failure_exits_one() {
    // a negative tolerance turns half-ball equality into a failure
    let r = weiso("verify-isoperimetric --N 2 --alpha 1 --k 2 --l 0 --samples 5 --tolerance=-1e-3");
    assert_eq!(r.code, EXIT_VERIFICATION_FAILED);
    assert_eq!(json(&r)["verdict"], "fail");
    let r = weiso("verify-gauss --N 2 --l 0 --alpha 1 --samples 5 --tolerance=-1e-3");
    assert_eq!(r.code, EXIT_VERIFICATION_FAILED);
    let r = weiso("verify-hl --N 2 --l 1 --l-prime 0 --alpha 1 --samples 5 --tolerance=-1e-3");
    assert_eq!(r.code, EXIT_VERIFICATION_FAILED);
    let r = weiso("sweep --N 2 --k 1 --l 0 --alpha 1 --samples 3 --tolerance=-1e-3");
    assert_eq!(r.code, EXIT_VERIFICATION_FAILED);
}

#[test]
fn exploratory_regime_does_not_fail() {
    let r = weiso("verify-isoperimetric --N 2 --alpha 1 --k 0 --l 0 --samples 20");
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(json(&r)["exploratory"], true);
}

#[test]
fn lemma_commands_pass() {
    let r = weiso("verify-gauss --N 3 --l 0.5 --alpha 1 --samples 20 --seed 3");
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    assert!(json(&r)["half_ball_max_abs_slack"].as_f64().unwrap() < 1e-9);
    let r = weiso("verify-hl --N 2 --l 0 --l-prime -1 --alpha 1 --samples 20");
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(weiso("verify-hl --N 2 --l 0 --l-prime 1 --alpha 1").code, EXIT_USAGE);
    assert_eq!(weiso("verify-hl --N 2 --l 0 --alpha 1").code, EXIT_USAGE);
}

#[test]
fn measure_perimeter_quotient() {
    let v = json(&weiso("measure --N 2 --l 0 --alpha 1"));
    assert!((v["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    let v = json(&weiso("perimeter --N 2 --k 0 --alpha 1 --radius 2"));
    assert!((v["value"].as_f64().unwrap() - 8.0).abs() < 1e-10);
    let v = json(&weiso("quotient --N 2 --k 1 --l 0 --alpha 1"));
    assert_eq!(v["quotient"], "R");
    assert!(v["slack"].as_f64().unwrap().abs() < 1e-9);
    let v = json(&weiso("quotient --N 2 --k 1 --l 0 --alpha 1 --function paraboloid --h 0.1"));
    assert_eq!(v["quotient"], "Q");
}

#[test]
fn rearrange_reports_profile() {
    let r = weiso("rearrange --l 0 --alpha 1 --h 0.1 --format csv");
    assert_eq!(r.code, EXIT_OK);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("s,u_star"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert!(rows.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 >= w[1].1));
    let total = TriMesh::half_disc(1.0, 0.1).unwrap().measure(0.0, 1.0);
    assert_eq!(rows.last().unwrap().1, 0.0);
    assert!((rows.last().unwrap().0 - total).abs() < 1e-12);
}

#[test]
fn pde_commands() {
    let r = weiso("solve --N 2 --k -1 --l -2 --alpha 1 --h 0.1 --format csv");
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("node_id,x1,x2,u\n"));
    let r = weiso("compare --N 2 --k -1 --l -2 --alpha 1 --h 0.1 --rhs one_plus_x1");
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["gradient_q_table"].as_array().unwrap().len(), 3);
    assert_eq!(weiso("solve --N 2 --k -1 --l -2 --alpha 1 --rhs nope").code, EXIT_USAGE);
}

#[test]
fn polya_szego_and_poincare() {
    let r = weiso("verify-ps --N 2 --k -1 --l -2 --alpha 1 --h 0.1");
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(json(&r)["cases"].as_array().unwrap().len(), 11);
    let v = json(&weiso("poincare --N 2 --k -1 --l -2 --alpha 1"));
    let c = v["constant"].as_f64().unwrap();
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((c * pi2 - 1.0).abs() < 1e-6);
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let a = weiso("verify-isoperimetric --N 3 --alpha 0.5 --k 0.5 --l -0.5 --samples 50 --seed 11 --threads 1");
    let b = weiso("verify-isoperimetric --N 3 --alpha 0.5 --k 0.5 --l -0.5 --samples 50 --seed 11 --threads 4");
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let c = weiso("verify-isoperimetric --N 3 --alpha 0.5 --k 0.5 --l -0.5 --samples 50 --seed 12");
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# base\nN = 2\nk = 2\nl = 0\nalpha = 1\nsamples = 4\n").unwrap();
    let r = weiso(&format!("verify-isoperimetric --config {} --k 1", cfg.display()));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let v = json(&r);
    assert_eq!(v["inputs"]["k"], 1.0);
    assert_eq!(v["inputs"]["samples"], 4);
    assert_eq!(v["case_count"], 7);

    fs::write(&cfg, "N = 2\nk = 1\ncolour = blue\n").unwrap();
    let r = weiso(&format!("constants --config {}", cfg.display()));
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let r = weiso("constants --config /nonexistent/run.cfg");
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn out_directory_receives_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    let r = weiso(&format!("constants --N 3 --alpha 1 --format csv --out {}", out.display()));
    assert_eq!(r.code, EXIT_OK);
    let text = fs::read_to_string(out.join("constants.csv")).unwrap();
    assert!(text.starts_with("quantity,value\nkappa,"));
}

#[test]
fn profile_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    let half = StarProfile::from_fn(2, 17, Interpolation::NaturalCubic, |_| 1.0).unwrap();
    fs::write(&path, write_profile(&half)).unwrap();
    let r = weiso(&format!("quotient --N 2 --k 1 --l 0 --alpha 1 --profile {}", path.display()));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(json(&r)["slack"].as_f64().unwrap().abs() < 1e-9);
    let r = weiso(&format!("verify-gauss --N 2 --l 0 --alpha 1 --profile {}", path.display()));
    assert_eq!(r.code, EXIT_OK);

    fs::write(&path, "2 3\n0 1\n1.5 -2\n3.14159 1\n").unwrap();
    let r = weiso(&format!("measure --N 2 --l 0 --alpha 1 --profile {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("line 3"), "{}", r.stderr);
    let r = weiso(&format!("measure --N 3 --l 0 --alpha 1 --profile {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn mesh_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.mesh");
    let mesh = TriMesh::half_disc(1.0, 0.1).unwrap();
    let vals: Vec<f64> = mesh.nodes().iter().map(|p| 1.0 - p[0] * p[0] - p[1] * p[1]).collect();
    fs::write(&path, write_mesh(&mesh, Some(&vals))).unwrap();
    let from_file = weiso(&format!("rearrange --l 0 --alpha 1 --mesh {}", path.display()));
    assert_eq!(from_file.code, EXIT_OK, "{}", from_file.stderr);
    let r = weiso(&format!("verify-ps --N 2 --k -1 --l -2 --alpha 1 --mesh {}", path.display()));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);

    fs::write(&path, write_mesh(&mesh, None)).unwrap();
    let r = weiso(&format!("rearrange --l 0 --alpha 1 --mesh {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("VALUES"));

    fs::write(&path, "NODES\n1 0 0\n2 1 0\n3 0 1\nELEMENTS\n1 1 2 3\nVALUES\n1 0.5\n2 x\n").unwrap();
    let r = weiso(&format!("rearrange --l 0 --alpha 1 --mesh {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("line 9"), "{}", r.stderr);

    fs::write(&path, "NODES\n1 0 -0.5\n2 1 0\n3 0 1\nELEMENTS\n1 1 2 3\n").unwrap();
    let r = weiso(&format!("rearrange --l 0 --alpha 1 --mesh {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn problem_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.prob");
    let mesh = Arc::new(TriMesh::half_disc(1.0, 0.1).unwrap());
    let rhs = mesh.nodes().iter().map(|p| 1.0 + p[0]).collect();
    let params = WeightParams::new(2, -1.0, -2.0, 1.0).unwrap();
    let prob = EllipticProblem::new(mesh, params, MatrixField::Diagonal(2.0, 1.0), 2.0, rhs).unwrap();
    fs::write(&path, write_problem(&prob)).unwrap();
    let r = weiso(&format!("compare --problem {}", path.display()));
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(json(&r)["inputs"]["k"], -1.0);
    let r = weiso(&format!("solve --problem {} --k 3", path.display()));
    assert_eq!(r.code, EXIT_USAGE);

    let text = write_problem(&prob).replace("diag 2.0 1.0", "diag 0.5 1.0");
    fs::write(&path, text).unwrap();
    let r = weiso(&format!("solve --problem {}", path.display()));
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("ellipticity"), "{}", r.stderr);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_weiso");
    let ok = Command::new(bin).args(["constants", "--N", "2", "--alpha", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["verify-isoperimetric", "--N", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let env = Command::new(bin)
        .args(["constants", "--N", "2", "--alpha", "1"])
        .env("WISO_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}
