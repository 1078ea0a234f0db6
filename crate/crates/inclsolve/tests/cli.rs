//! End-to-end tests of the `inclsolve` binary: exit codes, output
//! determinism, config-file/flag precedence, and the tolerance env var.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_inclsolve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code present")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn list_problems_and_presets() {
    let out = run(&["list-problems"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for id in ["rotation2", "bilinear-box-4", "cohypo-0.05", "strong-0.5-2"] {
        assert!(text.contains(id), "list-problems missing {id}");
    }

    let out = run(&["list-presets"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for id in ["eg-equation", "gr-plus-inclusion", "apeg-cohypo"] {
        assert!(text.contains(id), "list-presets missing {id}");
    }
}

#[test]
fn run_checked_in_window_exits_zero() {
    let out = run(&[
        "run", "--problem", "rotation2", "--method", "eg", "--eta", "0.5", "--iters", "200",
        "--check",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("all certificates pass"));
}

#[test]
fn csv_output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = run(&[
            "run", "--problem", "bilinear-box-4", "--method", "rfbs", "--eta", "0.3", "--iters",
            "100", "--seed", "3", "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b, "repeated runs must produce identical CSV bytes");
    let text = String::from_utf8(bytes_a).unwrap();
    assert!(text.starts_with("k,res_norm,fb_res,dist,potential,best_res,cert_pass\n"));
    assert_eq!(text.lines().count(), 102, "header + 101 rows");
}

#[test]
fn plot_out_writes_long_format() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("plot.csv");
    let out = run(&[
        "run", "--problem", "bilinear-box-4", "--method", "eag", "--iters", "50", "--plot-out",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&plot).unwrap();
    assert!(text.starts_with("run_id,k,metric,value\n"));
    assert!(text.contains("bilinear-box-4-eag-0,0,res_norm,"));
    assert!(text.contains(",ref_bound,"));
}

#[test]
fn out_of_window_eta_is_usage_error_unless_overridden() {
    let out = run(&[
        "run", "--problem", "rotation2", "--method", "eg", "--eta", "1.5", "--iters", "50",
    ]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside the admissible window"));

    let out = run(&[
        "run", "--problem", "rotation2", "--method", "eg", "--eta", "1.5", "--iters", "50",
        "--override-window",
    ]);
    assert_eq!(code(&out), 0, "override must run (with checking disabled)");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["run", "--problem", "nosuch", "--method", "eg"])), 2);
    assert_eq!(code(&run(&["run", "--problem", "rotation2", "--method", "nosuch"])), 2);
    assert_eq!(code(&run(&["run", "--problem", "rotation2", "--method", "eg", "--eta", "fast"])), 2);
    assert_eq!(code(&run(&["verify", "--preset", "nosuch"])), 2);
    assert_eq!(code(&run(&["run"])), 2, "run without a problem is a usage error");
}

#[test]
fn divergent_forward_run_exits_three() {
    let out = run(&[
        "run", "--problem", "rotation2", "--method", "fw", "--eta", "0.5", "--iters", "7000",
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-finite"));
}

#[test]
fn certificate_failure_exits_one() {
    // With the tolerance collapsed to (effectively) zero, roundoff-level
    // slack trips a certificate, exercising the verification exit path and
    // the env-var override together.
    let out = bin()
        .args(["run", "--problem", "rotation2", "--method", "eg", "--eta", "0.5", "--iters",
               "200", "--check"])
        .env("INCLSOLVE_RTOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn config_file_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.json");
    std::fs::write(
        &cfg,
        r#"{"problem_id": "rotation2", "method": "eg", "eta": "auto", "iterations": 10}"#,
    )
    .unwrap();
    let out = run(&["run", "--config", cfg.to_str().unwrap(), "--iters", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("5 iterations"), "CLI --iters must override the config file");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"problem_id": "rotation2", "stepsize": 0.5}"#).unwrap();
    assert_eq!(code(&run(&["run", "--config", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["run", "--config", "/nonexistent/exp.json"])), 2);
}

#[test]
fn verify_runs_every_preset() {
    // Full check of each preset id (list-presets is the source of truth).
    let out = run(&["list-presets"]);
    assert_eq!(code(&out), 0);
    let ids: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .filter_map(|l| l.split_whitespace().next().map(str::to_string))
        .collect();
    assert_eq!(ids.len(), 15);
    for id in ids {
        let out = run(&["verify", "--preset", &id]);
        assert_eq!(
            code(&out),
            0,
            "preset {id} failed: {}{}",
            stdout(&out),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(stdout(&out).contains("all certificates pass"), "preset {id}");
    }
}

#[test]
fn run_reports_not_applicable_families() {
    // Out-of-regime hypotheses are reported, never silently skipped: the
    // anchored eag statements require monotonicity, which cohypo-0.05 lacks,
    // while its stepsize window is still feasible.
    let out = run(&[
        "run", "--problem", "cohypo-0.05", "--method", "eag", "--eta", "0.5", "--iters", "20",
        "--check",
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("not applicable"));
}
