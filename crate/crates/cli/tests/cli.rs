use std::fs;

use assert_cmd::Command;

fn btmbqc() -> Command {
    Command::cargo_bin("btmbqc").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = btmbqc().args(args).output().unwrap();
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gadget_verify_all_passes() {
    btmbqc().args(["gadget", "verify", "--all"]).assert().code(0);
}

#[test]
fn host_last_orientation_fails_checks() {
    btmbqc()
        .args(["gadget", "verify", "--basis", "Y", "--orientation", "host-last"])
        .assert()
        .code(1);
}

#[test]
fn usage_errors_exit_2() {
    btmbqc().arg("bogus").assert().code(2);
    btmbqc()
        .args(["distill", "--kind", "T", "--eps0", "0.04", "--no-such-flag"])
        .assert()
        .code(2);
    btmbqc().assert().code(2);
}

#[test]
fn distill_prints_decreasing_sequence() {
    let text = stdout_of(&[
        "distill", "--kind", "T", "--eps0", "0.043", "--levels", "5", "--format", "csv",
    ]);
    let eps: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(eps.len(), 6);
    assert!(eps.windows(2).all(|w| w[1] < w[0]), "{eps:?}");
}

#[test]
fn help_lists_defaults() {
    for sub in [
        vec!["lattice"],
        vec!["protocol", "run"],
        vec!["gadget", "verify"],
        vec!["blindness"],
        vec!["noise", "validate"],
        vec!["decode"],
        vec!["threshold", "sweep"],
        vec!["distill"],
    ] {
        let mut args = sub.clone();
        args.push("--help");
        let text = stdout_of(&args);
        for flag in ["--seed", "--out", "--workers", "--format", "--config"] {
            assert!(text.contains(flag), "{sub:?} help lacks {flag}");
        }
    }
    assert!(stdout_of(&["noise", "rates", "--help"]).contains("[default: 0.0043]"));
}

#[test]
fn noise_rates_json() {
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&["noise", "rates"])).unwrap();
    assert!((v["eps_inject"].as_f64().unwrap() - 0.043).abs() < 1e-12);
    assert!((v["lambda_Z"].as_f64().unwrap() - 1.5767e-2).abs() < 1e-5);
}

#[test]
fn lattice_then_decode() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lat");
    stdout_of(&["lattice", "--size", "3", "--out", out.to_str().unwrap()]);
    let lattice = out.join("lattice.json");
    assert!(lattice.exists());
    let errors = dir.path().join("errors.json");
    fs::write(&errors, "[[2, 3, 5]]").unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "decode",
        "--errors",
        errors.to_str().unwrap(),
        "--lattice",
        lattice.to_str().unwrap(),
    ]))
    .unwrap();
    assert_eq!(v["defects"].as_array().unwrap().len(), 2);
    assert_eq!(v["weight"], 1);
    assert_eq!(v["failed"], false);
    // an edge site is not a face
    fs::write(&errors, "[[1, 0, 0]]").unwrap();
    btmbqc()
        .args([
            "decode",
            "--errors",
            errors.to_str().unwrap(),
            "--lattice",
            lattice.to_str().unwrap(),
        ])
        .assert()
        .code(1);
}

#[test]
fn protocol_run_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "protocol", "run", "--phi", "1,0,2", "--trials", "200", "--seed", "5", "--out", out,
    ];
    let first = stdout_of(&args);
    let jsonl = fs::read_to_string(dir.path().join("transcripts.jsonl")).unwrap();
    assert!(jsonl.lines().all(|l| l.contains("\"type\"")));
    assert!(jsonl.contains("delta_k"));
    assert!(fs::read_to_string(dir.path().join("histogram.csv"))
        .unwrap()
        .starts_with("outcome,count,frequency"));
    assert_eq!(first, stdout_of(&args));
    btmbqc().args(["protocol", "run"]).assert().code(1);
}

#[test]
fn threshold_sweep_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.json");
    fs::write(
        &cfg,
        r#"{"scenario":"tiny","multipliers":[1,1,1],"p_values":[0.002,0.006,0.012],"sizes":[2,3],"trials":100,"seed":3}"#,
    )
    .unwrap();
    let out = dir.path().join("results");
    let run = |workers: &str| {
        stdout_of(&[
            "threshold",
            "sweep",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
            "--workers",
            workers,
        ]);
        fs::read_to_string(out.join("sweep.csv")).unwrap()
    };
    let a = run("1");
    let b = run("3");
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 7);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary[0]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn invalid_sweep_config_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"scenario":"x","multipliers":[1,1,1],"p_values":[0.01],"sizes":[3],"trials":100,"seed":1}"#,
    )
    .unwrap();
    btmbqc()
        .args(["threshold", "sweep", "--config", cfg.to_str().unwrap()])
        .assert()
        .code(1);
}

#[test]
fn noise_loss_reports_model() {
    let v: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "noise",
        "loss",
        "--ploss",
        "0.01",
        "--distance",
        "3",
        "--trials",
        "10000",
    ]))
    .unwrap();
    assert!((v["chain_loss_exact"].as_f64().unwrap() - (1.0 - 0.99f64.powi(3))).abs() < 1e-15);
}
