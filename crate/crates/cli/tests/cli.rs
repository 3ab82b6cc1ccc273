use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_td-casimir"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Value of `key=` on the `RESULT` line.
fn result_field(o: &Output, key: &str) -> String {
    let out = stdout(o);
    let line = out
        .lines()
        .find(|l| l.starts_with("RESULT "))
        .unwrap_or_else(|| panic!("no RESULT line in:\n{out}"));
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no {key} in {line}"))
        .to_string()
}

fn result_f64(o: &Output, key: &str) -> f64 {
    result_field(o, key).parse().unwrap()
}

#[test]
fn casimir_pressure_at_one_micron() {
    let o = run(&["casimir", "--l-nm", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let p = result_f64(&o, "pressure_pa");
    assert!((p - 1.300_125_772e-3).abs() < 1e-11, "{p}");
}

#[test]
fn nonlocal_isotropic_below_local() {
    let o = run(&["iso-nonlocal", "--l-nm", "1000", "--d-nm", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let nl = result_f64(&o, "ratio");
    let local = result_f64(&o, "lifshitz_local_ratio");
    assert!(0.0 < nl && nl < local, "{nl} {local}");
    assert_eq!(result_field(&o, "validity"), "valid");
}

#[test]
fn json_point_on_stdout() {
    let o = run(&["--format", "json", "lifshitz-local", "--l-nm", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let ratio = v["result"]["ratio_to_casimir"].as_f64().unwrap();
    assert!((ratio - 0.920_055).abs() < 1e-5, "{ratio}");
}

#[test]
fn crossover_exit_codes() {
    let found = run(&[
        "crossover",
        "--l-nm",
        "1000",
        "--eps-b",
        "10",
        "--d-from",
        "4",
        "--d-to",
        "100",
    ]);
    assert_eq!(found.status.code(), Some(0), "{}", stdout(&found));
    let d = result_f64(&found, "crossover_d_nm");
    assert!(4.0 < d && d < 100.0);
    assert_eq!(result_field(&found, "status"), "found");

    let missing = run(&[
        "crossover",
        "--l-nm",
        "1000",
        "--eps-b",
        "10",
        "--d-from",
        "4",
        "--d-to",
        "10",
    ]);
    assert_eq!(missing.status.code(), Some(1));
    assert_eq!(result_field(&missing, "status"), "not_found");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["casimir", "--l-nm", "-5"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    let inverted = run(&[
        "crossover",
        "--l-nm",
        "1000",
        "--d-from",
        "50",
        "--d-to",
        "10",
    ]);
    assert_eq!(inverted.status.code(), Some(2));
    let bad_axis = run(&[
        "sweep",
        "--quantity",
        "casimir",
        "--axis",
        "l=100:10:x",
        "--out",
        "/tmp/unused.csv",
    ]);
    assert_eq!(bad_axis.status.code(), Some(2));
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "l-nm = 500\nd_nm = 20\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let from_file = run(&["--config", cfg, "casimir"]);
    assert_eq!(from_file.status.code(), Some(0));
    let p500 = result_f64(&from_file, "pressure_pa");
    assert!((p500 / 1.300_125_772e-3 - 16.0).abs() < 1e-6);

    let overridden = run(&["--config", cfg, "casimir", "--l-nm", "1000"]);
    let p1000 = result_f64(&overridden, "pressure_pa");
    assert!((p1000 - 1.300_125_772e-3).abs() < 1e-11);

    std::fs::write(dir.path().join("bad.toml"), "separation = 3\n").unwrap();
    let bad = run(&[
        "--config",
        dir.path().join("bad.toml").to_str().unwrap(),
        "casimir",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

fn sweep_to(path: &Path) -> Output {
    run(&[
        "sweep",
        "--quantity",
        "iso-nonlocal",
        "--d-nm",
        "10",
        "--axis",
        "l=100:2000:5:log",
        "--out",
        path.to_str().unwrap(),
    ])
}

#[test]
fn sweep_is_deterministic_and_has_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert_eq!(sweep_to(&a).status.code(), Some(0));
    assert_eq!(sweep_to(&b).status.code(), Some(0));
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());

    let text = String::from_utf8(bytes_a).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "l_nm");
    assert!(header.contains(&"ratio"));
    assert_eq!(lines.count(), 5);

    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("a.csv.manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["quantity"], "iso_nonlocal");
    assert_eq!(manifest["rows"], 5);
    assert_eq!(manifest["failed_rows"], 0);
}

#[test]
fn unwritable_output_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing-dir").join("out.csv");
    let o = sweep_to(&path);
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("missing-dir"), "{err}");
}
