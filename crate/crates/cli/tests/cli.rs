use std::path::PathBuf;
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/curves.json")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_invfactor"))
        .args(args)
        .env_remove("INVFACTOR_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("invfactor-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn scan_passes_on_fixtures() {
    let f = fixtures();
    let o = run(&["scan", "--records", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("counterexamples: 0"));
}

#[test]
fn positivity_and_density_reports() {
    let f = fixtures();
    let f = f.to_str().unwrap();
    let o = run(&["positivity", "--records", f, "--label", "X60d-t1", "--upto", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("POSITIVE"));
    assert!(text.contains("2-coincidence"));
    let o = run(&["density", "--records", f, "--label", "full-2-torsion", "--j", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ZERO"));
    assert!(stdout(&o).contains("coincidences p = 2"));
}

#[test]
fn invalid_records_exit_two() {
    let dir = scratch("bad");
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema_version": 1, "records": [{"label": "bad", "weierstrass": [0, 0, 0, -7, 6],
            "discriminant": 6400, "cm": false, "adelic_level": 4,
            "image_generators": [[1, 0, 0, 2]]}]}"#,
    )
    .unwrap();
    let o = run(&["scan", "--records", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a unit"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_file_and_unknown_label_exit_one() {
    assert_eq!(
        run(&["scan", "--records", "/nonexistent/records.json"]).status.code(),
        Some(1)
    );
    let f = fixtures();
    let o = run(&[
        "density",
        "--records",
        f.to_str().unwrap(),
        "--label",
        "nope",
        "--j",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_exits_three() {
    let f = fixtures();
    let o = run(&[
        "--budget",
        "100",
        "positivity",
        "--records",
        f.to_str().unwrap(),
        "--label",
        "cubic-7",
        "--j",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_output_is_deterministic() {
    let dir = scratch("det");
    let f = fixtures();
    let mut texts = Vec::new();
    for i in 0..2 {
        let out = dir.join(format!("scan{i}.json"));
        let o = run(&[
            "scan",
            "--records",
            f.to_str().unwrap(),
            "--json",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        texts.push(std::fs::read_to_string(&out).unwrap());
    }
    assert_eq!(texts[0], texts[1]);
    assert!(texts[0].contains("\"counterexamples\": 0"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn coincidences_report_predictions() {
    let f = fixtures();
    let o = run(&["coincidences", "--records", f.to_str().unwrap(), "--j-bound", "30"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("predicted    (2, 2)  ab-four-torsion"));
    assert!(!text.contains("DATA ERROR"));
}

#[test]
fn family_subcommand() {
    let o = run(&["family"]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["Hesse", "X187i", "X27h", "X60_twist", "X60d"] {
        assert!(stdout(&o).contains(name));
    }
    let o = run(&["family", "--name", "X187i", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["coefficients"][3], "-51948");
    assert_eq!(v["coefficients"][4], "2107728");
    let o = run(&["family", "--name", "X60_twist", "--t", "1", "--twist", "-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["family", "--name", "X60d", "--t", "1/0"]).status.code(), Some(1));
}
