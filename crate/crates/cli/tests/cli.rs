use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasecat"))
}

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).env("PHASECAT_THREADS", "2").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_gaussian_passes_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("gaussian4.toml");
    let out = dir.path().to_str().unwrap();
    let o = run(&["verify", cfg.to_str().unwrap(), "--trials", "4", "--seed", "7", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let lines = std::fs::read_to_string(dir.path().join("verdicts.jsonl")).unwrap();
    assert!(lines.lines().count() > 10);
    for line in lines.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["result"], "pass");
        assert_eq!(v["seed"], 7);
    }
    assert!(std::fs::read_to_string(dir.path().join("summary.md")).unwrap().contains("verdicts pass"));

    let report = run(&["report", dir.path().join("verdicts.jsonl").to_str().unwrap()]);
    assert_eq!(report.status.code(), Some(0));
}

#[test]
fn verify_trivial_involution_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("trivial-involution.toml");
    let o = run(&["verify", cfg.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let lines = std::fs::read_to_string(dir.path().join("verdicts.jsonl")).unwrap();
    let failed: Vec<serde_json::Value> = lines
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["result"] == "fail")
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["law"], "positive-free");
    assert_eq!(failed[0]["counterexample"]["witness"]["entries"], serde_json::json!(["0", "i", "1", "0"]));

    let report = run(&["report", dir.path().join("verdicts.jsonl").to_str().unwrap()]);
    assert_eq!(report.status.code(), Some(1));
}

#[test]
fn usage_and_config_errors_exit_2() {
    assert_eq!(run(&["verify", "/definitely/missing.toml"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "ring = \"gaussian\"\ncolour = \"blue\"\n").unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "phases = [\"1\", \"2\"]\n").unwrap();
    assert_eq!(run(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
    let cfg = config("gaussian4.toml");
    assert_eq!(run(&["verify", cfg.to_str().unwrap(), "--dims-max", "9"]).status.code(), Some(2));
}

#[test]
fn gp_prints_corner_and_initial_object() {
    let cfg = config("gaussian4.toml");
    let o = run(&["gp", cfg.to_str().unwrap(), "--dims", "2,2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("coproduct 2^ + 2^: apex 5"), "{text}");
    assert!(text.contains("corner map c_{2^,2^}: 9x5"), "{text}");

    let o = run(&["gp", cfg.to_str().unwrap(), "--dims", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("is an isomorphism: true"));

    let o = run(&["gp", cfg.to_str().unwrap(), "--dims", "1,1,1", "--assoc"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("pentagon for (1^, 1^, 1^, 1^)"));
    assert!(text.contains("paths agree: true"));
}

#[test]
fn oracle_tables_and_size_guard() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = run(&["oracle", config("z2-oracle.toml").to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("phase counts"));
    assert!(text.contains("G = Z2"));

    let o = run(&["oracle", config("trivial-group.toml").to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    // with the trivial group every phase set is {id}
    for row in stdout(&o).lines().filter(|l| l.starts_with("| ") && l.ends_with(" |")) {
        let cells: Vec<&str> = row.split('|').map(str::trim).collect();
        if cells[1].parse::<usize>().is_ok() {
            assert!(cells[7].split_whitespace().all(|c| c == "1"), "{row}");
        }
    }

    let o = run(&["oracle", config("oversized.toml").to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("size limit"));

    let o = run(&["oracle", config("gaussian4.toml").to_str().unwrap(), "--out", out]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn finite_field_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", config("f3.toml").to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("projective-count"));
}
