use std::process::{Command, Output};

use fmzv::cache::BernoulliRecord;
use fmzv::identities::VerificationReport;

fn fmzv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fmzv"))
        .args(args)
        .env_remove("FMZV_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn eval_json_lists_every_prime() {
    let o = fmzv(&["--format", "json", "eval", "--word", "2,1", "--primes", "5..13"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let primes: Vec<u64> = v["residues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!(primes, [5, 7, 11, 13]);
    assert_eq!(v["residues"][1]["value"], "3");
}

#[test]
fn sum_reports_threshold() {
    let o = fmzv(&["sum", "--k", "4", "--n", "2", "--i", "1", "--primes", "5..11"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("p=5 ") && lines[0].ends_with("below threshold"), "{out}");
    assert!(lines[1].starts_with("p=7 ") && lines[1].ends_with(" pass"), "{out}");
    assert!(lines[2].contains("lhs=0 rhs=0 pass"), "{out}");
}

#[test]
fn sum_csv_columns() {
    let o = fmzv(&["--format", "csv", "sum", "--k", "5", "--n", "3", "--i", "2", "--star", "--primes", "7..13"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["p", "k", "n", "i", "star", "lhs", "rhs", "pass"]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][7], "");
    assert_eq!(&rows[1][7], "true");
    assert_eq!(rows[1][5], rows[1][6]);
}

#[test]
fn verify_json_round_trips() {
    let o = fmzv(&[
        "--format", "json", "verify", "--suite", "main-theorem,recurrence", "--weight-max", "6",
        "--primes", "11..97",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: VerificationReport = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report.all_passed());
    assert!(report.identities.contains_key("main-theorem"));
    assert!(report.identities.contains_key("recurrence"));
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, stdout(&o));
}

#[test]
fn verify_plain_summary() {
    let o = fmzv(&["verify", "--suite", "depth-two", "--weight-max", "5", "--primes", "2..31"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("depth-two"), "{out}");
    assert!(out.contains(" 0 failed"), "{out}");
}

#[test]
fn bernoulli_uses_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_fmzv"))
        .args(["--format", "json", "bernoulli", "--prime", "7", "--max", "4"])
        .env("FMZV_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let record: BernoulliRecord = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(record.values, [1, 4, 6, 0, 3]);
    let stored = std::fs::read_to_string(dir.path().join("bernoulli-7.json")).unwrap();
    let cached: BernoulliRecord = serde_json::from_str(&stored).unwrap();
    assert_eq!(cached, record);
}

#[test]
fn stuffle_and_expand() {
    let o = fmzv(&["stuffle", "--left", "1", "--right", "2"]);
    assert_eq!(stdout(&o), "+1 (1,2)\n+1 (2,1)\n+1 (3)\n");
    let o = fmzv(&["expand", "--word", "1,1", "--direction", "star"]);
    assert_eq!(stdout(&o), "+1 (1,1)\n-1 (2)\n");
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["eval", "--word", "x", "--primes", "7..7"][..],
        &["eval", "--word", "2,1", "--primes", "0..7"],
        &["sum", "--k", "3", "--n", "3", "--i", "1", "--primes", "7..7"],
        &["bernoulli", "--prime", "7", "--max", "9"],
        &["verify", "--primes", "7..11"],
    ] {
        let o = fmzv(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}
