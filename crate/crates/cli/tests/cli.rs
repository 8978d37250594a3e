use std::process::{Command, Output};

use dimer_resonance::scan::COLUMNS;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dimer-resonance"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("RESONANCE_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

const ASPECT: &[&str] = &["scan-aspect", "--area", "40000", "--steps", "9"];
const ALPHA: &[&str] = &["scan-alpha", "--log-aq", "1.5", "--steps", "7", "--m", "150", "--n", "150", "--exact"];

#[test]
fn output_is_deterministic_across_thread_counts() {
    for args in [ASPECT, ALPHA] {
        let one = run(args, Some("1"));
        let four = run(args, Some("4"));
        let again = run(args, Some("4"));
        assert!(one.status.success());
        assert_eq!(one.stdout, four.stdout);
        assert_eq!(four.stdout, again.stdout);
    }
}

#[test]
fn csv_schema() {
    let out = run(ASPECT, None);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), COLUMNS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    for row in rows {
        assert_eq!(row.split(',').count(), COLUMNS.len());
    }
}

#[test]
fn jsonl_schema() {
    let mut args = ALPHA.to_vec();
    args.extend(["--format", "jsonl"]);
    let out = run(&args, None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let allowed = ["singular", "tie", "near-zero-var", "unreliable-cumulant"];
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        let mut cols = COLUMNS.to_vec();
        keys.sort_unstable();
        cols.sort_unstable();
        assert_eq!(keys, cols);
        let flags = obj["flags"].as_str().unwrap();
        assert!(flags.is_empty() || flags.split(';').all(|f| allowed.contains(&f)));
    }
}

#[test]
fn markers_appear_in_alpha_scan() {
    // log A^q = 1: the -beta spiral hits 1 at alpha = pi/2.
    let out = run(&["scan-alpha", "--log-aq", "1", "--steps", "3", "--alpha-max", "2"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let hit = text
        .lines()
        .skip(1)
        .find(|l| l.split(',').nth(4).unwrap().parse::<f64>().unwrap() == std::f64::consts::FRAC_PI_2)
        .expect("marker row");
    assert!(hit.ends_with("singular"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["scan-aspect", "--weights", "1,2"], None).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], None).status.code(), Some(2));
    assert_eq!(run(&["scan-aspect", "--weights", "1,2,0.5"], None).status.code(), Some(2));
    assert_eq!(run(ASPECT, Some("lots")).status.code(), Some(2));
}

#[test]
fn verify_report_matches_exit_code() {
    let out = run(&["verify", "quick"], None);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 7);
    for c in checks {
        for key in ["id", "name", "measured", "target", "passed"] {
            assert!(c.get(key).is_some());
        }
    }
    let passed = report["passed"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if passed { 0 } else { 1 }));
}

#[test]
fn polylog_eval_prints_value() {
    let out = run(&["polylog-eval", "--order", "-1", "--re", "0.5"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    let re: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((re - 2.0).abs() < 1e-14);
}

#[test]
fn dump_covers_one_by_one() {
    let out = run(&["dump-covers", "--m", "1", "--n", "1"], None);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 0 0 0 0\n0 1 0 1 0\n0 0 1 0 1\n");
}
