//! End-to-end tests of the binary: exit codes, frozen output bytes,
//! determinism, and the documented examples.

use std::path::Path;
use std::process::{Command, Output};

use qabacus::PulseSchedule;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qabacus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    for (args, needle) in [
        (vec!["spectrum", "--theta", "banana"], "--theta"),
        (vec!["spectrum", "--theta", "0", "--bogus"], "--bogus"),
        (vec!["compile", "--target", "Q"], "--target"),
        (vec!["gate", "--mu", "1"], "--nu"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{args:?} stderr: {err}");
    }
}

#[test]
fn missing_schedule_file_is_a_computational_error() {
    let out = run(&["verify", "--schedule", "/nonexistent/schedule.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn neumann_ladder_prints_exact_csv() {
    let text = stdout(&["spectrum", "--theta", "0", "--levels", "3", "--omega", "1"]);
    assert_eq!(
        text,
        "n,energy,eta\n\
         0,5.0000000000000000e-1,0.0000000000000000e0\n\
         1,2.5000000000000000e0,0.0000000000000000e0\n\
         2,4.5000000000000000e0,0.0000000000000000e0\n"
    );
}

#[test]
fn swap_gate_json_is_the_exchange_matrix() {
    let text = stdout(&["gate", "--mu", "3.141592653589793", "--nu", "0"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let m = v["matrix"].as_array().unwrap();
    let entry = |i: usize, j: usize| {
        let p = m[i].as_array().unwrap()[j].as_array().unwrap();
        (p[0].as_f64().unwrap(), p[1].as_f64().unwrap())
    };
    for (got, want) in [
        (entry(0, 0), 0.0),
        (entry(0, 1), 1.0),
        (entry(1, 0), 1.0),
        (entry(1, 1), 0.0),
    ] {
        assert!((got.0 - want).abs() < 1e-9 && got.1.abs() < 1e-9);
    }
    assert!(v["leakage"].as_f64().unwrap().abs() < 1e-9);
    assert!(v["fidelity_vs_ideal"].as_f64().unwrap() > 1.0 - 1e-9);
}

#[test]
fn compile_then_verify_stays_below_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let sched = dir.path().join("h.json");
    let report = dir.path().join("report.json");
    let out = run(&["compile", "--target", "H", "--out", sched.to_str().unwrap()]);
    assert!(out.status.success());
    let out = run(&[
        "verify",
        "--schedule",
        sched.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-3);
    for run in v["runs"].as_array().unwrap() {
        assert!(run["norm_drift"].as_f64().unwrap() < 1e-9);
        assert!(run["oracle_leakage"].as_f64().unwrap() < 1e-3);
    }
}

#[test]
fn schedule_round_trip_is_byte_identical() {
    let text = stdout(&["compile", "--target", "T"]);
    let parsed = PulseSchedule::from_json(&text).unwrap();
    assert_eq!(parsed.to_json(), text);
}

#[test]
fn outputs_are_byte_deterministic() {
    for args in [
        vec!["gate", "--mu", "0.7", "--nu", "1.1"],
        vec!["spectrum", "--theta", "1.0", "--levels", "6"],
        vec!["scatter", "--mu", "0.9", "--nu", "0.2", "--points", "7"],
        vec!["compile", "--target", "S"],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{args:?}");
    }
}

#[test]
fn scatter_transmission_is_flat_at_one_half() {
    let text = stdout(&[
        "scatter",
        "--mu",
        "1.5707963267948966",
        "--nu",
        "0",
        "--points",
        "5",
    ]);
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let t: f64 = cols[1].parse().unwrap();
        let r: f64 = cols[2].parse().unwrap();
        assert!((t - 0.5).abs() < 1e-12, "{line}");
        assert!((t + r - 1.0).abs() < 1e-12, "{line}");
    }
}

/// Splits a documented command line into arguments, honoring single quotes.
fn split_command(line: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in line.chars() {
        match ch {
            '\'' => quoted = !quoted,
            c if c.is_whitespace() && !quoted => {
                if !cur.is_empty() {
                    args.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        args.push(cur);
    }
    args
}

/// Every `qabacus ...` line in the README's console blocks must execute
/// cleanly, in documented order, inside one scratch directory.
#[test]
fn readme_commands_execute() {
    let readme = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let text = std::fs::read_to_string(&readme).expect("workspace README");
    let dir = tempfile::tempdir().unwrap();
    let mut in_console = false;
    let mut ran = 0;
    for line in text.lines() {
        if line.starts_with("```") {
            in_console = line.trim() == "```console";
            continue;
        }
        if !in_console || !line.starts_with("qabacus ") {
            continue;
        }
        let args = split_command(line.trim_start_matches("qabacus "));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = bin()
            .args(&args)
            .current_dir(dir.path())
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "README command failed: {line}\n{}",
            String::from_utf8_lossy(&out.stderr)
        );
        ran += 1;
    }
    assert!(
        ran >= 7,
        "README should document at least 7 commands, found {ran}"
    );
}
