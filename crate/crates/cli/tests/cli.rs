//! End-to-end runs of the binary: output determinism, config precedence,
//! error exit codes, and spot values in each emitter.

use std::io::Write as _;
use std::process::Command;

fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_plpf"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap_or(-1),
    )
}

// data rows of a CSV emission (skips # comments and the header row)
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn field(row: &[String], idx: usize) -> f64 {
    row[idx].parse().unwrap()
}

#[test]
fn identical_invocations_emit_identical_bytes() {
    let a = run(&["sample", "--seed", "7", "--n", "60"]);
    let b = run(&["sample", "--seed", "7", "--n", "60"]);
    let c = run(&["sample", "--seed", "8", "--n", "60"]);
    assert_eq!(a.0, b.0);
    assert_ne!(a.0, c.0);
    assert_eq!(a.2, 0);

    let g1 = run(&["gain-surface"]);
    let g2 = run(&["gain-surface"]);
    assert_eq!(g1.0, g2.0);
}

#[test]
fn config_supplies_values_and_flags_override() {
    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "s = 0.5").unwrap();
    writeln!(cfg, "m = 2").unwrap();
    let path = cfg.path().to_str().unwrap();

    let (out, _, code) = run(&["max-distance", "--config", path]);
    assert_eq!(code, 0);
    let all = rows(&out);
    assert_eq!(all.len(), 1);
    assert_eq!(all[0][2], "2"); // m from config
    assert_eq!(all[0][3], "0.5"); // s from config

    let (out, _, _) = run(&["max-distance", "--config", path, "--s", "0.25"]);
    let all = rows(&out);
    assert_eq!(all[0][2], "2"); // m still from config
    assert_eq!(all[0][3], "0.25"); // s overridden on the command line
}

#[test]
fn bad_values_and_unknown_commands_are_usage_errors() {
    let (_, err, code) = run(&["validate", "--seed", "abc"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("usage error"), "{err}");

    let (_, _, code) = run(&["no-such-experiment"]);
    assert_eq!(code, 2);

    let (_, err, code) = run(&["gain-surface", "--delta", "1", "--alpha", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("not both"), "{err}");

    let mut cfg = tempfile::NamedTempFile::new().unwrap();
    writeln!(cfg, "sigma = 1").unwrap();
    let (_, err, code) = run(&["max-distance", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown key"), "{err}");
}

#[test]
fn unwritable_output_path_fails() {
    let (_, err, code) = run(&["opt-rates", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot write"), "{err}");
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rates.csv");
    let (stdout_text, _, _) = run(&["opt-rates"]);
    let (empty, _, code) = run(&["opt-rates", "--out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(empty.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout_text);
}

#[test]
fn gain_surface_ridge_is_unity() {
    let (out, _, code) = run(&["gain-surface", "--m", "1,2,5,inf"]);
    assert_eq!(code, 0);
    let ridge: Vec<_> = rows(&out)
        .into_iter()
        .filter(|r| r[2] == "1")
        .collect();
    assert_eq!(ridge.len(), 4);
    for row in ridge {
        assert!(
            (field(&row, 4) - 1.0).abs() < 1e-12,
            "gain at unit exponent: {row:?}"
        );
    }
}

#[test]
fn transport_capacity_endpoints() {
    let (out, _, code) = run(&["transport-capacity"]);
    assert_eq!(code, 0);
    let all = rows(&out);
    // at big_delta 1 both fading columns meet the closed value
    let unit: Vec<_> = all.iter().filter(|r| r[2] == "1").collect();
    assert_eq!(unit.len(), 2);
    let want = 2.0 * std::f64::consts::PI / (3.0 * std::f64::consts::LN_2);
    for row in &unit {
        assert!((field(row, 7) - want).abs() < 1e-9, "{row:?}");
    }
    // at small big_delta the unit-shape capacity sits about 11% below degenerate
    let half: Vec<_> = all.iter().filter(|r| r[2] == "0.5").collect();
    let by_m = |m: &str| half.iter().find(|r| r[3] == m).map(|r| field(r, 7)).unwrap();
    let ratio = by_m("1") / by_m("inf");
    assert!((0.85..0.92).contains(&ratio), "ratio {ratio}");
}

#[test]
fn opt_rates_match_unit_rate_point() {
    let (out, _, code) = run(&["opt-rates"]);
    assert_eq!(code, 0);
    let all = rows(&out);
    // the maximizing rate crosses 1 near big_delta 0.72
    let near = all.iter().find(|r| r[0] == "0.72").unwrap();
    assert!((field(near, 1) - 1.0).abs() < 0.02, "{near:?}");
    // rate decreases along the grid and never drops below its lower bound
    for pair in all.windows(2) {
        assert!(field(&pair[1], 1) <= field(&pair[0], 1));
    }
    for row in &all {
        assert!(field(row, 1) >= field(row, 3) - 1e-12);
        assert!(field(row, 2) >= field(row, 4) - 1e-12);
    }
}

#[test]
fn retrans_last_round_density_starts_at_the_intensity() {
    let (out, _, code) = run(&["retrans-densities", "--n", "6", "--k", "6", "--x", "0:1:2"]);
    assert_eq!(code, 0);
    let all = rows(&out);
    assert_eq!(all[0][5], "0");
    assert!((field(&all[0], 6) - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn sample_rows_divide_loss_by_mark() {
    let (out, _, _) = run(&["sample", "--seed", "11", "--n", "40"]);
    let all = rows(&out);
    assert!(!all.is_empty());
    for row in &all {
        let (loss, mark, faded) = (field(row, 2), field(row, 3), field(row, 4));
        assert!((faded - loss / mark).abs() <= 1e-12 * faded.abs().max(1.0));
    }
    // degenerate marks: unit mark, faded equals loss
    let (out, _, _) = run(&["sample", "--seed", "11", "--n", "40", "--m", "inf"]);
    for row in rows(&out) {
        assert_eq!(row[3], "1");
        assert_eq!(row[2], row[4]);
    }
}

#[test]
fn validate_reduced_trials_notes_widened_cis_and_reports_all_checks() {
    let (out, _, code) = run(&["validate", "--trials", "150", "--seed", "5"]);
    assert_eq!(code, 1, "one cross-check fails by design");
    assert!(out.contains("confidence intervals widen"), "{out}");
    let verdicts = out
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .count();
    assert_eq!(verdicts, 11);
    assert!(out.contains("FAIL reorder-probabilities"));
}
