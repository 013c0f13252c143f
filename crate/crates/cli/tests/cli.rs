use std::path::Path;
use std::process::{Command, Output};

fn wcep(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wcep"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn generate_solve_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let gen = wcep(d, &["gen", "--m", "6", "--n", "9", "--index", "2", "--seed", "5", "--out-a", "a.mtx", "--out-w", "w.mtx"]);
    assert!(gen.status.success(), "{}", String::from_utf8_lossy(&gen.stderr));

    for method in ["def", "eq13", "eq28", "eq29", "svd", "fullrank", "qr"] {
        let out = format!("x_{method}.mtx");
        let solve = wcep(d, &["wcep", "-A", "a.mtx", "-W", "w.mtx", "--method", method, "-o", &out]);
        assert!(solve.status.success(), "{method}: {}", String::from_utf8_lossy(&solve.stderr));
        let check = wcep(d, &["verify", "-A", "a.mtx", "-W", "w.mtx", "--x", &out]);
        let text = stdout(&check);
        assert_eq!(check.status.code(), Some(0), "{method}: {text}");
        assert!(text.starts_with("k = 2"), "{text}");
        assert!(text.trim_end().ends_with("verdict: pass"), "{text}");
    }
}

#[test]
fn failing_verification_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(wcep(d, &["gen", "--m", "5", "--n", "4", "--index", "1", "--out-a", "a.mtx", "--out-w", "w.mtx"]).status.success());
    // The zero matrix is an inverse of nothing here.
    std::fs::write(d.join("zero.csv"), "0,0,0,0\n".repeat(5)).unwrap();
    std::fs::write(d.join("wide.csv"), "0,0,0,0,0\n".repeat(4)).unwrap();
    // A wrongly shaped candidate is an input error, not a failed check.
    assert_eq!(wcep(d, &["verify", "-A", "a.mtx", "-W", "w.mtx", "--x", "wide.csv"]).status.code(), Some(1));
    let check = wcep(d, &["verify", "-A", "a.mtx", "-W", "w.mtx", "--x", "zero.csv"]);
    assert_eq!(check.status.code(), Some(2));
    assert!(stdout(&check).contains("verdict: fail"));
}

#[test]
fn usage_and_input_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(wcep(d, &["wcep", "--method", "nope"]).status.code(), Some(1));
    assert_eq!(wcep(d, &["pinv", "-A", "missing.mtx"]).status.code(), Some(1));
    std::fs::write(d.join("bad.csv"), "1,2\n3\n").unwrap();
    let o = wcep(d, &["pinv", "-A", "bad.csv"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
    assert_eq!(wcep(d, &["--help"]).status.code(), Some(0));
}

#[test]
fn csv_output_round_trips_through_pinv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("a.csv"), "1,1\n1,1\n").unwrap();
    let o = wcep(d, &["--output-format", "csv", "pinv", "-A", "a.csv"]);
    assert!(o.status.success());
    let vals: Vec<f64> = stdout(&o)
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().unwrap())
        .collect();
    assert_eq!(vals.len(), 4);
    assert!(vals.iter().all(|v| (v - 0.25).abs() < 1e-15), "{vals:?}");
}

#[test]
fn drazin_and_core_ep_of_a_nilpotent_block() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("j.csv"), "0,1\n0,0\n").unwrap();
    for cmd in ["drazin", "core-ep"] {
        let o = wcep(d, &["--output-format", "csv", cmd, "-A", "j.csv"]);
        assert!(o.status.success(), "{cmd}");
        assert!(stdout(&o).split([',', '\n']).filter(|s| !s.is_empty()).all(|s| s.parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn small_bench_reports_every_requested_method() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("bench.cfg"),
        "sizes = 12x18\nl_offsets = 0,1\ntarget_index = 2\nseed = 3\nrepetitions = 1\nmethods = eq28,eq29,eq13\n",
    )
    .unwrap();
    let o = wcep(d, &["bench", "--config", "bench.cfg", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "equation,m,n,k,l,seconds,r1,r2,r3,r1_rel,r2_rel,r3_rel,status");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.ends_with(",pass")), "{text}");
}

#[test]
fn complexity_csv_lists_the_three_formulas() {
    let dir = tempfile::tempdir().unwrap();
    let o = wcep(dir.path(), &["complexity", "--m", "300", "--n", "100", "--l", "3", "--pinv-model", "svd", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for label in ["eq13", "eq28", "eq29"] {
        assert!(text.contains(label), "{text}");
    }
}
