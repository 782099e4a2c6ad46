//! Integration tests of the `qlpsim` binary: subcommand wiring, file
//! formats and exit codes (0 success, 1 usage, 2 data/parse).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qlpsim(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlpsim"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn data_file(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

#[test]
fn dataset_writes_the_requested_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = qlpsim(
        &[
            "dataset", "--tau", "12", "--points", "4", "--seed", "5", "--out", "w.txt",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("w.txt")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    let backs: Vec<usize> = lines
        .iter()
        .map(|l| l.chars().filter(|c| *c == 'B').count())
        .collect();
    assert_eq!(backs, vec![0, 4, 8, 12]);
    assert!(lines.iter().all(|l| l.len() == 12));
}

#[test]
fn encode_reports_angles_and_emits_circuits_that_reparse() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "FFFB\nBBBB\n").unwrap();
    let out = qlpsim(
        &["encode", "--in", "w.txt", "--emit-qasm", "qasm"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("window,tau,tau1,true_f1,theta\n"));
    assert!(stdout.contains("0,4,1,0.25,"));

    for name in ["window_0000.qasm", "window_0001.qasm"] {
        let path = dir.path().join("qasm").join(name);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("OPENQASM 2.0;\n"));
        let check = qlpsim(&["check-qasm", path.to_str().unwrap()], dir.path());
        assert!(check.status.success());
        let summary = String::from_utf8(check.stdout).unwrap();
        assert!(summary.contains("measured=true"), "{summary}");
    }
}

#[test]
fn run_then_report_produces_an_error_table() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "FFFF\nFFBB\nBBBB\n").unwrap();
    let run = qlpsim(
        &[
            "run", "--in", "w.txt", "--shots", "512", "--reps", "4", "--seed", "1", "--out",
            "r.csv",
        ],
        dir.path(),
    );
    assert!(run.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.starts_with("# rng=chacha8\ntau,tau1,"));
    assert_eq!(csv.lines().count(), 5); // comment + header + 3 rows

    let report = qlpsim(&["report", "--in", "r.csv", "--table2"], dir.path());
    assert!(report.status.success());
    let table = String::from_utf8(report.stdout).unwrap();
    assert!(table.contains("profile: none"));
    assert!(table.lines().any(|l| l.starts_with("tau1")));
    assert!(table.lines().any(|l| l.starts_with("eps")));
}

#[test]
fn run_accepts_the_shipped_calibration_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "FFFFF\n").unwrap();
    let armonk = data_file("armonk.cal");
    let out = qlpsim(
        &[
            "run",
            "--in",
            "w.txt",
            "--shots",
            "256",
            "--reps",
            "2",
            "--noise",
            armonk.to_str().unwrap(),
            "--qubit",
            "0",
            "--seed",
            "8",
            "--out",
            "r.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(csv.contains("ro=0.0815;"));

    let burlington = data_file("burlington.cal");
    let out = qlpsim(
        &[
            "run",
            "--in",
            "w.txt",
            "--shots",
            "64",
            "--reps",
            "2",
            "--noise",
            burlington.to_str().unwrap(),
            "--qubit",
            "2",
            "--seed",
            "8",
            "--out",
            "b.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv.contains("ro=0.0855;"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "FB\n").unwrap();
    std::fs::write(
        dir.path().join("exp.cfg"),
        "in=w.txt\nshots=128\nreps=2\nseed=9\nout=from_config.csv\n",
    )
    .unwrap();

    let out = qlpsim(&["run", "--config", "exp.cfg"], dir.path());
    assert!(out.status.success());
    assert!(dir.path().join("from_config.csv").exists());

    // A flag beats the file: same config, explicit --out.
    let out = qlpsim(
        &["run", "--config", "exp.cfg", "--out", "flag.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let a = std::fs::read(dir.path().join("from_config.csv")).unwrap();
    let b = std::fs::read(dir.path().join("flag.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn online_writes_results_log_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("world.cfg"), "seed=4\nstep_sigma=0.5\n").unwrap();
    let out = qlpsim(
        &[
            "online",
            "--tau",
            "16",
            "--windows",
            "3",
            "--world-config",
            "world.cfg",
            "--shots",
            "128",
            "--seed",
            "2",
            "--out",
            "online.csv",
            "--log",
            "events.txt",
            "--trace",
            "trace.csv",
        ],
        dir.path(),
    );
    assert!(out.status.success());

    let csv = std::fs::read_to_string(dir.path().join("online.csv")).unwrap();
    assert!(csv.contains("window,tau,tau1,true_f1,theta,raw,corrected,eps,n_shots,seed"));
    assert_eq!(csv.lines().count(), 5);

    let log = std::fs::read_to_string(dir.path().join("events.txt")).unwrap();
    assert_eq!(log.lines().count(), 3);
    assert!(log.lines().all(|l| l.len() == 16));

    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.starts_with("t,x,y,alpha\n"));
    assert_eq!(trace.lines().count(), 1 + 3 * 16);
}

#[test]
fn usage_errors_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown flag.
    let out = qlpsim(&["dataset", "--bogus"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // Missing required argument.
    let out = qlpsim(&["dataset", "--tau", "10"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    // Invalid parameter range.
    let out = qlpsim(
        &["dataset", "--tau", "10", "--points", "1", "--out", "x.txt"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn data_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // Missing input file.
    let out = qlpsim(&["run", "--in", "absent.txt", "--out", "r.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // Corrupt window file.
    std::fs::write(dir.path().join("bad.txt"), "FFX\n").unwrap();
    let out = qlpsim(&["run", "--in", "bad.txt", "--out", "r.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("invalid character"), "{stderr}");

    // Unparseable circuit text.
    std::fs::write(dir.path().join("bad.qasm"), "OPENQASM 3.0;\n").unwrap();
    let out = qlpsim(&["check-qasm", "bad.qasm"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("line 1"), "{stderr}");
}

#[test]
fn help_and_version_exit_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qlpsim(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(qlpsim(&["--version"], dir.path()).status.code(), Some(0));
}
