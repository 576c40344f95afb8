use std::path::Path;
use std::process::{Command, Output};

use cavitywalk::report::Report;

fn cavitywalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavitywalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).display().to_string()
}

fn fidelities(out: &Output) -> Vec<(u32, f64)> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let (n, f) = l.split_once(' ').unwrap();
            (n.parse().unwrap(), f.parse().unwrap())
        })
        .collect()
}

#[test]
fn ideal_two_steps() {
    let out = cavitywalk(&["simulate-ideal", "--steps", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("#cavitywalk-report v1\n"));
    for line in [
        "2 0 0 0 0.25 0 0.25",
        "2 1 0 0 0.5 0 0.5",
        "2 2 0 0 0.25 0 0.25",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line}\n{text}");
    }
}

#[test]
fn stay_coin_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "run.conf");
    std::fs::write(
        &cfg,
        "# all light stays\nnetwork.eta_c = 1.0\nrun.steps = 10\n",
    )
    .unwrap();
    let out = cavitywalk(&["simulate-ideal", "--config", &cfg]);
    assert!(out.status.success());
    let report = Report::read(out.stdout.as_slice()).unwrap();
    let dists = report.distributions().unwrap();
    assert_eq!(dists.len(), 10);
    for d in dists {
        assert_eq!(d.get(&cavitywalk::walk::LatticePosition::line(0)), 1.0);
    }
}

#[test]
fn too_many_steps_is_a_validation_error() {
    let out = cavitywalk(&["simulate-ideal", "--steps", "63"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("run.steps") && err.contains("62"), "{err}");
}

#[test]
fn bad_config_value_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "bad.conf");
    std::fs::write(&cfg, "network.r_s2 = 1.5\n").unwrap();
    let out = cavitywalk(&["simulate-ideal", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("network"), "{err}");
}

#[test]
fn zero_trials_give_an_empty_event_file() {
    let dir = tempfile::tempdir().unwrap();
    let ev = path(dir.path(), "ev.txt");
    let out = cavitywalk(&["simulate-physical", "--trials", "0", "--out", &ev]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&ev).unwrap();
    assert_eq!(
        text,
        "#cavitywalk-events v1 tdc_bin_ps=162 trial_period_ns=33000\n"
    );
}

#[test]
fn simulate_and_analyze_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.ev"), path(dir.path(), "b.ev"));
    let (ra, rb) = (path(dir.path(), "a.rep"), path(dir.path(), "b.rep"));
    for (ev, threads) in [(&a, "1"), (&b, "3")] {
        let out = cavitywalk(&[
            "simulate-physical",
            "--trials",
            "150000",
            "--seed",
            "9",
            "--threads",
            threads,
            "--out",
            ev,
        ]);
        assert!(out.status.success());
        let summary = String::from_utf8(out.stderr).unwrap();
        assert!(summary.contains("in step 62"), "{summary}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    for (ev, rep) in [(&a, &ra), (&b, &rb)] {
        let out = cavitywalk(&["analyze", ev, "--trials", "150000", "--out", rep]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let text = std::fs::read_to_string(&ra).unwrap();
    assert_eq!(text, std::fs::read_to_string(&rb).unwrap());
    assert!(text.contains("#loss cavity=0"));
    assert!(text.contains("#fidelity N F"));
}

#[test]
fn analyze_rejects_mismatched_timing() {
    let dir = tempfile::tempdir().unwrap();
    let ev = path(dir.path(), "ev.txt");
    std::fs::write(
        &ev,
        "#cavitywalk-events v1 tdc_bin_ps=81 trial_period_ns=33000\n",
    )
    .unwrap();
    let out = cavitywalk(&["analyze", &ev]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("81 ps"));
}

#[test]
fn analyze_empty_events_drops_all_steps() {
    let dir = tempfile::tempdir().unwrap();
    let ev = path(dir.path(), "ev.txt");
    std::fs::write(
        &ev,
        "#cavitywalk-events v1 tdc_bin_ps=162 trial_period_ns=33000\n",
    )
    .unwrap();
    let out = cavitywalk(&["analyze", &ev, "--trials", "1000"]);
    assert!(out.status.success());
    let report = Report::read(out.stdout.as_slice()).unwrap();
    assert!(report.fidelity.is_empty());
    assert!(report.distributions().unwrap().is_empty());
    assert!(String::from_utf8(out.stderr).unwrap().contains("dropped"));
}

#[test]
fn compare_reports() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, args: &[&str]| {
        let p = path(dir.path(), name);
        let mut full = vec!["simulate-ideal", "--out", &p];
        full.extend_from_slice(args);
        assert!(cavitywalk(&full).status.success());
        p
    };
    let half = write("half.rep", &[]);
    let cfg = path(dir.path(), "eight.conf");
    std::fs::write(&cfg, "network.eta_c = 0.8\n").unwrap();
    let eight = write("eight.rep", &["--config", &cfg]);
    let short = write("short.rep", &["--steps", "10"]);

    let same = cavitywalk(&["compare", &half, &half]);
    assert!(same.status.success());
    let f = fidelities(&same);
    assert_eq!(f.len(), 62);
    assert!(f.iter().all(|e| (e.1 - 1.0).abs() < 1e-12));

    let diff = fidelities(&cavitywalk(&["compare", &half, &eight]));
    assert!(diff.last().unwrap().1 < 0.99, "{:?}", diff.last());

    let mismatch = cavitywalk(&["compare", &half, &short]);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn disjoint_reports_have_zero_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.rep");
    let b = path(dir.path(), "b.rep");
    let head = "#cavitywalk-report v1\n#columns N k raw_counts background mu sigma P\n";
    std::fs::write(&a, format!("{head}1 0 0 0 1 0 1\n1 1 0 0 0 0 0\n")).unwrap();
    std::fs::write(&b, format!("{head}1 0 0 0 0 0 0\n1 1 0 0 1 0 1\n")).unwrap();
    let f = fidelities(&cavitywalk(&["compare", &a, &b]));
    assert_eq!(f, vec![(1, 0.0)]);
}

#[test]
fn missing_input_file_is_a_runtime_error() {
    let out = cavitywalk(&["analyze", "/nonexistent/events.txt"]);
    assert_eq!(out.status.code(), Some(2));
}
