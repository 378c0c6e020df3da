//! End-to-end checks of the `declip` binary: exit codes, file outputs,
//! determinism, and agreement with direct library calls.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_declip"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("declip_cli_{tag}_{}", std::process::id()));
    std::fs::remove_dir_all(&dir).ok();
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn synth_writes_signal_and_spectrum() {
    let dir = tmp_dir("synth");
    let out = run(&[
        "synth",
        "--n",
        "128",
        "--k",
        "10",
        "--seed",
        "7",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let signal = declip_core::read_signal_file(&dir.join("signal.csv")).unwrap();
    assert_eq!(signal.n_len(), 128);
    // CLI output equals the direct library call
    let (lib_signal, lib_spectrum) =
        declip_core::synth_sparse_signal(&declip_core::SynthSpec::new(128, 10, 7)).unwrap();
    assert_eq!(signal, lib_signal);

    let spectrum: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(spectrum["n_len"], 128);
    let coeffs = spectrum["coeffs"].as_array().unwrap();
    assert_eq!(coeffs.len(), lib_spectrum.sparsity());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn synth_rejects_odd_sparsity() {
    let dir = tmp_dir("synth_odd");
    let out = run(&["synth", "--k", "3", "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn declip_missing_input_exits_one() {
    let out = run(&[
        "declip",
        "--in",
        "/nonexistent/signal.csv",
        "--cl",
        "-0.5",
        "--cu",
        "0.5",
        "--algo",
        "tpcc",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn declip_rejects_inverted_bounds() {
    let dir = tmp_dir("bounds");
    let path = dir.join("sig.csv");
    let x = declip_core::Signal::new(vec![0.0, 0.5, -0.5, 0.2]).unwrap();
    declip_core::write_signal_file(&path, &x, None).unwrap();
    let out = run(&[
        "declip",
        "--in",
        path.to_str().unwrap(),
        "--cl",
        "0.5",
        "--cu",
        "-0.5",
        "--algo",
        "bp",
    ]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

/// The full file round trip matches the library bit for bit: clip a tone,
/// restore it through the CLI, compare against the in-process result.
#[test]
fn declip_matches_library_bit_for_bit() {
    let dir = tmp_dir("roundtrip");
    let tone =
        declip_core::Signal::from_fn(128, |n| (2.0 * PI * n as f64 / 128.0 + PI / 4.0).sin())
            .unwrap();
    let obs = declip_core::clip(&tone, -0.72, 0.72).unwrap();
    let clipped_path = dir.join("clipped.csv");
    declip_core::write_signal_file(&clipped_path, &obs.x_c_signal(), None).unwrap();

    let out_dir = dir.join("out");
    let out = run(&[
        "declip",
        "--in",
        clipped_path.to_str().unwrap(),
        "--cl",
        "-0.72",
        "--cu",
        "0.72",
        "--algo",
        "rel1cc",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );

    let cli_restored = declip_core::read_signal_file(&out_dir.join("recovered.csv")).unwrap();
    let lib_restored =
        declip_core::declip_rel1cc(&obs, &declip_core::Rel1Params::default()).unwrap();
    assert_eq!(cli_restored.samples(), lib_restored.x_hat.samples());
    // and it actually restores the tone
    let err = declip_core::recovery_error(&tone, &cli_restored).unwrap();
    assert!(err <= 1e-3, "error {err}");

    let diag: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("diagnostics.json")).unwrap())
            .unwrap();
    assert_eq!(diag["algorithm"], "rel1cc");
    assert_eq!(diag["status"], "converged");
    assert_eq!(diag["m"], 66);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn declip_two_tone_via_files() {
    let dir = tmp_dir("twotone");
    let x = declip_core::Signal::from_fn(128, |n| {
        let t = 2.0 * PI * n as f64 / 128.0;
        t.sin() + 0.25 * (3.0 * t).sin()
    })
    .unwrap();
    let obs = declip_core::clip(&x, -0.2, 0.2).unwrap();
    let input = dir.join("clipped.csv");
    declip_core::write_signal_file(&input, &obs.x_c_signal(), None).unwrap();
    let out = run(&[
        "declip",
        "--in",
        input.to_str().unwrap(),
        "--cl",
        "-0.2",
        "--cu",
        "0.2",
        "--algo",
        "tpcc",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let restored = declip_core::read_signal_file(&dir.join("recovered.csv")).unwrap();
    let err = declip_core::recovery_error(&x, &restored).unwrap();
    assert!(err <= 1e-3, "two-tone error {err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn declip_non_convergence_exits_two_with_diagnostics() {
    let dir = tmp_dir("maxiters");
    let tone =
        declip_core::Signal::from_fn(128, |n| (2.0 * PI * n as f64 / 128.0 + PI / 4.0).sin())
            .unwrap();
    let obs = declip_core::clip(&tone, -0.72, 0.72).unwrap();
    let input = dir.join("clipped.csv");
    declip_core::write_signal_file(&input, &obs.x_c_signal(), None).unwrap();
    let out = run(&[
        "declip",
        "--in",
        input.to_str().unwrap(),
        "--cl",
        "-0.72",
        "--cu",
        "0.72",
        "--algo",
        "rel1cc",
        "--max-iters",
        "5",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.join("diagnostics.json").exists());
    assert!(dir.join("recovered.csv").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bench_probk_is_reproducible_and_plots() {
    let dir1 = tmp_dir("bench1");
    let dir2 = tmp_dir("bench2");
    let args = |dir: &Path| {
        vec![
            "bench".to_string(),
            "--exp".into(),
            "probk".into(),
            "--trials".into(),
            "3".into(),
            "--seed".into(),
            "5".into(),
            "--k-values".into(),
            "2,4".into(),
            "--svg".into(),
            "--out".into(),
            dir.to_str().unwrap().to_string(),
        ]
    };
    let out1 = bin().args(args(&dir1)).output().unwrap();
    assert!(
        out1.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out1.stderr)
    );
    let out2 = bin().args(args(&dir2)).output().unwrap();
    assert!(out2.status.success());

    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# timestamp_unix="))
            .map(|l| format!("{l}\n"))
            .collect()
    };
    assert_eq!(
        strip(&dir1.join("probk.csv")),
        strip(&dir2.join("probk.csv"))
    );

    let svg1 = std::fs::read(dir1.join("probk.svg")).unwrap();
    let svg2 = std::fs::read(dir2.join("probk.svg")).unwrap();
    assert_eq!(svg1, svg2);
    assert!(String::from_utf8_lossy(&svg1).starts_with("<svg"));
    std::fs::remove_dir_all(&dir1).ok();
    std::fs::remove_dir_all(&dir2).ok();
}

#[test]
fn bench_zero_trials_is_a_usage_error() {
    let dir = tmp_dir("bench0");
    let out = run(&[
        "bench",
        "--exp",
        "probk",
        "--trials",
        "0",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir1 = tmp_dir("threads1");
    let dir2 = tmp_dir("threads_auto");
    let run_with = |dir: &Path, threads: Option<&str>| {
        let mut c = bin();
        c.args([
            "bench",
            "--exp",
            "phase",
            "--trials",
            "2",
            "--seed",
            "9",
            "--k-values",
            "2",
            "--m-values",
            "30,50",
            "--out",
        ])
        .arg(dir);
        if let Some(t) = threads {
            c.env("DECLIP_THREADS", t);
        }
        c.output().unwrap()
    };
    assert!(run_with(&dir1, Some("1")).status.success());
    assert!(run_with(&dir2, None).status.success());
    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# timestamp_unix="))
            .map(|l| format!("{l}\n"))
            .collect()
    };
    assert_eq!(
        strip(&dir1.join("phase.csv")),
        strip(&dir2.join("phase.csv"))
    );
    std::fs::remove_dir_all(&dir1).ok();
    std::fs::remove_dir_all(&dir2).ok();
}

#[test]
fn demo_two_tone_writes_bundle() {
    let dir = tmp_dir("demo");
    let out = run(&[
        "demo",
        "--which",
        "two-tone",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(dir.join("two_tone_summary.csv").exists());
    assert!(dir.join("two_tone_m10.csv").exists());
    let lines = stdout_lines(&out);
    assert!(lines.iter().any(|l| l.contains("recovered")));
    std::fs::remove_dir_all(&dir).ok();
}
