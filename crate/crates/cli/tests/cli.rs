use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use aqt_cli::config::Scenario;
use aqt_cli::output::parse_csv;
use serde_json::Value;
use tempfile::TempDir;

const SYSTEM: &str = r#""system": {
    "n1": 4,
    "couplings": {"mode": "uniform", "magnitude": 0.5},
    "omega": 10.0,
    "omega0": 10.0,
    "delta1": 3.0,
    "delta0": -4.0,
    "g_gate1": 0.8
  }"#;

fn aqt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aqt"))
        .args(args)
        .output()
        .expect("spawn aqt")
}

fn write_config(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(cmd: &str, cfg: &Path, out: &Path) -> Output {
    aqt(&[
        cmd,
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Header and data rows of a CSV with `#` metadata lines.
fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut records = parse_csv(&std::fs::read_to_string(path).unwrap()).into_iter();
    let header = records.next().unwrap();
    let rows = records
        .map(|r| r.iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn simulate_writes_series_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sim.json",
        &format!(
            r#"{{ {SYSTEM}, "scenario": {{"kind": "resonant-swap"}}, "time": {{"t_max": 4.0, "points": 81, "units": "s-over-pi"}} }}"#
        ),
    );
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(run("simulate", &cfg, &a).status.success());
    assert!(run("simulate", &cfg, &b).status.success());
    for f in ["analytic.csv", "numeric.csv", "summary.json"] {
        assert_eq!(
            std::fs::read(a.join(f)).unwrap(),
            std::fs::read(b.join(f)).unwrap(),
            "{f} differs between runs"
        );
    }

    let text = std::fs::read_to_string(a.join("analytic.csv")).unwrap();
    assert!(text.starts_with("# aqt simulate\n# config: {"));
    assert!(text.contains("\n# seed: none\n"));

    let (header, rows) = csv_rows(&a.join("analytic.csv"));
    assert_eq!(header[..5], ["t", "tS_over_pi", "p0", "p1", "p2"]);
    assert_eq!(rows.len(), 81);
    for r in &rows {
        assert!((r[2] + r[3] + r[4] - 1.0).abs() < 1e-12);
    }
    // resonant swap completes at tS/π = 2
    let swap = rows.iter().find(|r| (r[1] - 2.0).abs() < 1e-12).unwrap();
    assert!((swap[4] - 1.0).abs() < 1e-9);

    let summary = json(&a.join("summary.json"));
    assert!(summary["max_deviation"].as_f64().unwrap() < 1e-9);
    assert!(summary["max_leakage"].as_f64().unwrap() < 1e-12);
}

#[test]
fn simulate_random_couplings_records_seed() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "rand.json",
        r#"{
          "system": {"n1": 5, "couplings": {"mode": "random", "rms": 0.5, "seed": 99},
                     "omega": 10.0, "omega0": 10.0, "delta1": 3.0, "delta0": -4.0, "g_gate1": 0.8},
          "scenario": {"kind": "nonresonant-swap"},
          "time": {"t_max": 4.0, "points": 41, "units": "s-over-pi"}
        }"#,
    );
    let out = dir.path().join("o");
    let o = run("simulate", &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join("numeric.csv")).unwrap();
    assert!(text.contains("\n# seed: 99\n"));
    assert!(
        json(&out.join("summary.json"))["max_leakage"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
}

#[test]
fn invalid_configs_exit_one_with_field_name() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o");

    let cfg = write_config(
        &dir,
        "missing.json",
        r#"{"system": {"n1": 2}, "scenario": {"kind": "sdma"}}"#,
    );
    let o = run("simulate", &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("couplings"), "{}", stderr(&o));

    let cfg = write_config(
        &dir,
        "points.json",
        &format!(
            r#"{{ {SYSTEM}, "scenario": {{"kind": "resonant-swap"}}, "time": {{"t_max": 1.0, "points": 1}} }}"#
        ),
    );
    let o = run("simulate", &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("points"), "{}", stderr(&o));

    let cfg = write_config(
        &dir,
        "metric.json",
        &format!(
            r#"{{ {SYSTEM}, "scenario": {{"kind": "nonresonant-swap"}},
               "sweep": {{"metric": "fidelity", "axes": [{{"param": "n", "values": [1, 2]}}]}} }}"#
        ),
    );
    let o = run("sweep", &cfg, &out);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("fidelity"), "{}", stderr(&o));

    let o = aqt(&[
        "simulate",
        "--config",
        dir.path().join("absent.json").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.json"));
}

#[test]
fn custom_protocol_rejects_negative_duration() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "neg.json",
        &format!(
            r#"{{ {SYSTEM}, "scenario": {{"kind": "custom", "steps": [{{"op": "swap-evolve", "duration": -1.0, "detuning": 0.0}}]}},
               "qubits": {{"me1": {{"p_excited": 1.0}}, "control": {{"p_excited": 0.0}}}} }}"#
        ),
    );
    let o = run("protocol", &cfg, &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(1));
}

fn protocol_summary(dir: &TempDir, scenario: &str, me1: &str, control: &str) -> Value {
    let body = format!(
        r#"{{ {SYSTEM}, "scenario": {scenario}, "qubits": {{"me1": {me1}, "control": {control}}} }}"#
    );
    let cfg = write_config(dir, "p.json", &body);
    let out = dir.path().join("run");
    let o = run("protocol", &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(out.join("trace.json").exists());
    json(&out.join("protocol_summary.json"))
}

#[test]
fn control_zero_swaps_and_control_one_blocks() {
    let dir = TempDir::new().unwrap();
    let scenario = r#"{"kind": "control-swap", "regime": "resonant"}"#;
    let swapped = protocol_summary(
        &dir,
        scenario,
        r#"{"p_excited": 0.7, "phi": 0.3}"#,
        r#"{"p_excited": 0.0}"#,
    );
    assert!(swapped["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!((swapped["marginals"]["me2"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    assert!(swapped["marginals"]["me1"].as_f64().unwrap() < 1e-9);

    let blocked = protocol_summary(
        &dir,
        scenario,
        r#"{"p_excited": 0.7, "phi": 0.3}"#,
        r#"{"p_excited": 1.0}"#,
    );
    assert!(blocked["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert!((blocked["marginals"]["me1"].as_f64().unwrap() - 0.7).abs() < 1e-9);
    assert!(blocked["marginals"]["me2"].as_f64().unwrap() < 1e-9);
}

#[test]
fn balanced_control_maximally_entangles_me3() {
    let dir = TempDir::new().unwrap();
    let s = protocol_summary(
        &dir,
        r#"{"kind": "control-swap"}"#,
        r#"{"p_excited": 1.0}"#,
        r#"{"p_excited": 0.5}"#,
    );
    assert!((s["entropies"]["me3"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let s = protocol_summary(
        &dir,
        r#"{"kind": "control-sqrt-swap"}"#,
        r#"{"p_excited": 0.4, "phi": -1.0}"#,
        r#"{"p_excited": 0.25}"#,
    );
    assert!(s["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
}

#[test]
fn sdma_scenario_is_stationary() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        "sdma.json",
        &format!(r#"{{ {SYSTEM}, "scenario": {{"kind": "sdma"}} }}"#),
    );
    let out = dir.path().join("o");
    assert!(run("protocol", &cfg, &out).status.success());
    let s = json(&out.join("protocol_summary.json"));
    assert!(s["sdma_population_drift"].as_f64().unwrap() < 1e-10);
}

fn sweep_values(dir: &TempDir, scenario: &str, sweep: &str) -> Vec<(f64, f64)> {
    let cfg = write_config(
        dir,
        "s.json",
        &format!(r#"{{ {SYSTEM}, "scenario": {scenario}, "sweep": {sweep} }}"#),
    );
    let out = dir.path().join("sweep");
    let o = run("sweep", &cfg, &out);
    assert!(o.status.success(), "{}", stderr(&o));
    let (_, rows) = csv_rows(&out.join("sweep.csv"));
    rows.into_iter().map(|r| (r[0], r[1])).collect()
}

#[test]
fn max_transfer_falls_with_detuning() {
    let dir = TempDir::new().unwrap();
    let v = sweep_values(
        &dir,
        r#"{"kind": "nonresonant-swap"}"#,
        r#"{"metric": "max-transfer", "axes": [{"param": "detuning_over_s", "start": 0.0, "stop": 0.9, "points": 10}]}"#,
    );
    assert_eq!(v.len(), 10);
    assert!((v[0].1 - 1.0).abs() < 1e-9);
    for w in v.windows(2) {
        assert!(w[1].1 < w[0].1, "not decreasing: {w:?}");
    }
    // S/2 point is the √SWAP configuration
    assert!((v[5].1 - 0.5).abs() < 1e-9);
}

#[test]
fn entropy_sweep_peaks_at_balanced_control() {
    let dir = TempDir::new().unwrap();
    let v = sweep_values(
        &dir,
        r#"{"kind": "control-swap"}"#,
        r#"{"metric": "me3-entropy", "axes": [{"param": "alpha_c_sq", "start": 0.0, "stop": 1.0, "points": 11}]}"#,
    );
    let best = v.iter().cloned().fold(
        (0.0, f64::NEG_INFINITY),
        |a, b| if b.1 > a.1 { b } else { a },
    );
    assert!((best.0 - 0.5).abs() < 1e-12);
    assert!((best.1 - 1.0).abs() < 1e-9);
}

#[test]
fn leakage_sweep_over_node_size() {
    let dir = TempDir::new().unwrap();
    let v = sweep_values(
        &dir,
        r#"{"kind": "nonresonant-swap"}"#,
        r#"{"metric": "leakage", "axes": [{"param": "n", "values": [1, 3, 6]}]}"#,
    );
    assert_eq!(v.len(), 3);
    assert!(v.iter().all(|&(_, l)| l < 1e-12));
}

#[test]
fn verify_filters_and_fault_injection() {
    let o = aqt(&["verify", "--filter", "s-relation"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );

    let o = aqt(&[
        "verify",
        "--filter",
        "s-relation",
        "--inject-fault",
        "omega-sign",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));

    let o = aqt(&["verify", "--filter", "time-ratios", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["checks"][0]["name"], "time-ratios");

    let o = aqt(&["verify", "--filter", "no-such-check"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn shipped_configs_run() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let dir = TempDir::new().unwrap();
    let mut seen = 0;
    for entry in std::fs::read_dir(root).unwrap() {
        let path = entry.unwrap().path();
        let cfg = aqt_cli::RunConfig::load(&path).unwrap();
        let cmd = if cfg.sweep.is_some() {
            "sweep"
        } else if matches!(
            cfg.scenario,
            Scenario::ResonantSwap | Scenario::NonresonantSwap | Scenario::SwapTheta { .. }
        ) {
            "simulate"
        } else {
            "protocol"
        };
        let o = run(cmd, &path, &dir.path().join(path.file_stem().unwrap()));
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
        seen += 1;
    }
    assert!(seen >= 5);
}
