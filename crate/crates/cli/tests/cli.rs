use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use blockvqe_cli::results::{emit, parse};
use blockvqe_cli::SweepRow;
use proptest::prelude::*;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_blockvqe");

const DIMER: &str = r#"
sweep = [0.0, 2.0, 4.0]

[model]
sites = 2
hopping = -1.0
n_up = 1
n_down = 1
open_boundary = true

[method]
split = "spin"
encoding = "compact"
fix_n_down = true
ansatz_depth = 1
sim = "exact"
seed = 3

[optimizer]
max_iter = 4000
restarts = 2
"#;

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn blockvqe(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_to(config: &Path, out: &Path, extra: &[&str]) -> String {
    let mut args = vec!["run", config.to_str().unwrap(), "--output", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = blockvqe(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stem = config.file_stem().unwrap().to_str().unwrap();
    fs::read_to_string(out.join(format!("{stem}.csv"))).unwrap()
}

#[test]
fn run_writes_one_row_per_sweep_point() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "dimer.cfg", DIMER);
    let text = run_to(&cfg, &dir.path().join("out"), &[]);
    let rows = parse(&text).unwrap();
    assert_eq!(rows.len(), 3);
    for r in &rows {
        assert!(r.e_vqe >= r.e_exact - 1e-8, "{r:?}");
        assert!(r.e_vqe - r.e_exact < 1e-6, "{r:?}");
        assert!(r.wall_time > 0.0);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "dimer.cfg", DIMER);
    let a = run_to(&cfg, &dir.path().join("a"), &["--no-timing", "--threads", "1"]);
    let b = run_to(&cfg, &dir.path().join("b"), &["--no-timing", "--threads", "3"]);
    assert_eq!(a, b);
}

#[test]
fn shot_mode_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let text = DIMER
        .replace("sim = \"exact\"", "sim = \"shots\"\nshots = 2000")
        .replace("max_iter = 4000", "max_iter = 200");
    let cfg = write_config(dir.path(), "noisy.cfg", &text);
    let a = run_to(&cfg, &dir.path().join("a"), &["--no-timing", "--threads", "1"]);
    let b = run_to(&cfg, &dir.path().join("b"), &["--no-timing", "--threads", "2"]);
    assert_eq!(a, b);
    let c = run_to(&cfg, &dir.path().join("c"), &["--no-timing", "--seed", "99"]);
    assert_ne!(a, c);
}

#[test]
fn run_log_holds_traces_and_both_mean_fields() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "dimer.cfg", DIMER);
    let out = dir.path().join("out");
    run_to(&cfg, &out, &["--log"]);
    let log: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("dimer.log.json")).unwrap()).unwrap();
    let points = log.as_array().unwrap();
    assert_eq!(points.len(), 3);
    for p in points {
        assert!(!p["trace"].as_array().unwrap().is_empty());
        assert!(p["mean_field_restricted"]["energy"].is_f64());
        assert!(p["mean_field_unrestricted"]["energy"].is_f64());
    }
}

#[test]
fn empty_sweep_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "empty.cfg", &DIMER.replace("sweep = [0.0, 2.0, 4.0]", "sweep = []"));
    let o = blockvqe(&["run", cfg.to_str().unwrap(), "--output", dir.path().to_str().unwrap()]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("`sweep`"), "{err}");
}

#[test]
fn unknown_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(dir.path(), "typo.cfg", &DIMER.replace("seed = 3", "sede = 3"));
    let o = blockvqe(&["verify", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("sede"));
}

#[test]
fn verify_bundled_config_reports_qubit_count() {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/fig3.cfg");
    let o = blockvqe(&["verify", cfg.to_str().unwrap()]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(o.status.success(), "{out}");
    assert!(out.contains("Q = 4 (3 data + 1 ancilla)"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 5, "{out}");
}

#[test]
fn verify_other_encodings() {
    let dir = TempDir::new().unwrap();
    let base = fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/fig3.cfg")).unwrap();
    for enc in ["jw", "parity", "bk"] {
        let text = base
            .replace("encoding = \"compact\"", &format!("encoding = \"{enc}\""))
            .replace("fix_n_down = true", "fix_n_down = false");
        let cfg = write_config(dir.path(), &format!("{enc}.cfg"), &text);
        let o = blockvqe(&["verify", cfg.to_str().unwrap()]);
        assert!(o.status.success(), "{enc}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn verify_custom_split() {
    let dir = TempDir::new().unwrap();
    let text = DIMER
        .replace("split = \"spin\"", "split = \"custom\"\nset_a = [0, 2]")
        .replace("encoding = \"compact\"", "encoding = \"jw\"")
        .replace("fix_n_down = true", "fix_n_down = false");
    let cfg = write_config(dir.path(), "custom.cfg", &text);
    let o = blockvqe(&["verify", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
}

fn ten_digits(v: f64) -> f64 {
    format!("{v:.9e}").parse().unwrap()
}

fn arb_row() -> impl Strategy<Value = SweepRow> {
    (
        -1e6f64..1e6,
        -1e3f64..1e3,
        -1e3f64..1e3,
        -1e3f64..1e3,
        0usize..10_000_000,
        0f64..1e4,
        any::<bool>(),
    )
        .prop_map(|(u, e_vqe, e_exact, e_meanfield, iterations, wall_time, converged)| SweepRow {
            u: ten_digits(u),
            e_vqe: ten_digits(e_vqe),
            e_exact: ten_digits(e_exact),
            e_meanfield: ten_digits(e_meanfield),
            iterations,
            wall_time: ten_digits(wall_time),
            converged,
        })
}

proptest! {
    #[test]
    fn results_round_trip(rows in prop::collection::vec(arb_row(), 0..12)) {
        prop_assert_eq!(parse(&emit(&rows).unwrap()).unwrap(), rows);
    }

    #[test]
    fn emit_is_a_fixed_point(x in prop::num::f64::NORMAL) {
        let row = SweepRow { u: x, e_vqe: x, e_exact: x, e_meanfield: x, iterations: 1, wall_time: 0.0, converged: false };
        let once = emit(&[row]).unwrap();
        prop_assert_eq!(emit(&parse(&once).unwrap()).unwrap(), once);
    }
}

#[test]
fn corrupted_encoding_fixture_is_reported() {
    use blockvqe_cli::{RunConfig, Verifier};
    let mut v = Verifier::new(&RunConfig::fig3()).unwrap();
    let ops = v.ops.as_mut().unwrap();
    ops.n_site.swap(0, 1);
    ops.n_site[0] = ops.n_site[0].add(&ops.t_down.scale(blockvqe::Complex64::new(0.1, 0.0))).unwrap();
    let checks = v.run().unwrap();
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    assert!(failed.contains(&"encoding"), "{checks:?}");

    // An operator on the wrong register size fails a check.
    let mut v = Verifier::new(&RunConfig::fig3()).unwrap();
    v.ops.as_mut().unwrap().t_down = blockvqe::PauliSum::identity(5);
    let checks = v.run().unwrap();
    assert!(checks.iter().any(|c| !c.passed));
}
