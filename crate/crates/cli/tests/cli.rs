use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use supou_cli::parse_config;

const BIN: &str = env!("CARGO_BIN_EXE_supou");

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    Command::new(BIN)
        .args(args)
        .arg("--config")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const MINIMAL: &str = r#"{
  "model": {
    "lambda": { "positive": { "family": "CompoundPoisson", "rate": 1, "jumps": { "law": "Exponential", "rate": 1 } } },
    "pi": { "family": "PointMass", "x0": 1 }
  }
}"#;

#[test]
fn configs_round_trip() {
    for name in ["simulate.json", "sweep.json", "exotic.json", "table.json", "tail.json", "analyze.json"] {
        let a = parse_config(&fs::read_to_string(config(name)).unwrap()).unwrap();
        let b = parse_config(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(a, b, "{name}");
    }
    parse_config(MINIMAL).unwrap();
}

#[test]
fn negative_b_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"model": {"b": -1, "pi": {"family": "PointMass", "x0": 1}}}"#);
    let o = run(&["table"], &cfg, &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("model.b"), "{}", stderr(&o));
}

#[test]
fn tabulated_pi_with_divergent_inverse_moment_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"pi": {"family": "Tabulated",
            "segments": [{"lo": 0, "hi": 1, "coef": 1, "power": -1}]}}}"#,
    );
    let o = run(&["table"], &cfg, &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("model.pi") && e.contains("existence") && e.contains("m_{-1}"), "{e}");
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"pi": {"family": "PointMass", "x0": 1}}, "sim": {"horizn": 5}}"#,
    );
    let o = run(&["simulate"], &cfg, &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sim.horizn"), "{}", stderr(&o));
}

#[test]
fn simulate_is_reproducible_and_self_describing() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        assert!(run(&["simulate"], &config("simulate.json"), d).status.success());
    }
    let csv_a = fs::read_to_string(a.join("paths.csv")).unwrap();
    assert_eq!(csv_a, fs::read_to_string(b.join("paths.csv")).unwrap());
    let mut lines = csv_a.lines();
    assert!(lines.next().unwrap().starts_with("#schema: path_id:u64,t:f64,x_star:f64"));
    assert!(lines.next().unwrap().contains("seed=7"));
    assert_eq!(
        lines.next().unwrap(),
        "path_id,t,x_star,x_minus,x_plus1,x_plus2,past_bound,small_jump_std"
    );
    let manifest = fs::read_to_string(a.join("run.manifest")).unwrap();
    for key in ["config_hash=", "seed=7", "toolkit_version=", "subcommand=simulate"] {
        assert!(manifest.lines().any(|l| l.starts_with(key)), "{key} in {manifest}");
    }

    let c = dir.path().join("c");
    assert!(run(&["simulate", "--seed", "8"], &config("simulate.json"), &c).status.success());
    let csv_c = fs::read_to_string(c.join("paths.csv")).unwrap();
    assert_ne!(csv_a, csv_c);
    assert!(fs::read_to_string(c.join("run.manifest")).unwrap().contains("seed=8"));
}

#[test]
fn broken_mz_config_exits_2_without_simulating() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["verify"], &config("mz_invalid.json"), &out);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("J2"), "{}", stderr(&o));
    assert!(!out.join("verdicts.csv").exists());
    assert!(!out.join("run.manifest").exists());
}

#[test]
fn failing_suite_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["verify"], &config("mz_gamma2.json"), &out);
    assert_eq!(o.status.code(), Some(1));
    let verdicts = fs::read_to_string(out.join("verdicts.csv")).unwrap();
    assert!(verdicts.starts_with("#schema: suite:str,case:str,criterion:str"));
    assert!(verdicts.contains(",false"));
    assert_eq!(fs::read_to_string(out.join("per_path.csv")).unwrap().lines().count(), 3 + 100);
}

#[test]
fn passing_suites_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["exotic.json", "cutoff.json", "tail.json"] {
        let o = run(&["verify"], &config(name), &dir.path().join(name));
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn suite_model_mismatch_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    // Gaussian and jump parts together: neither LIL normaliser applies
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"model": {"b": 1,
            "lambda": {"positive": {"family": "CompoundPoisson", "rate": 1, "jumps": {"law": "Fixed", "size": 1}}},
            "pi": {"family": "PointMass", "x0": 1}},
          "experiment": {"suite": "lil"}}"#,
    );
    let o = run(&["verify"], &cfg, &dir.path().join("o"));
    assert_eq!(o.status.code(), Some(2));

    let cfg = write(dir.path(), "m.json", MINIMAL);
    let o = run(&["verify", "mz"], &cfg, &dir.path().join("m"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("experiment.gamma"), "{}", stderr(&o));
    let o = run(&["verify"], &cfg, &dir.path().join("m"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table_prints_case_four() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["table"], &config("table.json"), &dir.path().join("o"));
    assert!(o.status.success());
    let s = String::from_utf8_lossy(&o.stdout);
    assert!(s.contains("case=four bound=0.7222 exact=13/18"), "{s}");
    assert!(s.contains("limit_class=stable_dependent H=0.7222"), "{s}");
    let t = fs::read_to_string(dir.path().join("o/table.csv")).unwrap();
    assert!(t.starts_with("#schema: case:u8"));
    assert!(t.lines().any(|l| l.starts_with("4,") && l.ends_with(",true")));
}

#[test]
fn analyze_writes_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    assert!(run(&["analyze"], &config("analyze.json"), &out).status.success());
    let csv = fs::read_to_string(out.join("analytics.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert!(lines[0].starts_with("#schema: quantity:str,t:f64,r_or_beta:f64"));
    assert_eq!(lines[2], "quantity,t,r_or_beta,value,abs_error_estimate,case_tag");
    // ρ log((1−r)(1−e^{-t}) / (r e^{-t})) at ρ = 2, t = 5, r = 0.5
    let want = 2.0 * ((0.5 * (1.0 - (-5.0f64).exp())) / (0.5 * (-5.0f64).exp())).ln();
    let row = lines
        .iter()
        .find(|l| l.starts_with("levy_tail_pos,5,0.5,"))
        .expect("tail row");
    let v: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
    assert!((v - want).abs() < 1e-8 * want, "{v} vs {want}");
    assert!(lines.iter().any(|l| l.starts_with("moment_finite,,4,1,")));
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["table", "--config"])
        .arg(config("table.json"))
        .arg("--out")
        .arg(dir.path())
        .env("SUPOU_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("SUPOU_THREADS"));
}
