//! One line per acceptance criterion; exits non-zero if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use supou::analytics::{
    case_value, gaussian_variance, growth_exponent, levy_tail_integrated, to_rational, GrowthCase, Sign,
};
use supou::experiments::stats::variance_se;
use supou::measures::{Drift, GeneratingQuadruple, Index, IndexTriple, JumpLaw, LevyFamily, LevyPart, MeasureFamily};
use supou::simulator::{simulate_paths, Execution, SimConfig, SimPlan, TimeGrid};

const BIN: &str = env!("CARGO_BIN_EXE_supou");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Runs the binary; returns (exit code, stdout).
fn supou(args: &[&str], config: &Path, out: &Path, threads: Option<usize>) -> (i32, String) {
    let mut cmd = Command::new(BIN);
    cmd.args(args).arg("--config").arg(config).arg("--out").arg(out);
    if let Some(n) = threads {
        cmd.env("SUPOU_THREADS", n.to_string());
    }
    let o = cmd.output().expect("binary runs");
    (
        o.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&o.stdout).into_owned(),
    )
}

fn verify(suite_config: &str, tmp: &Path) -> (i32, String) {
    let out = tmp.join(suite_config);
    supou(&["verify"], &configs().join(format!("{suite_config}.json")), &out, None)
}

fn fail_lines(stdout: &str) -> String {
    let v: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    v.join("; ")
}

fn c1_tail_closed_form(_: &Path) -> Outcome {
    let rho = 2.0;
    let lam = LevyFamily::positive(LevyPart::CompoundPoisson {
        rate: rho,
        jumps: JumpLaw::Fixed { size: 1.0 },
    })
    .unwrap();
    let q = GeneratingQuadruple::new(Drift::Natural, 0.0, lam, MeasureFamily::point_mass(1.0).unwrap())
        .unwrap();
    let mut worst = 0.0f64;
    let mut n = 0;
    for &t in &[0.5f64, 1.0, 2.0, 5.0, 10.0] {
        let g: f64 = 1.0 - (-t).exp();
        for k in 1..=10 {
            let r = g * k as f64 / 11.0;
            let exact = rho * ((1.0 - r) * g / (r * (-t).exp())).ln();
            let got = levy_tail_integrated(&q, t, r, Sign::Positive).unwrap().value;
            worst = worst.max((got - exact).abs() / exact);
            n += 1;
        }
    }
    outcome(worst <= 1e-8, format!("{n} pairs, max rel err {worst:.2e} (<= 1e-8)"))
}

fn c2_tail_mc(tmp: &Path) -> Outcome {
    let (code, out) = verify("tail", tmp);
    let levels = out.lines().filter(|l| l.contains("mean_count")).count();
    outcome(code == 0 && levels == 5, format!("exit {code}, {levels} levels, 1e4 replications {}", fail_lines(&out)))
}

fn c3_variances(_: &Path) -> Outcome {
    // Var X*₊,₁(1) = m₂(λ) m₋₂(π) = 2 · 1/2 for Exp(1) jumps and Gamma(3,1) π
    let lam = LevyFamily::positive(LevyPart::CompoundPoisson {
        rate: 1.0,
        jumps: JumpLaw::Exponential { rate: 1.0 },
    })
    .unwrap();
    let q = GeneratingQuadruple::new(Drift::Natural, 0.0, lam, MeasureFamily::gamma(3.0, 1.0).unwrap())
        .unwrap();
    let mut cfg = SimConfig::new(1.0, TimeGrid::List(vec![1.0]));
    cfg.small_jump_cutoff = 0.0;
    cfg.n_paths = 100_000;
    cfg.record_decomposition = true;
    let plan = SimPlan::new(&q, &cfg).unwrap();
    let p1: Vec<f64> = simulate_paths(&plan, Execution::Parallel)
        .unwrap()
        .iter()
        .map(|p| p.decomposition.as_ref().unwrap().x_plus1[0])
        .collect();
    let (v, se) = variance_se(&p1);
    let mc = (v - 1.0).abs() <= 3.0 * se;

    let b = 2.0;
    let pm = MeasureFamily::point_mass(1.0).unwrap();
    let qg = GeneratingQuadruple::new(Drift::Natural, b, LevyFamily::zero(), pm.clone()).unwrap();
    let mut worst = 0.0f64;
    for &t in &[0.1f64, 1.0, 10.0, 100.0, 1000.0] {
        let exact = b * (t - 1.0 + (-t).exp());
        let got = gaussian_variance(&qg, t).unwrap().value;
        worst = worst.max((got - exact).abs() / exact);
    }
    let closed = worst <= 1e-8;

    let q1 = GeneratingQuadruple::new(Drift::Natural, 1.0, LevyFamily::zero(), pm).unwrap();
    let ratio = gaussian_variance(&q1, 1e4).unwrap().value / 1e4;
    let asym = (ratio - 1.0).abs() <= 0.01;
    outcome(
        mc && closed && asym,
        format!(
            "Var X+1(1) = {v:.4} +- {se:.4} vs 1; Gaussian closed form rel err {worst:.1e}; Var/t at 1e4 = {ratio:.5} vs 1"
        ),
    )
}

fn model_json(pi: &str, lam: &str) -> String {
    format!(r#"{{"model": {{"lambda": {{"positive": {lam}}}, "pi": {pi}}}}}"#)
}

fn c4_table(tmp: &Path) -> Outcome {
    let stable = |b: f64, eta: f64| {
        format!(
            r#"{{"family": "Sum", "parts": [{{"family": "StableLike", "beta0": {b}, "c": 1}}, {{"family": "ParetoTail", "eta": {eta}, "scale": 1}}]}}"#
        )
    };
    let gamma3 = r#"{"family": "Gamma", "shape": 3, "rate": 1}"#;
    let pd05 = r#"{"family": "PowerDensity", "a": 0.5}"#;
    let cases = [
        ("one", "0.5000", model_json(gamma3, &stable(1.0, 3.0))),
        ("two", "0.6667", model_json(gamma3, r#"{"family": "ParetoTail", "eta": 1.5, "scale": 1}"#)),
        ("two", "0.8333", model_json(pd05, r#"{"family": "ParetoTail", "eta": 1.2, "scale": 1}"#)),
        ("three", "0.6667", model_json(pd05, &stable(1.2, 3.0))),
        ("four", "0.7222", model_json(pd05, &stable(1.8, 3.0))),
    ];
    let mut bad = Vec::new();
    for (i, (word, bound, json)) in cases.iter().enumerate() {
        let cfg = tmp.join(format!("table{i}.json"));
        std::fs::write(&cfg, json).unwrap();
        let (code, out) = supou(&["table"], &cfg, &tmp.join(format!("table{i}")), None);
        let want = format!("case={word} bound={bound} ");
        if code != 0 || !out.contains(&want) {
            bad.push(format!("{want}: {}", out.lines().last().unwrap_or("")));
        }
    }
    let shipped = {
        let (_, out) = supou(&["table"], &configs().join("table.json"), &tmp.join("table_shipped"), None);
        out.contains("case=four bound=0.7222") && out.contains("H=0.7222")
    };

    // boundary points: the adjacent formulas agree exactly
    let triple = |a: f64, b: f64, e: f64| IndexTriple {
        alpha: Index::new(a, true),
        beta: Index::new(b, true),
        eta: Index::new(e, true),
    };
    let r = |x: f64| to_rational(x);
    let check = |ix: IndexTriple, other: GrowthCase| {
        let (a, b, e) = ix.raw();
        let v = growth_exponent(&ix).exact;
        v.is_some() && v == case_value(other, r(a).as_ref(), r(b).as_ref(), r(e).as_ref())
    };
    let boundary = [
        check(triple(0.5, 1.2, 1.5), GrowthCase::InvOnePlusAlpha),
        check(triple(0.5, 1.5, 3.0), GrowthCase::OneMinusAlphaOverBeta),
        check(triple(1.0, 1.0, 2.0), GrowthCase::InvEta),
    ];
    let ok = bad.is_empty() && shipped && boundary.iter().all(|&b| b);
    outcome(
        ok,
        format!(
            "{} cases, shipped config case four {}, boundary equalities {:?} {}",
            cases.len(),
            if shipped { "ok" } else { "wrong" },
            boundary,
            bad.join("; ")
        ),
    )
}

fn c5_mz(tmp: &Path) -> Outcome {
    let (code, out) = verify("mz", tmp);
    let stat = out.lines().find(|l| l.contains("mz_decay")).unwrap_or("").to_string();
    let (c2, out2) = verify("mz_gamma2", tmp);
    let stat2 = out2.lines().find(|l| l.contains("mz_decay")).unwrap_or("").to_string();
    outcome(
        code == 0,
        format!(
            "gamma=1.5: exit {code} [{}]; gamma=2 (informational): exit {c2} [{}]",
            tail_of(&stat),
            tail_of(&stat2)
        ),
    )
}

/// `name = value` of a verdict line.
fn tail_of(line: &str) -> String {
    let mut w = line.split_whitespace().skip(2);
    match (w.next(), w.next(), w.next()) {
        (Some(name), Some("="), Some(v)) => format!("{name} = {}", v.parse::<f64>().map(|x| format!("{x:.3}")).unwrap_or(v.into())),
        _ => line.to_string(),
    }
}

fn lil_summary(out: &str) -> String {
    out.lines()
        .filter(|l| l.contains("lil_"))
        .map(|l| {
            format!("{} {}", &l[..4], tail_of(l))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn c6_lil(tmp: &Path) -> Outcome {
    let (cg, og) = verify("lil_gaussian", tmp);
    let (cj, oj) = verify("lil_jump", tmp);
    // informational: how often each band holds over other seeds
    let rate = |name: &str| {
        (1..10)
            .filter(|s| {
                let seed = s.to_string();
                let cfg = configs().join(format!("{name}.json"));
                supou(&["verify", "--seed", &seed], &cfg, &tmp.join(format!("{name}_{s}")), None).0 == 0
            })
            .count()
    };
    outcome(
        cg == 0 && cj == 0,
        format!(
            "gaussian exit {cg} [{}]; jump exit {cj} [{}]; seeds 1-9 pass: gaussian {}/9, jump {}/9",
            lil_summary(&og),
            lil_summary(&oj),
            rate("lil_gaussian"),
            rate("lil_jump")
        ),
    )
}

fn c7_sweep(tmp: &Path) -> Outcome {
    let (code, out) = verify("sweep", tmp);
    let slopes: Vec<String> = out
        .lines()
        .filter(|l| l.contains(" slope = "))
        .map(|l| {
            let s = l.split(" slope = ").nth(1).unwrap_or("");
            let v: f64 = s.split_whitespace().next().unwrap_or("nan").parse().unwrap_or(f64::NAN);
            format!("{v:.3}")
        })
        .collect();
    let probes = out.lines().filter(|l| l.contains("doubling_probe")).count();
    outcome(
        code == 0 && slopes.len() == 4 && probes == 4,
        format!("exit {code}, slopes {:?}, {probes} probes {}", slopes, fail_lines(&out)),
    )
}

fn c8_exotic(tmp: &Path) -> Outcome {
    let (code, out) = verify("exotic", tmp);
    let rows = out.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).count();
    outcome(code == 0, format!("exit {code}, {rows} checks over 3 pairs {}", fail_lines(&out)))
}

fn c9_cutoff(tmp: &Path) -> Outcome {
    let (code, out) = verify("cutoff", tmp);
    let line = out.lines().find(|l| l.contains("cutoff_slope")).unwrap_or("");
    outcome(code == 0, format!("exit {code}, {}", line.trim_start_matches("PASS ").trim_start_matches("FAIL ")))
}

fn c10_determinism(tmp: &Path) -> Outcome {
    let cfg = configs().join("simulate.json");
    let mut files = Vec::new();
    for (i, threads) in [1usize, 8, 1, 8].iter().enumerate() {
        let dir = tmp.join(format!("det{i}"));
        let (code, _) = supou(&["simulate"], &cfg, &dir, Some(*threads));
        assert_eq!(code, 0);
        files.push(std::fs::read(dir.join("paths.csv")).unwrap());
    }
    let same = files.windows(2).all(|w| w[0] == w[1]);
    outcome(same, format!("4 runs under 1/8/1/8 threads, {} bytes, identical: {same}", files[0].len()))
}

type Check = fn(&Path) -> Outcome;

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let checks: [(&str, f64, Check); 10] = [
        ("tail closed form", 1.0, c1_tail_closed_form),
        ("tail Monte Carlo", 60.0, c2_tail_mc),
        ("variance identities", 120.0, c3_variances),
        ("growth table", 1.0, c4_table),
        ("MZ strong law", 300.0, c5_mz),
        ("LIL bands", 600.0, c6_lil),
        ("growth sweep", 900.0, c7_sweep),
        ("exotic measures", 1.0, c8_exotic),
        ("cutoff scaling", 10.0, c9_cutoff),
        ("determinism", 60.0, c10_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, f)) in checks.iter().enumerate() {
        let start = Instant::now();
        let o = f(tmp.path());
        let secs = start.elapsed().as_secs_f64();
        let pass = o.pass && secs <= *budget;
        println!(
            "criterion {:>2} {:<20} {}  {} [{secs:.2}s of {budget}s]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
