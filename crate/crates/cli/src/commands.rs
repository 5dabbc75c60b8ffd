use supou::analytics::{
    gaussian_variance, growth_exponent, jump_variance, levy_tail_integrated, lil_envelope, limit_class,
    mean_integrated, moment_finite, total_variance, GrowthCase, MomentVerdict, Sign,
};
use supou::experiments::{
    run_growth_sweep, run_lil_experiment, run_mz_experiment, verify_cutoff_scaling, verify_exotic, verify_levy_tail,
    GrowthReport, Verdict,
};
use supou::measures::GeneratingQuadruple;
use supou::simulator::{simulate_paths, Execution, SimPlan};
use supou::ExtReal;

use crate::config::{RunConfig, Suite};
use crate::error::CliError;
use crate::output::{num, Run};

const ANALYZE_SCHEMA: &[(&str, &str)] = &[
    ("quantity", "str"),
    ("t", "f64"),
    ("r_or_beta", "f64"),
    ("value", "f64"),
    ("abs_error_estimate", "f64"),
    ("case_tag", "str"),
];

const PATH_SCHEMA: &[(&str, &str)] = &[
    ("path_id", "u64"),
    ("t", "f64"),
    ("x_star", "f64"),
    ("x_minus", "f64"),
    ("x_plus1", "f64"),
    ("x_plus2", "f64"),
    ("past_bound", "f64"),
    ("small_jump_std", "f64"),
];

const VERDICT_SCHEMA: &[(&str, &str)] = &[
    ("suite", "str"),
    ("case", "str"),
    ("criterion", "str"),
    ("statistic", "f64"),
    ("accept", "str"),
    ("pass", "bool"),
];

const PER_PATH_SCHEMA: &[(&str, &str)] = &[("case", "str"), ("path_id", "u64"), ("statistic", "f64")];

const TABLE_SCHEMA: &[(&str, &str)] = &[
    ("case", "u8"),
    ("condition", "str"),
    ("formula", "str"),
    ("value", "f64"),
    ("active", "bool"),
];

fn ext(v: ExtReal) -> (f64, &'static str) {
    match v {
        ExtReal::Finite(x) => (x, "finite"),
        ExtReal::PosInf => (f64::INFINITY, "infinite"),
        ExtReal::Undefined => (f64::NAN, "undefined"),
    }
}

/// Analytic quantities on the sim grid, the tail levels and the moment orders.
pub fn analyze(cfg: &RunConfig, run: &mut Run) -> Result<(), CliError> {
    let q = cfg.quadruple()?;
    let times = cfg.sim_config()?.grid.times(cfg.sim.horizon)?;
    let mut out = run.csv("analytics.csv", ANALYZE_SCHEMA)?;
    let blank = String::new;
    let mut row = |quantity: &str, t: Option<f64>, r: Option<f64>, v: f64, err: f64, tag: &str| {
        out.row([
            quantity.to_string(),
            t.map(num).unwrap_or_else(blank),
            r.map(num).unwrap_or_else(blank),
            num(v),
            num(err),
            tag.to_string(),
        ])
    };

    let ix = q.indices();
    let g = growth_exponent(&ix);
    row("growth_exponent", None, None, g.exponent_bound, 0.0, g.case.tag())?;
    let lc = limit_class(&q);
    row("hurst", None, None, lc.hurst().unwrap_or(f64::NAN), 0.0, lc.name())?;

    for &t in &times {
        let (m, tag) = ext(mean_integrated(&q, t)?);
        row("mean", Some(t), None, m, 0.0, tag)?;
        for (name, est) in [
            ("gaussian_variance", gaussian_variance(&q, t)),
            ("jump_variance", jump_variance(&q, t)),
            ("total_variance", total_variance(&q, t)),
        ] {
            match est {
                Ok(e) => row(name, Some(t), None, e.value, e.abs_err, "finite")?,
                Err(_) => row(name, Some(t), None, f64::NAN, f64::NAN, "unavailable")?,
            }
        }
        if q.b() > 0.0 && t > std::f64::consts::E {
            match lil_envelope(&q, t) {
                Ok(v) => row("lil_envelope", Some(t), None, v, 0.0, "finite")?,
                Err(_) => row("lil_envelope", Some(t), None, f64::NAN, f64::NAN, "unavailable")?,
            }
        }
        for &r in &cfg.experiment.levels {
            for (sign, name, part) in [
                (Sign::Positive, "levy_tail_pos", q.lam().pos()),
                (Sign::Negative, "levy_tail_neg", q.lam().neg()),
            ] {
                if part.is_zero() {
                    continue;
                }
                let e = levy_tail_integrated(&q, t, r, sign)?;
                row(name, Some(t), Some(r), e.value, e.abs_err, "finite")?;
            }
        }
    }
    for &beta in &cfg.experiment.betas {
        let (v, tag) = match moment_finite(&q, beta)? {
            MomentVerdict::Finite => (1.0, "finite"),
            MomentVerdict::Infinite => (0.0, "infinite"),
            MomentVerdict::FiniteIf(x) if x.is_finite() => (1.0, "finite_by_integral"),
            MomentVerdict::FiniteIf(_) => (0.0, "infinite_by_integral"),
        };
        row("moment_finite", None, Some(beta), v, 0.0, tag)?;
    }
    out.finish()?;
    run.manifest("analyze", &[])
}

/// Simulated paths with their decomposition and error certificate.
pub fn simulate(cfg: &RunConfig, run: &mut Run) -> Result<(), CliError> {
    let q = cfg.quadruple()?;
    let plan = SimPlan::new(&q, &cfg.sim_config()?)?;
    let paths = simulate_paths(&plan, Execution::Parallel)?;
    let cert = plan.certificate();
    let past = cert.past_bound.value().map(num).unwrap_or_else(|| "not_certified".into());
    let sjs = num(cert.small_jump_std);
    let mut out = run.csv("paths.csv", PATH_SCHEMA)?;
    for p in &paths {
        for (k, (&t, &x)) in p.times.iter().zip(&p.values).enumerate() {
            let (xm, p1, p2) = match &p.decomposition {
                Some(d) => (num(d.x_minus[k]), num(d.x_plus1[k]), num(d.x_plus2[k])),
                None => (String::new(), String::new(), String::new()),
            };
            out.row([p.path_id.to_string(), num(t), num(x), xm, p1, p2, past.clone(), sjs.clone()])?;
        }
    }
    out.finish()?;
    run.manifest(
        "simulate",
        &[
            ("n_paths", paths.len().to_string()),
            ("window", plan.window().to_string()),
        ],
    )
}

struct Row {
    case: String,
    criterion: String,
    statistic: f64,
    accept: String,
    pass: bool,
}

fn growth_rows(r: &GrowthReport, rows: &mut Vec<Row>, skipped: &mut Vec<String>) {
    if let Verdict::Skipped(why) = r.verdict() {
        skipped.push(format!("{}: {why}", r.label));
    }
    for c in &r.criteria {
        rows.push(Row {
            case: r.label.clone(),
            criterion: c.name.clone(),
            statistic: c.statistic,
            accept: c.accept.clone(),
            pass: c.pass,
        });
    }
}

fn need<T: Clone>(v: &Option<T>, field: &str, suite: Suite) -> Result<T, CliError> {
    v.clone().ok_or_else(|| {
        CliError::Config(format!("experiment.{field} is required by the {} suite", suite.name()))
    })
}

/// Runs a suite; `Ok(true)` when every criterion passes.
pub fn verify(cfg: &RunConfig, suite: Option<Suite>, run: &mut Run) -> Result<bool, CliError> {
    let exp = &cfg.experiment;
    let suite = suite
        .or(exp.suite)
        .ok_or_else(|| CliError::Config("experiment.suite: no suite given".into()))?;
    let tol = cfg.tolerances();
    let sim = cfg.sim_config()?;
    let exec = Execution::Parallel;
    let mut rows = Vec::new();
    let mut per_path: Vec<(String, Vec<f64>)> = Vec::new();
    let mut skipped = Vec::new();
    let mut notes = Vec::new();

    match suite {
        Suite::Tail => {
            if exp.levels.is_empty() {
                return Err(CliError::Config("experiment.levels is required by the tail suite".into()));
            }
            let q = cfg.quadruple()?;
            let t = exp.t.unwrap_or(sim.horizon);
            let r = verify_levy_tail(&q, t, &exp.levels, &sim, exec, &tol)?;
            for l in &r.levels {
                rows.push(Row {
                    case: format!("t={}", num(t)),
                    criterion: format!("mean_count(r={})", num(l.level)),
                    statistic: l.empirical,
                    accept: format!(
                        "|x - {}| <= {} * {}",
                        num(l.analytic),
                        num(tol.tail_se_mult),
                        num(l.se)
                    ),
                    pass: l.pass,
                });
            }
            rows.push(Row {
                case: format!("t={}", num(t)),
                criterion: "monotone_in_level".into(),
                statistic: if r.monotone { 1.0 } else { 0.0 },
                accept: "= 1".into(),
                pass: r.monotone,
            });
        }
        Suite::Mz => {
            let q = cfg.quadruple()?;
            let gamma = need(&exp.gamma, "gamma", suite)?;
            let r = run_mz_experiment(&q, gamma, &sim, exec, &tol)?;
            growth_rows(&r, &mut rows, &mut skipped);
            notes.extend(r.notes.iter().cloned());
            per_path.push((r.label.clone(), r.per_path));
        }
        Suite::Lil => {
            let q = cfg.quadruple()?;
            let r = run_lil_experiment(&q, &sim, exec, &tol)?;
            growth_rows(&r, &mut rows, &mut skipped);
            notes.extend(r.notes.iter().cloned());
            per_path.push((r.label.clone(), r.per_path));
        }
        Suite::Sweep => {
            let qs: Vec<GeneratingQuadruple> = if exp.models.is_empty() {
                vec![cfg.quadruple()?]
            } else {
                exp.models
                    .iter()
                    .enumerate()
                    .map(|(i, m)| m.build(&format!("experiment.models[{i}]")))
                    .collect::<Result<_, _>>()?
            };
            for r in run_growth_sweep(&qs, &sim, exec, &tol)? {
                growth_rows(&r, &mut rows, &mut skipped);
                notes.extend(r.notes.iter().map(|n| format!("{}: {n}", r.label)));
                per_path.push((r.label.clone(), r.per_path));
            }
        }
        Suite::Exotic => {
            if exp.exotic.is_empty() {
                return Err(CliError::Config("experiment.exotic is required by the exotic suite".into()));
            }
            for e in &exp.exotic {
                let r = verify_exotic(e.a, e.b, &e.gammas)?;
                let case = format!("a={},b={}", num(e.a), num(e.b));
                rows.push(Row {
                    case: case.clone(),
                    criterion: format!("indices(alpha0={},beta0={})", num(r.alpha0), num(r.beta0)),
                    statistic: if r.indices_ok() { 1.0 } else { 0.0 },
                    accept: format!("alpha0 = {} and beta0 = {}", num(e.a), num(e.b)),
                    pass: r.indices_ok(),
                });
                rows.push(Row {
                    case: case.clone(),
                    criterion: "partial_sums".into(),
                    statistic: r.partial_sums.last().copied().unwrap_or(f64::NAN),
                    accept: "increasing and finite".into(),
                    pass: r.sums_ok(),
                });
                for row in &r.rows {
                    rows.push(Row {
                        case: case.clone(),
                        criterion: format!("finite(gamma={})", num(row.gamma)),
                        statistic: if row.finite { 1.0 } else { 0.0 },
                        accept: format!("= {}", u8::from(row.expected)),
                        pass: row.finite == row.expected,
                    });
                }
            }
        }
        Suite::Cutoff => {
            let q = cfg.quadruple()?;
            let cutoffs = if exp.cutoffs.is_empty() {
                vec![1e-4, 1e-3, 1e-2, 1e-1]
            } else {
                exp.cutoffs.clone()
            };
            let r = verify_cutoff_scaling(&q, &sim, &cutoffs, &tol)?;
            rows.push(Row {
                case: format!("beta0={}", num(q.lam().beta0().value)),
                criterion: "cutoff_slope".into(),
                statistic: r.fit.slope,
                accept: format!("|x - {}| <= {}", num(r.expected_slope), num(tol.cutoff_slope)),
                pass: r.pass,
            });
        }
    }

    let mut out = run.csv("verdicts.csv", VERDICT_SCHEMA)?;
    for r in &rows {
        out.row([
            suite.name().to_string(),
            r.case.clone(),
            r.criterion.clone(),
            num(r.statistic),
            r.accept.clone(),
            r.pass.to_string(),
        ])?;
    }
    out.finish()?;
    if !per_path.is_empty() {
        let mut out = run.csv("per_path.csv", PER_PATH_SCHEMA)?;
        for (case, vals) in &per_path {
            for (i, v) in vals.iter().enumerate() {
                out.row([case.clone(), i.to_string(), num(*v)])?;
            }
        }
        out.finish()?;
    }

    let pass = rows.iter().all(|r| r.pass);
    for r in &rows {
        println!(
            "{} {} {} = {} ({})",
            if r.pass { "PASS" } else { "FAIL" },
            r.case,
            r.criterion,
            num(r.statistic),
            r.accept
        );
    }
    for s in &skipped {
        println!("SKIP {s}");
    }
    for n in &notes {
        println!("note: {n}");
    }
    println!("verdict: {}", if pass { "pass" } else { "fail" });
    run.manifest(
        "verify",
        &[
            ("suite", suite.name().to_string()),
            ("verdict", if pass { "pass" } else { "fail" }.to_string()),
        ],
    )?;
    Ok(pass)
}

fn case_number(c: GrowthCase) -> (u8, &'static str) {
    match c {
        GrowthCase::Half => (1, "one"),
        GrowthCase::InvEta => (2, "two"),
        GrowthCase::InvOnePlusAlpha => (3, "three"),
        GrowthCase::OneMinusAlphaOverBeta => (4, "four"),
    }
}

/// The growth table for the configured model.
pub fn table(cfg: &RunConfig, run: &mut Run) -> Result<(), CliError> {
    let q = cfg.quadruple()?;
    let ix = q.indices();
    let (a, b, e) = ix.raw();
    let g = growth_exponent(&ix);
    let lc = limit_class(&q);
    let (active, word) = case_number(g.case);
    let rows: [(u8, &str, &str, f64); 4] = [
        (1, "alpha >= 1, eta >= 2", "1/2", 0.5),
        (2, "alpha >= 1, eta < 2 | alpha < 1, eta <= 1+alpha, beta <= 1+alpha", "1/eta", 1.0 / e),
        (3, "alpha < 1, eta > 1+alpha, beta <= 1+alpha", "1/(1+alpha)", 1.0 / (1.0 + a)),
        (4, "alpha < 1, eta > 1+alpha, beta > 1+alpha", "1-alpha/beta", 1.0 - a / b),
    ];
    println!("alpha={} beta={} eta={}", num(a), num(b), num(e));
    let mut out = run.csv("table.csv", TABLE_SCHEMA)?;
    for (n, cond, formula, v) in rows {
        let mark = if n == active { '*' } else { ' ' };
        println!("{mark} {n}  {formula:<13} {:<8} {cond}", format!("{v:.4}"));
        out.row([n.to_string(), cond.to_string(), formula.to_string(), num(v), (n == active).to_string()])?;
    }
    out.finish()?;
    let exact = g.exact.as_ref().map(|r| r.to_string()).unwrap_or_else(|| "-".into());
    let h = lc.hurst().map(|h| format!("{h:.4}")).unwrap_or_else(|| "-".into());
    println!(
        "case={word} bound={:.4} exact={exact} log_correction={} limit_class={} H={h}",
        g.exponent_bound,
        g.log_correction,
        lc.name()
    );
    run.manifest(
        "table",
        &[
            ("case", word.to_string()),
            ("bound", num(g.exponent_bound)),
            ("exact", exact),
            ("limit_class", lc.name().to_string()),
        ],
    )
}
