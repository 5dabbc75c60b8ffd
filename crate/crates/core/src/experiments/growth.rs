use super::report::{digest, Criterion, GrowthReport, RatioStats};
use super::stats::{median, ols};
use super::Tolerances;
use crate::analytics::{growth_exponent, jump_lil_normalizer, lil_envelope, limit_class, mean_integrated};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::measures::{gamma_condition, GeneratingQuadruple};
use crate::numerics::loglog;
use crate::simulator::{simulate_paths, Execution, PathSample, SimConfig, SimPlan};

fn label(q: &GeneratingQuadruple, cfg: &SimConfig, extra: &str) -> (String, String) {
    let text = format!("{q}|{cfg:?}|{extra}");
    (digest(&text), format!("{q}"))
}

/// `E X*(t_k)`, or an error naming the divergent integral.
fn analytic_mean(q: &GeneratingQuadruple, times: &[f64]) -> Result<Vec<f64>> {
    times
        .iter()
        .map(|&t| match mean_integrated(q, t)? {
            ExtReal::Finite(v) => Ok(v),
            _ => Err(Error::Configuration(
                "centering needs a finite mean: the integral of |z| over |z| > 1 diverges".into(),
            )),
        })
        .collect()
}

fn run(q: &GeneratingQuadruple, cfg: &SimConfig, exec: Execution) -> Result<(SimPlan, Vec<PathSample>)> {
    let plan = SimPlan::new(q, cfg)?;
    let paths = simulate_paths(&plan, exec)?;
    Ok((plan, paths))
}

/// Index of the first grid time `≥ t`.
fn first_at_least(times: &[f64], t: f64) -> usize {
    times.partition_point(|&u| u < t * (1.0 - 1e-12))
}

fn tail_rates(report: &mut GrowthReport, times: &[f64], dev: &[Vec<f64>]) {
    let t_max = times[times.len() - 1];
    let k0 = first_at_least(times, t_max / 10.0);
    report.tail_times = times[k0..].to_vec();
    report.rates = dev
        .iter()
        .map(|d| {
            times[k0..]
                .iter()
                .zip(&d[k0..])
                .map(|(&t, &v)| if t > 1.0 { v.ln() / t.ln() } else { f64::NAN })
                .collect()
        })
        .collect();
}

/// Suffix maximum of `v`.
fn suffix_max(v: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    for k in (0..out.len().saturating_sub(1)).rev() {
        out[k] = out[k].max(out[k + 1]);
    }
    out
}

fn check_gamma(q: &GeneratingQuadruple, gamma: f64) -> Result<()> {
    let split = gamma_condition(q, gamma, false)?;
    if split.is_finite() {
        return Ok(());
    }
    let mut bad = Vec::new();
    for (name, v) in [("J1 (x <= 1, |z| <= 1)", split.j1), ("J2 (x <= 1, |z| > 1)", split.j2), ("J3 (x > 1)", split.j3)] {
        if !v.is_finite() {
            bad.push(name);
        }
    }
    Err(Error::Configuration(format!(
        "gamma-integrability condition fails for gamma = {gamma}: {} diverges",
        bad.join(", ")
    )))
}

/// Marcinkiewicz–Zygmund-type decay of `|X*(t) − 1(γ≥1) E X*(t)| / t^{1/γ+δ}`.
pub fn run_mz_experiment(
    q: &GeneratingQuadruple,
    gamma: f64,
    cfg: &SimConfig,
    exec: Execution,
    tol: &Tolerances,
) -> Result<GrowthReport> {
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(Error::Configuration(format!("gamma must lie in (0, 2], got {gamma}")));
    }
    check_gamma(q, gamma)?;
    if gamma == 1.0 && !q.pi().m(-1.0 - 1e-6).is_finite() {
        return Err(Error::Configuration(
            "gamma = 1 needs m_{-1-delta}(pi) < inf for some delta > 0".into(),
        ));
    }
    let times = cfg.grid.times(cfg.horizon)?;
    let center = if gamma >= 1.0 {
        analytic_mean(q, &times)?
    } else {
        vec![0.0; times.len()]
    };
    let (digest, lbl) = label(q, cfg, &format!("mz:{gamma}"));
    let mut report = GrowthReport::new("mz", digest, lbl);
    let (_, paths) = run(q, cfg, exec)?;

    let expo = 1.0 / gamma + tol.mz_excess;
    let dev: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| p.values.iter().zip(&center).map(|(x, c)| (x - c).abs()).collect())
        .collect();
    let t_max = times[times.len() - 1];
    let k_tail = first_at_least(&times, t_max / 10.0);
    let mut first = Vec::new();
    let mut tail = Vec::new();
    for d in &dev {
        let scaled: Vec<f64> = d.iter().zip(&times).map(|(v, t)| v / t.powf(expo)).collect();
        let m = suffix_max(&scaled);
        first.push(m[0]);
        tail.push(m[k_tail]);
    }
    let (mf, mt) = (median(&first), median(&tail));
    let ratio = mt / mf;
    report.criteria.push(Criterion::new(
        "mz_decay",
        ratio,
        format!("median M(T/10) / median M(t0) < {}", tol.mz_ratio),
        ratio < tol.mz_ratio,
    ));
    report.envelope_ratios = Some(RatioStats {
        min: tail.iter().copied().fold(f64::INFINITY, f64::min),
        median: mt,
        max: tail.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    });
    report.per_path = tail;
    report.notes.push(format!(
        "M(t) = max over grid u >= t of |X*(u) - center(u)| / u^{expo}; ratio threshold is a statistical acceptance choice"
    ));
    report.notes.push(format!("centered: {}", gamma >= 1.0));
    tail_rates(&mut report, &times, &dev);
    report.times = times;
    Ok(report)
}

enum LilCase {
    Gaussian,
    Jump,
}

/// Law-of-the-iterated-logarithm bands for `sup_t |X*(t) − E X*(t)| / N(t)`.
pub fn run_lil_experiment(
    q: &GeneratingQuadruple,
    cfg: &SimConfig,
    exec: Execution,
    tol: &Tolerances,
) -> Result<GrowthReport> {
    let case = match (q.lam().is_zero(), q.b() > 0.0) {
        (true, true) => LilCase::Gaussian,
        (false, false) => LilCase::Jump,
        (true, false) => {
            return Err(Error::Configuration("LIL suite needs b > 0 or a nonzero jump measure".into()))
        }
        (false, true) => {
            return Err(Error::Configuration(
                "LIL suite covers a pure Gaussian or a pure jump configuration, not both".into(),
            ))
        }
    };
    let norm = |t: f64| -> Result<f64> {
        match case {
            LilCase::Gaussian => lil_envelope(q, t),
            LilCase::Jump => jump_lil_normalizer(q, t),
        }
    };
    if let LilCase::Jump = case {
        check_gamma(q, 2.0)?;
        norm(tol.lil_t_min.max(3.0)).map_err(|e| match e {
            Error::Configuration(m) => Error::Configuration(format!("LIL suite needs finite variance: {m}")),
            other => other,
        })?;
    } else {
        norm(tol.lil_t_min.max(3.0)).map_err(|e| Error::Configuration(format!("LIL envelope unavailable: {e}")))?;
    }
    let times = cfg.grid.times(cfg.horizon)?;
    let k0 = first_at_least(&times, tol.lil_t_min);
    if k0 >= times.len() {
        return Err(Error::Configuration(format!(
            "grid has no times at or above {}",
            tol.lil_t_min
        )));
    }
    let center = analytic_mean(q, &times)?;
    let norms: Vec<f64> = times[k0..].iter().map(|&t| norm(t)).collect::<Result<_>>()?;
    let (digest, lbl) = label(q, cfg, "lil");
    let mut report = GrowthReport::new("lil", digest, lbl);
    let (_, paths) = run(q, cfg, exec)?;

    let dev: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| p.values.iter().zip(&center).map(|(x, c)| (x - c).abs()).collect())
        .collect();
    let sups: Vec<f64> = dev
        .iter()
        .map(|d| d[k0..].iter().zip(&norms).map(|(v, n)| v / n).fold(0.0, f64::max))
        .collect();
    let max = sups.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = sups.iter().copied().fold(f64::INFINITY, f64::min);
    let med = median(&sups);
    let (lo, hi) = tol.lil_max_band;
    report.criteria.push(Criterion::new(
        "lil_max",
        max,
        format!("in [{lo}, {hi}]"),
        (lo..=hi).contains(&max),
    ));
    let (lo, hi) = tol.lil_median_band;
    report.criteria.push(Criterion::new(
        "lil_median",
        med,
        format!("in [{lo}, {hi}]"),
        (lo..=hi).contains(&med),
    ));
    report.envelope_ratios = Some(RatioStats { min, median: med, max });
    report.per_path = sups;
    report.notes.push(format!(
        "normaliser: {}; bands are statistical acceptance choices",
        match case {
            LilCase::Gaussian => "Gaussian envelope",
            LilCase::Jump => "sqrt(m2(lambda) m_-2(pi)) sqrt(2 t log log t)",
        }
    ));
    tail_rates(&mut report, &times, &dev);
    report.times = times;
    Ok(report)
}

/// Growth-rate slope and doubling probe for each configuration.
pub fn run_growth_sweep(
    qs: &[GeneratingQuadruple],
    cfg: &SimConfig,
    exec: Execution,
    tol: &Tolerances,
) -> Result<Vec<GrowthReport>> {
    qs.iter().map(|q| growth_one(q, cfg, exec, tol)).collect()
}

fn growth_one(q: &GeneratingQuadruple, cfg: &SimConfig, exec: Execution, tol: &Tolerances) -> Result<GrowthReport> {
    let (digest, lbl) = label(q, cfg, "growth");
    let mut report = GrowthReport::new("growth", digest, lbl);
    let verdict = growth_exponent(&q.indices());
    let bound = verdict.exponent_bound;
    if !bound.is_finite() {
        report.skipped = Some(format!("no finite growth bound (case {})", verdict.case));
        return Ok(report);
    }
    let class = limit_class(q);
    let hurst = class.hurst().unwrap_or(bound);
    report.notes.push(format!(
        "case {}, bound {bound:.4}{}, limit class {class}",
        verdict.case,
        if verdict.log_correction { " with log t factor" } else { "" }
    ));

    let times = cfg.grid.times(cfg.horizon)?;
    let center = match analytic_mean(q, &times) {
        Ok(c) => c,
        Err(_) => {
            report.notes.push("mean infinite: center 0".into());
            vec![0.0; times.len()]
        }
    };
    let (_, paths) = run(q, cfg, exec)?;
    let dev: Vec<Vec<f64>> = paths
        .iter()
        .map(|p| p.values.iter().zip(&center).map(|(x, c)| (x - c).abs()).collect())
        .collect();
    let scale = center.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    let envelope: Vec<f64> = (0..times.len())
        .map(|k| dev.iter().map(|d| d[k]).fold(0.0, f64::max))
        .collect();
    tail_rates(&mut report, &times, &dev);
    if envelope.iter().all(|&e| e <= 1e-12 * scale) {
        report.degenerate = true;
        report.notes.push("degenerate: every path equals its center".into());
        report.times = times;
        return Ok(report);
    }

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&t, &e) in times.iter().zip(&envelope) {
        if t >= tol.sweep_t_min && e > 0.0 {
            xs.push(t.ln());
            let corr = if verdict.log_correction { loglog(t) } else { 0.0 };
            ys.push(e.ln() - corr);
        }
    }
    let fit = ols(&xs, &ys).ok_or_else(|| {
        Error::Configuration(format!("too few grid times above {} for a slope fit", tol.sweep_t_min))
    })?;
    let stat = fit.slope + tol.slope_se_mult * fit.slope_se;
    report.criteria.push(Criterion::new(
        "slope",
        stat,
        format!("slope + {} SE <= {bound:.4} + {}", tol.slope_se_mult, tol.slope_margin),
        stat <= bound + tol.slope_margin,
    ));
    report.slope = Some(fit);

    // sup over [t_min, T/2] against sup over [t_min, T] of |X* − c| / t^{H+δ}
    let t_max = times[times.len() - 1];
    let expo = hurst + tol.probe_excess;
    let k_lo = first_at_least(&times, tol.sweep_t_min);
    let k_half = times.partition_point(|&t| t <= t_max / 2.0 * (1.0 + 1e-12));
    if k_half <= k_lo {
        return Err(Error::Configuration("grid too coarse for the doubling probe".into()));
    }
    let ratios: Vec<f64> = dev
        .iter()
        .map(|d| {
            let s: Vec<f64> = d.iter().zip(&times).map(|(v, t)| v / t.powf(expo)).collect();
            let half = s[k_lo..k_half].iter().copied().fold(0.0, f64::max);
            let full = s[k_lo..].iter().copied().fold(0.0, f64::max);
            if half > 0.0 {
                full / half
            } else if full > 0.0 {
                f64::INFINITY
            } else {
                1.0
            }
        })
        .collect();
    let med = median(&ratios);
    report.criteria.push(Criterion::new(
        "doubling_probe",
        med,
        format!("median sup ratio over doubling T <= {}", tol.probe_ratio),
        med <= tol.probe_ratio,
    ));
    report.envelope_ratios = Some(RatioStats {
        min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        median: med,
        max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    });
    report.per_path = ratios;
    report.notes.push("slope margin and probe ratio are statistical acceptance choices".into());
    report.times = times;
    Ok(report)
}
