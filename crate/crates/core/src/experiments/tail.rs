use super::stats::mean_se;
use super::Tolerances;
use crate::analytics::{kernel, levy_tail_integrated, Sign};
use crate::error::{Error, Result};
use crate::measures::GeneratingQuadruple;
use crate::simulator::{map_indexed, Execution, PastWindow, PointSampler, RngStream, SimConfig, TimeGrid};

#[derive(Debug, Clone, PartialEq)]
pub struct TailLevel {
    pub level: f64,
    pub analytic: f64,
    pub empirical: f64,
    pub se: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub t: f64,
    pub replications: usize,
    pub window: PastWindow,
    pub levels: Vec<TailLevel>,
    /// Empirical counts do not increase with the level.
    pub monotone: bool,
}

impl TailReport {
    pub fn passed(&self) -> bool {
        self.monotone && self.levels.iter().all(|l| l.pass)
    }
}

/// Mean number of sampled points with `ζ f_t(ξ, τ) > r` against `η̄*_t(r)`,
/// over `cfg.n_paths` independent windows.
pub fn verify_levy_tail(
    q: &GeneratingQuadruple,
    t: f64,
    levels: &[f64],
    cfg: &SimConfig,
    exec: Execution,
    tol: &Tolerances,
) -> Result<TailReport> {
    if !q.lam().is_one_sided() {
        return Err(Error::Configuration("tail check needs a positive jump measure".into()));
    }
    if !q.pi().total_mass().is_finite() {
        return Err(Error::Configuration("tail check needs a finite pi".into()));
    }
    let eps = cfg.small_jump_cutoff;
    if let Some(r) = levels.iter().find(|&&r| !(r > eps * t)) {
        return Err(Error::Configuration(format!(
            "level {r} does not exceed eps * t = {}; unsampled small jumps could reach it",
            eps * t
        )));
    }
    let mut local = cfg.clone();
    local.horizon = t;
    local.grid = TimeGrid::List(vec![t]);
    local.past = match cfg.past {
        PastWindow::Auto => PastWindow::RateScaled(40.0),
        w => w,
    };
    local.validate()?;
    let sampler = PointSampler::new(q, &local, local.past)?;
    let analytic: Vec<f64> = levels
        .iter()
        .map(|&r| levy_tail_integrated(q, t, r, Sign::Positive).map(|e| e.value))
        .collect::<Result<_>>()?;

    let n = cfg.n_paths;
    let counts: Vec<Result<Vec<f64>>> = map_indexed(n as u64, exec, |i| {
        let mut rng = RngStream::new(cfg.seed, i).rng();
        let set = sampler.sample(&mut rng)?;
        let mut c = vec![0.0; levels.len()];
        for p in &set.points {
            let v = p.zeta * kernel(t, p.xi, p.tau);
            for (j, &r) in levels.iter().enumerate() {
                if v > r {
                    c[j] += 1.0;
                }
            }
        }
        Ok(c)
    });
    let counts: Vec<Vec<f64>> = counts.into_iter().collect::<Result<_>>()?;

    let mut out = Vec::new();
    for (j, &r) in levels.iter().enumerate() {
        let col: Vec<f64> = counts.iter().map(|c| c[j]).collect();
        let (m, se) = mean_se(&col);
        let a = analytic[j];
        let pass = if se > 0.0 {
            (m - a).abs() <= tol.tail_se_mult * se
        } else {
            m == 0.0 && a.abs() < 1e-12
        };
        out.push(TailLevel {
            level: r,
            analytic: a,
            empirical: m,
            se,
            pass,
        });
    }
    let mut order: Vec<usize> = (0..levels.len()).collect();
    order.sort_by(|&a, &b| levels[a].total_cmp(&levels[b]));
    let monotone = order
        .windows(2)
        .all(|w| out[w[1]].empirical <= out[w[0]].empirical);
    Ok(TailReport {
        t,
        replications: n,
        window: local.past,
        levels: out,
        monotone,
    })
}
