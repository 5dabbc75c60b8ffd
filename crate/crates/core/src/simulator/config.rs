use std::fmt;

use crate::error::{Error, Result};
use crate::numerics::log_grid;

/// Observation times of a simulated path.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeGrid {
    /// `t_k = t0 · ratio^k` for all `t_k ≤ T`.
    Log { t0: f64, ratio: f64 },
    /// Explicit increasing times.
    List(Vec<f64>),
}

impl TimeGrid {
    /// `n` log-spaced times from `t0` to `t1` inclusive.
    pub fn log_points(t0: f64, t1: f64, n: usize) -> Self {
        TimeGrid::List(crate::numerics::log_space(t0, t1, n))
    }

    pub fn times(&self, horizon: f64) -> Result<Vec<f64>> {
        let ts = match self {
            TimeGrid::Log { t0, ratio } => {
                if !(*ratio > 1.0) || !(*t0 > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "log grid needs t0 > 0 and ratio > 1, got ({t0}, {ratio})"
                    )));
                }
                log_grid(*t0, *ratio, horizon)
            }
            TimeGrid::List(v) => v.clone(),
        };
        if ts.is_empty() {
            return Err(Error::InvalidParameter("empty time grid".into()));
        }
        for w in ts.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter("grid times must increase".into()));
            }
        }
        if !(ts[0] > 0.0) || ts[ts.len() - 1] > horizon {
            return Err(Error::InvalidParameter(format!(
                "grid times must lie in (0, {horizon}]"
            )));
        }
        Ok(ts)
    }
}

/// Which past points are simulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PastWindow {
    /// Points with `τ ∈ (-S, 0]`.
    Uniform(f64),
    /// Points with `ξ τ > -L`, i.e. a window of length `L/ξ` per rate.
    RateScaled(f64),
    /// Rate-scaled, with `L` chosen so the past bound is below `1e-3` of
    /// the standard deviation of `X*(T)`.
    Auto,
}

impl fmt::Display for PastWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PastWindow::Uniform(s) => write!(f, "uniform:{s}"),
            PastWindow::RateScaled(l) => write!(f, "rate_scaled:{l}"),
            PastWindow::Auto => f.write_str("auto"),
        }
    }
}

/// Treatment of jumps with `|z| ≤ ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmallJumpMode {
    /// Discard them together with their mean; needs finite variation.
    Drop,
    /// Keep only their compensator (mean).
    CompensateOnly,
    /// Compensator plus a Gaussian process with the same covariance.
    GaussianRefine,
}

impl SmallJumpMode {
    pub fn name(&self) -> &'static str {
        match self {
            SmallJumpMode::Drop => "drop",
            SmallJumpMode::CompensateOnly => "compensate_only",
            SmallJumpMode::GaussianRefine => "gaussian_refine",
        }
    }
}

impl std::str::FromStr for SmallJumpMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "drop" => Ok(SmallJumpMode::Drop),
            "compensate_only" => Ok(SmallJumpMode::CompensateOnly),
            "gaussian_refine" => Ok(SmallJumpMode::GaussianRefine),
            other => Err(Error::Parse(format!("unknown small-jump mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub horizon: f64,
    pub past: PastWindow,
    pub small_jump_cutoff: f64,
    pub small_jump_mode: SmallJumpMode,
    pub grid: TimeGrid,
    pub seed: u64,
    pub n_paths: usize,
    /// Also record `(X*₋, X*₊,₁, X*₊,₂)` for one-sided λ.
    pub record_decomposition: bool,
}

impl SimConfig {
    pub fn new(horizon: f64, grid: TimeGrid) -> Self {
        SimConfig {
            horizon,
            past: PastWindow::Auto,
            small_jump_cutoff: 0.01,
            small_jump_mode: SmallJumpMode::CompensateOnly,
            grid,
            seed: 0,
            n_paths: 1,
            record_decomposition: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon must be positive, got {}",
                self.horizon
            )));
        }
        let eps = self.small_jump_cutoff;
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "small-jump cutoff must lie in [0, 1], got {eps}"
            )));
        }
        match self.past {
            PastWindow::Uniform(s) if !(s >= 0.0) => {
                return Err(Error::InvalidParameter(format!("past truncation must be >= 0, got {s}")))
            }
            PastWindow::RateScaled(l) if !(l > 0.0 && l.is_finite()) => {
                return Err(Error::InvalidParameter(format!("rate window must be positive, got {l}")))
            }
            _ => {}
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParameter("n_paths must be >= 1".into()));
        }
        self.grid.times(self.horizon)?;
        Ok(())
    }
}
