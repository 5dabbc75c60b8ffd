//! Statistical suites that compare simulated paths with almost-sure growth
//! laws and with the analytic oracles.

mod cutoff;
mod exotic;
mod growth;
mod report;
pub mod stats;
mod tail;

pub use cutoff::{verify_cutoff_scaling, CutoffReport};
pub use exotic::{exotic_quadruple, verify_exotic, ExoticReport, ExoticRow};
pub use growth::{run_growth_sweep, run_lil_experiment, run_mz_experiment};
pub use report::{digest, Criterion, GrowthReport, RatioStats, Verdict};
pub use tail::{verify_levy_tail, TailLevel, TailReport};

/// Acceptance thresholds of the suites.
#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Tail `M` must fall below this fraction of the initial `M`.
    pub mz_ratio: f64,
    /// `δ` in the normalisation `t^{1/γ+δ}`.
    pub mz_excess: f64,
    /// Start of the LIL window.
    pub lil_t_min: f64,
    pub lil_max_band: (f64, f64),
    pub lil_median_band: (f64, f64),
    /// Start of the slope-fit window.
    pub sweep_t_min: f64,
    pub slope_margin: f64,
    pub slope_se_mult: f64,
    /// `δ` in the probe normalisation `t^{H+δ}`.
    pub probe_excess: f64,
    pub probe_ratio: f64,
    pub tail_se_mult: f64,
    /// Allowed gap between fitted and predicted cutoff slope.
    pub cutoff_slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            mz_ratio: 0.5,
            mz_excess: 0.1,
            lil_t_min: 1e3,
            lil_max_band: (0.3, 1.6),
            lil_median_band: (0.4, 1.3),
            sweep_t_min: 1e2,
            slope_margin: 0.15,
            slope_se_mult: 2.0,
            probe_excess: 0.1,
            probe_ratio: 1.1,
            tail_se_mult: 3.0,
            cutoff_slope: 0.02,
        }
    }
}
