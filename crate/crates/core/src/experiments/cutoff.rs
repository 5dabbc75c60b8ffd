use super::stats::{ols, LineFit};
use super::Tolerances;
use crate::error::{Error, Result};
use crate::measures::GeneratingQuadruple;
use crate::simulator::{truncation_error, SimConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct CutoffReport {
    pub cutoffs: Vec<f64>,
    pub small_jump_std: Vec<f64>,
    /// `(2 − β₀)/2`.
    pub expected_slope: f64,
    pub fit: LineFit,
    pub pass: bool,
}

/// Log-log slope of the small-jump standard deviation against the cutoff.
pub fn verify_cutoff_scaling(
    q: &GeneratingQuadruple,
    cfg: &SimConfig,
    cutoffs: &[f64],
    tol: &Tolerances,
) -> Result<CutoffReport> {
    let beta0 = q.lam().beta0().value;
    if !(beta0 > 0.0 && beta0 < 2.0) {
        return Err(Error::Configuration(format!(
            "cutoff scaling needs 0 < beta0 < 2, got {beta0}"
        )));
    }
    let mut stds = Vec::with_capacity(cutoffs.len());
    for &eps in cutoffs {
        let mut c = cfg.clone();
        c.small_jump_cutoff = eps;
        stds.push(truncation_error(q, &c)?.small_jump_std);
    }
    let xs: Vec<f64> = cutoffs.iter().map(|e| e.ln()).collect();
    let ys: Vec<f64> = stds.iter().map(|s| s.ln()).collect();
    let fit = ols(&xs, &ys)
        .ok_or_else(|| Error::Configuration("cutoff scaling needs at least three positive cutoffs".into()))?;
    let expected_slope = (2.0 - beta0) / 2.0;
    let pass = (fit.slope - expected_slope).abs() <= tol.cutoff_slope;
    Ok(CutoffReport {
        cutoffs: cutoffs.to_vec(),
        small_jump_std: stds,
        expected_slope,
        fit,
        pass,
    })
}
