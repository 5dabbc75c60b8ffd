use std::fmt;

use super::config::{PastWindow, SimConfig};
use crate::analytics::{kernel_l2, total_variance};
use crate::error::{Error, Result};
use crate::measures::{GeneratingQuadruple, MeasureFamily, Region};
use crate::numerics::one_minus_exp;
use crate::quad::Estimate;

/// Bound on the mean absolute contribution of the neglected past.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PastBound {
    Certified(f64),
    /// `m₁(|λ|) = ∞`; no mean bound is available.
    NotCertified,
}

impl PastBound {
    pub fn value(&self) -> Option<f64> {
        match self {
            PastBound::Certified(v) => Some(*v),
            PastBound::NotCertified => None,
        }
    }
}

impl fmt::Display for PastBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PastBound::Certified(v) => write!(f, "{v:e}"),
            PastBound::NotCertified => f.write_str("not_certified"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorCertificate {
    pub past_bound: PastBound,
    /// Standard deviation at `T` of the compensated jumps with `|z| ≤ ε`.
    pub small_jump_std: f64,
}

/// `∫ x^{-2} (1 - e^{-xt}) w(x) π(dx)`: the part of `∬ f_t π(dx) ds` lying
/// outside the simulated window, with `w = e^{-xS}` or `e^{-L}`.
pub fn past_mass(pi: &MeasureFamily, window: PastWindow, t: f64) -> Estimate {
    match window {
        PastWindow::Uniform(s) => pi.integrate(
            |x| one_minus_exp(x * t) / (x * x) * (-x * s).exp(),
            Region::ALL,
            &[],
        ),
        PastWindow::RateScaled(l) => pi
            .integrate(|x| one_minus_exp(x * t) / (x * x), Region::ALL, &[])
            .scale((-l).exp()),
        PastWindow::Auto => Estimate::new(f64::NAN, f64::NAN),
    }
}

/// Replaces [`PastWindow::Auto`] by a concrete rate-scaled window.
pub fn resolve_window(q: &GeneratingQuadruple, cfg: &SimConfig) -> Result<PastWindow> {
    if cfg.past != PastWindow::Auto {
        return Ok(cfg.past);
    }
    let t = cfg.horizon;
    let lam = q.lam();
    let m1 = lam.abs_moment(1.0, Region::ALL)?;
    let m1_eff = match m1 {
        crate::ExtReal::Finite(v) => v,
        _ => {
            let above = if cfg.small_jump_cutoff > 0.0 {
                lam.abs_moment(1.0, Region::above(cfg.small_jump_cutoff))?
            } else {
                m1
            };
            match above.value() {
                Some(v) => v,
                None => return Ok(PastWindow::RateScaled(30.0)),
            }
        }
    };
    let unit = m1_eff
        * q.pi()
            .integrate(|x| one_minus_exp(x * t) / (x * x), Region::ALL, &[])
            .value;
    if !(unit > 0.0) {
        return Ok(PastWindow::RateScaled(10.0));
    }
    let var = total_variance(q, t)?.value;
    let scale = if var.is_finite() && var > 0.0 {
        var.sqrt()
    } else {
        m1_eff * t * q.m_minus1()
    };
    let l = (unit / (1e-3 * scale)).ln();
    Ok(PastWindow::RateScaled(if l.is_finite() { l.clamp(10.0, 60.0) } else { 30.0 }))
}

/// Error certificate of a simulation configuration.
pub fn truncation_error(q: &GeneratingQuadruple, cfg: &SimConfig) -> Result<ErrorCertificate> {
    cfg.validate()?;
    let window = resolve_window(q, cfg)?;
    let t = cfg.horizon;
    let past_bound = match q.lam().abs_moment(1.0, Region::ALL)? {
        crate::ExtReal::Finite(m1) => {
            PastBound::Certified(if m1 == 0.0 { 0.0 } else { m1 * past_mass(q.pi(), window, t).value })
        }
        _ => PastBound::NotCertified,
    };
    let eps = cfg.small_jump_cutoff;
    let small_jump_std = if eps == 0.0 {
        0.0
    } else {
        let m2 = q
            .lam()
            .abs_moment(2.0, Region::new(0.0, eps)?)?
            .value()
            .ok_or_else(|| Error::Numeric("small jumps have infinite second moment".into()))?;
        (m2 * kernel_l2(q.pi(), t).value).sqrt()
    };
    Ok(ErrorCertificate {
        past_bound,
        small_jump_std,
    })
}
