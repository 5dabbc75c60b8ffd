use crate::error::{Error, Result};
use crate::measures::{integrate_density, GeneratingQuadruple, LevyPart, Region};
use crate::numerics::one_minus_exp;
use crate::quad::Estimate;

/// Which half of a signed jump measure to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

fn part(q: &GeneratingQuadruple, sign: Sign) -> &LevyPart {
    match sign {
        Sign::Positive => q.lam().pos(),
        Sign::Negative => q.lam().neg(),
    }
}

/// `∫_{z₀}^∞ λ̄(z) / (z - xr) dz` with `z₀ = xr / (1 - e^{-xt})`.
///
/// With `u = xr/z` the integral becomes `∫_0^{u₀} λ̄(xr/u) / (u(1-u)) du`,
/// `u₀ = 1 - e^{-xt}`; the further change `u = 1 - e^{-w}` gives
/// `∫_0^{xt} λ̄(xr/u(w)) / u(w) dw`, free of cancellation near `u₀`.
fn inner(lam: &LevyPart, breaks: &[f64], sup: f64, x: f64, t: f64, r: f64) -> Estimate {
    let xr = x * r;
    let wmax = x * t;
    // λ̄(xr/u) = 0 once xr/u ≥ sup, i.e. u ≤ xr/sup
    let w_lo = if sup.is_finite() {
        let u = xr / sup;
        if u >= 1.0 {
            return Estimate::ZERO;
        }
        -(-u).ln_1p()
    } else {
        0.0
    };
    if w_lo >= wmax {
        return Estimate::ZERO;
    }
    let wb: Vec<f64> = breaks
        .iter()
        .filter(|&&z| z > xr)
        .map(|&z| -(-(xr / z)).ln_1p())
        .filter(|&w| w > w_lo && w < wmax)
        .collect();
    let g = |w: f64| {
        let u = one_minus_exp(w);
        if u <= 0.0 {
            return 0.0;
        }
        lam.tail(xr / u) / u
    };
    integrate_density(g, w_lo, wmax, &wb, false)
}

/// Tail `η̄*_t(r)` of the Lévy measure of `X*(t)` for one sign of λ.
pub fn levy_tail_integrated(q: &GeneratingQuadruple, t: f64, r: f64, sign: Sign) -> Result<Estimate> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("level must be positive, got {r}")));
    }
    let lam = part(q, sign);
    if lam.is_zero() {
        return Ok(Estimate::ZERO);
    }
    let breaks = lam.breakpoints();
    let sup = lam.sup_support();
    Ok(q.pi().integrate(
        |x| inner(lam, &breaks, sup, x, t, r).value / x,
        Region::ALL,
        &[],
    ))
}

/// `x^{-γ} ∫_0^{1-e^{-xt}} y^{γ-1} (1-y)^{-1} dy`, computed as
/// `x^{-γ} ∫_0^{xt} (1 - e^{-w})^{γ-1} dw`.
pub fn tail_asymptote_inner(x: f64, t: f64, gamma: f64) -> f64 {
    let i = integrate_density(
        |w| one_minus_exp(w).powf(gamma - 1.0),
        0.0,
        x * t,
        &[],
        false,
    );
    i.value * x.powf(-gamma)
}

/// `C(t, γ)` in `η̄*_t(r) ~ λ̄(r) C(t, γ)` as `r → ∞`, for a positive part
/// whose tail is regularly varying with index `-γ`.
pub fn tail_asymptote_constant(q: &GeneratingQuadruple, t: f64, gamma: f64) -> Result<Estimate> {
    if !(t > 0.0) || !(gamma > 0.0) {
        return Err(Error::Domain(format!(
            "need t > 0 and gamma > 0, got ({t}, {gamma})"
        )));
    }
    let lam = q.lam().pos();
    let eta = lam.eta_inf();
    let has_pareto = lam
        .leaves()
        .iter()
        .any(|(_, l)| matches!(l, LevyPart::ParetoTail { eta, scale } if *scale > 0.0 && *eta == gamma));
    if !(has_pareto && eta.value == gamma) {
        return Err(Error::Hypothesis(format!(
            "positive jump tail is not regularly varying with index -{gamma}"
        )));
    }
    let pi = q.pi();
    let alpha0 = pi.alpha0().value;
    let eps = if alpha0.is_finite() { alpha0.min(1.0) / 2.0 } else { 0.5 };
    let ok = eps > 0.0 && pi.m(-1.0 - eps).is_finite() && pi.m(eps - gamma).is_finite();
    if !ok {
        return Err(Error::Hypothesis(
            "integral of x^{-1-e} pi(dx) + x^{e-gamma} pi(dx) is infinite for every small e > 0".into(),
        ));
    }
    Ok(pi.integrate(
        |x| tail_asymptote_inner(x, t, gamma) / x,
        Region::ALL,
        &[],
    ))
}
