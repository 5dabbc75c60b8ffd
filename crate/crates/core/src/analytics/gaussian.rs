use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::measures::{GeneratingQuadruple, MeasureFamily, Region};
use crate::numerics::{h, loglog, one_minus_exp};
use crate::quad::Estimate;

/// `∬ f_t(x,s)² ds π(dx) = ∫ x^{-3} h(xt) π(dx)`, `h(y) = y - 1 + e^{-y}`.
pub fn kernel_l2(pi: &MeasureFamily, t: f64) -> Estimate {
    if t == 0.0 {
        return Estimate::ZERO;
    }
    pi.integrate(|x| h(x * t) / (x * x * x), Region::ALL, &[])
}

/// `Var` of the Gaussian part, `2Q(t) = b ∫ x^{-3} h(xt) π(dx)`.
pub fn gaussian_variance(q: &GeneratingQuadruple, t: f64) -> Result<Estimate> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    Ok(kernel_l2(q.pi(), t).scale(q.b()))
}

/// Variance of the jump part, `m₂(|λ|) ∬ f_t² ds π(dx)`; `+∞` reported as
/// `f64::INFINITY`.
pub fn jump_variance(q: &GeneratingQuadruple, t: f64) -> Result<Estimate> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let m2 = q.lam().abs_moment(2.0, Region::ALL)?.to_f64_lossy();
    if m2 == 0.0 || t == 0.0 {
        return Ok(Estimate::ZERO);
    }
    Ok(kernel_l2(q.pi(), t).scale(m2))
}

/// `Var X*(t)`.
pub fn total_variance(q: &GeneratingQuadruple, t: f64) -> Result<Estimate> {
    Ok(gaussian_variance(q, t)? + jump_variance(q, t)?)
}

/// `k(y) = y - 3/2 + 2e^{-y} - e^{-2y}/2`, divided by `y³`.
fn k_over_cube(y: f64) -> f64 {
    if y < 1.0 {
        // Σ_{n≥3} (-1)^n (2 - 2^{n-1}) y^{n-3} / n!
        let mut sum = 0.0f64;
        let mut fact = 6.0;
        let mut yp = 1.0;
        let mut p2 = 4.0;
        for n in 3..40 {
            let term = (2.0 - p2) * yp / fact;
            sum += if n % 2 == 0 { term } else { -term };
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            yp *= y;
            p2 *= 2.0;
            fact *= (n + 1) as f64;
        }
        sum
    } else {
        (y - 1.5 + 2.0 * (-y).exp() - 0.5 * (-2.0 * y).exp()) / (y * y * y)
    }
}

/// `∫ f_{t_i}(x,s) f_{t_j}(x,s) ds` at rate `x`.
pub fn covariance_kernel(x: f64, ti: f64, tj: f64) -> f64 {
    let (ti, tj) = if ti <= tj { (ti, tj) } else { (tj, ti) };
    if ti <= 0.0 {
        return 0.0;
    }
    let ai = one_minus_exp(x * ti) / x;
    let aj = one_minus_exp(x * tj) / x;
    let ad = one_minus_exp(x * (tj - ti)) / x;
    // s ≤ 0, plus the part of 0 < s ≤ t_i split into two nonnegative terms
    ai * aj / (2.0 * x) + k_over_cube(x * ti) * ti * ti * ti + ad * ai * ai / 2.0
}

/// `Cov(X*(t_i), X*(t_j))` per unit of `b + m₂(|λ|)`, i.e.
/// `∬ f_{t_i} f_{t_j} ds π(dx)`.
pub fn covariance(pi: &MeasureFamily, ti: f64, tj: f64) -> Estimate {
    pi.integrate(|x| covariance_kernel(x, ti, tj), Region::ALL, &[])
}

/// Almost-sure envelope of the Gaussian part.
///
/// With `m₋₂(π) < ∞` it is `√(2 · Var X*(t) · log log t)`; when π has a
/// density `c x^α` near zero with `α ∈ (0, 1)` it is
/// `σ̃ ℓ^{1/2} t^{1-α/2} √(2 log log t)` with `σ̃² = b Γ(1+α)/((2-α)(1-α))`
/// and `ℓ = c/α`.
pub fn lil_envelope(q: &GeneratingQuadruple, t: f64) -> Result<f64> {
    if !(t > std::f64::consts::E) {
        return Err(Error::Domain(format!("envelope needs t > e, got {t}")));
    }
    let ll = loglog(t);
    if q.pi().m(-2.0).is_finite() {
        let v = gaussian_variance(q, t)?.value;
        return Ok((2.0 * v * ll).sqrt());
    }
    match q.pi().regular_variation_at_zero() {
        Some((alpha, ell)) if alpha > 0.0 && alpha < 1.0 => {
            let s2 = q.b() * gamma(1.0 + alpha) / ((2.0 - alpha) * (1.0 - alpha));
            Ok((s2 * ell).sqrt() * t.powf(1.0 - alpha / 2.0) * (2.0 * ll).sqrt())
        }
        _ => Err(Error::Hypothesis(
            "envelope needs m_{-2}(pi) < inf or a regularly varying density at zero".into(),
        )),
    }
}

/// Normaliser `√(m₂(|λ|) m₋₂(π)) √(2 t log log t)` for the jump part.
pub fn jump_lil_normalizer(q: &GeneratingQuadruple, t: f64) -> Result<f64> {
    if !(t > std::f64::consts::E) {
        return Err(Error::Domain(format!("normaliser needs t > e, got {t}")));
    }
    let m2 = q.lam().abs_moment(2.0, Region::ALL)?;
    let mm2 = q.pi().m(-2.0);
    match (m2.value(), mm2.value()) {
        (Some(a), Some(b)) => Ok((a * b).sqrt() * (2.0 * t * loglog(t)).sqrt()),
        _ => Err(Error::Configuration(
            "jump LIL needs m_2(lambda) < inf and m_{-2}(pi) < inf".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Drift, LevyFamily};
    use approx::assert_relative_eq;

    fn gauss(pi: MeasureFamily, b: f64) -> GeneratingQuadruple {
        GeneratingQuadruple::new(Drift::Explicit(0.0), b, LevyFamily::zero(), pi).unwrap()
    }

    #[test]
    fn point_mass_variance() {
        let q = gauss(MeasureFamily::point_mass(1.0).unwrap(), 2.0);
        let v = gaussian_variance(&q, 1.0).unwrap().value;
        assert_relative_eq!(v, 2.0 * (-1f64).exp(), max_relative = 1e-14);
        assert!((v - 0.7358).abs() < 1e-4);
        assert_eq!(gaussian_variance(&q, 0.0).unwrap().value, 0.0);
    }

    #[test]
    fn covariance_diagonal_is_variance() {
        let pi = MeasureFamily::power_density(0.5).unwrap();
        for t in [0.01, 0.5, 3.0, 40.0] {
            let c = covariance(&pi, t, t).value;
            let v = kernel_l2(&pi, t).value;
            assert_relative_eq!(c, v, max_relative = 1e-8);
        }
    }

    #[test]
    fn covariance_matches_stationary_increments() {
        // Cov(s,t) = Q(s) + Q(t) - Q(|t-s|) with 2Q = Var
        for x in [1e-3, 0.3, 1.0, 7.0] {
            for (s, t) in [(0.5, 2.0), (1.0, 1.0), (3.0, 10.0), (0.01, 0.02)] {
                let q = |u: f64| h(x * u) / (x * x * x) / 2.0;
                let want = q(s) + q(t) - q(f64::abs(t - s));
                assert_relative_eq!(covariance_kernel(x, s, t), want, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn long_run_variance_ratio() {
        let q = gauss(MeasureFamily::point_mass(1.0).unwrap(), 1.0);
        let t = 1e4;
        let v = gaussian_variance(&q, t).unwrap().value;
        assert!((v / t - 1.0).abs() < 0.01);
    }

    #[test]
    fn envelopes() {
        let q = gauss(MeasureFamily::point_mass(1.0).unwrap(), 1.0);
        let e = lil_envelope(&q, std::f64::consts::E.powi(2)).unwrap();
        assert!(e.is_finite() && e > 0.0);
        assert!(lil_envelope(&q, 2.0).is_err());
        let rv = gauss(MeasureFamily::power_density(0.5).unwrap(), 1.0);
        let t = 1e4;
        let env = lil_envelope(&rv, t).unwrap();
        let v = gaussian_variance(&rv, t).unwrap().value;
        let ratio = env * env / (2.0 * loglog(t)) / v;
        assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
    }
}
