//! Closed-form and quadrature quantities of the integrated process `X*(t)`.

mod gaussian;
mod growth;
mod moments;
mod tail;

pub use gaussian::{
    covariance, covariance_kernel, gaussian_variance, jump_lil_normalizer, jump_variance,
    kernel_l2, lil_envelope, total_variance,
};
pub use growth::{
    case_value, growth_exponent, limit_class, to_rational, GrowthCase, GrowthVerdict, LimitClass,
};
pub use moments::{exp_moment, exp_moment_threshold, mean_integrated, moment_finite, ExpMoment, MomentVerdict};
pub use tail::{levy_tail_integrated, tail_asymptote_constant, tail_asymptote_inner, Sign};

use crate::numerics::one_minus_exp;

/// Kernel `f_t(x, s)` with which a point at rate `x` and time `s`
/// contributes to `X*(t)`.
pub fn kernel(t: f64, x: f64, s: f64) -> f64 {
    if s <= 0.0 {
        one_minus_exp(x * t) / x * (x * s).exp()
    } else if s <= t {
        one_minus_exp(x * (t - s)) / x
    } else {
        0.0
    }
}
