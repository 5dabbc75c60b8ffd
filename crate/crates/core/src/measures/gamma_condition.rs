use super::{GeneratingQuadruple, NearZero, Region, SmallJumpProfile};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// The three pieces of `∬ (|z|/x)^γ 1(|z| > x) π(dx) λ(dz)`:
/// `J₁` (x ≤ 1, |z| ≤ 1), `J₂` (x ≤ 1, |z| > 1) and `J₃` (x > 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSplit {
    pub j1: ExtReal,
    pub j2: ExtReal,
    pub j3: ExtReal,
    pub total: ExtReal,
    /// Absolute quadrature error estimate of a finite total.
    pub abs_err: f64,
}

impl GammaSplit {
    pub fn is_finite(&self) -> bool {
        self.total.is_finite()
    }
}

/// Whether `∫_{(0,1]} x^{-γ} π(dx) ∫_{(x,1]} z^γ λ_leaf(dz)` is finite,
/// from the small-scale profiles of π and of one λ leaf.
pub(crate) fn small_scale_finite(nz: NearZero, leaf: SmallJumpProfile, gamma: f64) -> bool {
    match (nz, leaf) {
        (NearZero::Empty, _) | (_, SmallJumpProfile::None) => true,
        (NearZero::Dyadic(a), SmallJumpProfile::Dyadic(b)) => {
            let p = 1.0 + a;
            if gamma < b {
                gamma < 2.0 * p - b
            } else {
                gamma < p
            }
        }
        (NearZero::Power(p), SmallJumpProfile::Power(beta))
        | (NearZero::Power(p), SmallJumpProfile::Dyadic(beta)) => p > gamma.max(beta),
        (NearZero::Dyadic(a), SmallJumpProfile::Power(beta)) => 1.0 + a > gamma.max(beta),
    }
}

/// Evaluates the γ-integrability condition by its `J₁ + J₂ + J₃` split.
/// With `restrict_large` only jumps `|z| > 1` are counted (`J₁ = 0`).
/// Divergence is decided from the family parameters; finite values come
/// from quadrature.
pub fn gamma_condition(q: &GeneratingQuadruple, gamma: f64, restrict_large: bool) -> Result<GammaSplit> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::Domain(format!("gamma must be positive, got {gamma}")));
    }
    let pi = q.pi();
    let lam = q.lam();
    let mut abs_err = 0.0;

    let j1 = if restrict_large {
        ExtReal::ZERO
    } else {
        let nz = pi.near_zero();
        let finite = lam
            .parts()
            .iter()
            .flat_map(|p| p.profiles())
            .all(|prof| small_scale_finite(nz, prof, gamma));
        if !finite {
            ExtReal::PosInf
        } else {
            let breaks = [lam.pos().breakpoints(), lam.neg().breakpoints()].concat();
            let inner = |x: f64| -> f64 {
                if x >= 1.0 {
                    return 0.0;
                }
                lam.parts()
                    .iter()
                    .map(|p| {
                        p.moment(gamma, Region { lo: x, hi: 1.0 })
                            .map(|v| v.to_f64_lossy())
                            .unwrap_or(0.0)
                    })
                    .sum::<f64>()
            };
            let est = pi.integrate(|x| x.powf(-gamma) * inner(x), Region::UNIT, &breaks);
            abs_err += est.abs_err;
            ExtReal::Finite(est.value)
        }
    };

    let pi_small = pi.moment(-gamma, Region::UNIT)?;
    let lam_large = lam.abs_moment(gamma, Region::above(1.0))?;
    let j2 = pi_small.mul_nonneg(lam_large);

    let pi_large_mass = pi.tail(1.0);
    let j3 = if pi_large_mass == 0.0 {
        ExtReal::ZERO
    } else if !lam_large.is_finite() {
        ExtReal::PosInf
    } else {
        let breaks = [lam.pos().breakpoints(), lam.neg().breakpoints()].concat();
        let est = pi.integrate(
            |x| {
                let m = lam
                    .abs_moment(gamma, Region::above(x))
                    .map(|v| v.to_f64_lossy())
                    .unwrap_or(0.0);
                x.powf(-gamma) * m
            },
            Region::above(1.0),
            &breaks,
        );
        abs_err += est.abs_err;
        ExtReal::Finite(est.value)
    };

    let total = j1 + j2 + j3;
    Ok(GammaSplit {
        j1,
        j2,
        j3,
        total,
        abs_err: if total.is_finite() { abs_err } else { 0.0 },
    })
}

/// `∫ π((0, |z|)) λ(dz) = ∫ λ̄(x) π(dx)`.
pub fn zero_order_condition(q: &GeneratingQuadruple) -> ExtReal {
    let pi = q.pi();
    let lam = q.lam();
    let nz = pi.near_zero();
    let finite = lam
        .parts()
        .iter()
        .flat_map(|p| p.profiles())
        .all(|prof| small_scale_finite(nz, prof, 0.0));
    if !finite {
        return ExtReal::PosInf;
    }
    let breaks = [lam.pos().breakpoints(), lam.neg().breakpoints()].concat();
    // λ̄(x) is left-continuous at its jumps only up to a null set
    let est = pi.integrate(|x| lam.tail(x), Region::ALL, &breaks);
    ExtReal::Finite(est.value)
}
