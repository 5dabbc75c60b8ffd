use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::measures::{GeneratingQuadruple, Region};
use crate::numerics::one_minus_exp;

/// `E X*(t) = t · m₋₁(π) · (a + ∫_{|z|>1} z λ(dz))`.
pub fn mean_integrated(q: &GeneratingQuadruple, t: f64) -> Result<ExtReal> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {t}")));
    }
    let large = q.large_jump_mean()?;
    let per_unit = match large {
        ExtReal::Finite(m) => ExtReal::Finite(q.a() + m),
        other => other,
    };
    let scale = t * q.m_minus1();
    Ok(match per_unit {
        ExtReal::Finite(v) => ExtReal::Finite(scale * v),
        ExtReal::PosInf => ExtReal::PosInf.scale(scale),
        ExtReal::Undefined => ExtReal::Undefined,
    })
}

/// Outcome of the β-moment criterion for `X*(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MomentVerdict {
    Finite,
    Infinite,
    /// Decided by the value of `∫_{(1,∞)} x^{-β} π(dx) ∫_x^∞ λ̄(z) z^{β-1} dz`.
    FiniteIf(ExtReal),
}

impl MomentVerdict {
    pub fn is_finite(&self) -> bool {
        match self {
            MomentVerdict::Finite => true,
            MomentVerdict::Infinite => false,
            MomentVerdict::FiniteIf(v) => v.is_finite(),
        }
    }
}

/// Whether `E|X*(t)|^β < ∞`.
pub fn moment_finite(q: &GeneratingQuadruple, beta: f64) -> Result<MomentVerdict> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    let lam = q.lam();
    if !lam.abs_moment(beta, Region::above(1.0))?.is_finite() {
        return Ok(MomentVerdict::Infinite);
    }
    if beta >= 1.0 || q.pi().m(-beta).is_finite() {
        return Ok(MomentVerdict::Finite);
    }
    let pi = q.pi();
    let breaks = [lam.pos().breakpoints(), lam.neg().breakpoints()].concat();
    // ∫_x^∞ λ̄(z) z^{β-1} dz = β^{-1} ∫_{|z|>x} (|z|^β - x^β) λ(dz)
    let est = pi.integrate(
        |x| {
            let mb = lam
                .abs_moment(beta, Region::above(x))
                .map(|v| v.to_f64_lossy())
                .unwrap_or(f64::NAN);
            let tail = lam.tail(x);
            x.powf(-beta) * (mb - x.powf(beta) * tail) / beta
        },
        Region::above(1.0),
        &breaks,
    );
    Ok(MomentVerdict::FiniteIf(ExtReal::Finite(est.value)))
}

/// Outcome of the exponential-moment criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpMoment {
    Finite,
    Infinite,
    /// `s` sits on the critical rate (relative tolerance `1e-12`).
    Boundary,
}

fn k0(q: &GeneratingQuadruple, t: f64) -> f64 {
    let e0 = q.pi().eps0();
    if e0 == 0.0 {
        t
    } else {
        one_minus_exp(e0 * t) / e0
    }
}

/// Critical rate `s* = θ / K₀(t)` with `θ` the exponential decay rate of the
/// positive jump tail.
pub fn exp_moment_threshold(q: &GeneratingQuadruple, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    Ok(q.lam().pos().exp_rate() / k0(q, t))
}

/// Whether `E e^{s X*(t)} < ∞`.
pub fn exp_moment(q: &GeneratingQuadruple, t: f64, s: f64) -> Result<ExpMoment> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("rate s must be positive, got {s}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    let theta = q.lam().pos().exp_rate();
    if theta.is_infinite() {
        return Ok(ExpMoment::Finite);
    }
    let ks = k0(q, t) * s;
    Ok(if (ks - theta).abs() <= 1e-12 * theta {
        ExpMoment::Boundary
    } else if ks < theta {
        ExpMoment::Finite
    } else {
        ExpMoment::Infinite
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Atom, Drift, JumpLaw, LevyFamily, LevyPart, MeasureFamily, PiVariant, Segment};
    use approx::assert_relative_eq;

    fn q(lam: LevyFamily, pi: MeasureFamily) -> GeneratingQuadruple {
        GeneratingQuadruple::new(Drift::Natural, 0.0, lam, pi).unwrap()
    }

    fn delta1() -> MeasureFamily {
        MeasureFamily::point_mass(1.0).unwrap()
    }

    #[test]
    fn mean_of_unit_jumps() {
        let lam = LevyFamily::positive(LevyPart::CompoundPoisson {
            rate: 2.0,
            jumps: JumpLaw::Fixed { size: 1.0 },
        })
        .unwrap();
        assert_eq!(mean_integrated(&q(lam, delta1()), 3.0).unwrap(), ExtReal::Finite(6.0));
    }

    #[test]
    fn mean_of_symmetric_is_zero() {
        let lam = LevyFamily::symmetric(LevyPart::Sum(vec![
            LevyPart::StableLike { beta0: 1.5, c: 1.0 },
            LevyPart::ParetoTail { eta: 3.0, scale: 1.0 },
        ]))
        .unwrap();
        assert_eq!(mean_integrated(&q(lam, delta1()), 5.0).unwrap(), ExtReal::Finite(0.0));
    }

    #[test]
    fn mean_with_heavy_tail_is_infinite() {
        let lam = LevyFamily::positive(LevyPart::ParetoTail { eta: 0.5, scale: 1.0 }).unwrap();
        assert_eq!(mean_integrated(&q(lam, delta1()), 1.0).unwrap(), ExtReal::PosInf);
        assert!(mean_integrated(&q(LevyFamily::zero(), delta1()), -1.0).is_err());
    }

    #[test]
    fn moment_cases() {
        let pareto2 = LevyFamily::positive(LevyPart::ParetoTail { eta: 2.0, scale: 1.0 }).unwrap();
        assert_eq!(moment_finite(&q(pareto2, delta1()), 3.0).unwrap(), MomentVerdict::Infinite);
        let bounded = LevyFamily::positive(LevyPart::CompoundPoisson {
            rate: 1.0,
            jumps: JumpLaw::Uniform { lo: 0.0, hi: 4.0 },
        })
        .unwrap();
        assert_eq!(moment_finite(&q(bounded, delta1()), 1.5).unwrap(), MomentVerdict::Finite);
        let pareto1 = LevyFamily::positive(LevyPart::ParetoTail { eta: 1.0, scale: 1.0 }).unwrap();
        let pd = MeasureFamily::power_density(0.2).unwrap();
        assert_eq!(moment_finite(&q(pareto1, pd), 0.5).unwrap(), MomentVerdict::Finite);
    }

    #[test]
    fn moment_condition_integral() {
        // for β < 1 a valid π always has m₋β(π) < ∞; the explicit integral is
        // reached only outside the admissible class
        let lam = LevyFamily::positive(LevyPart::ParetoTail { eta: 1.0, scale: 1.0 }).unwrap();
        let pd = MeasureFamily::power_density(0.2).unwrap();
        assert_eq!(moment_finite(&q(lam.clone(), pd), 0.9).unwrap(), MomentVerdict::Finite);
        let tab = MeasureFamily::new_unchecked(PiVariant::Tabulated {
            atoms: vec![Atom { x: 2.0, mass: 1.0 }],
            segments: vec![Segment {
                lo: 0.0,
                hi: 1.0,
                coef: 1.0,
                power: -0.2,
            }],
        })
        .unwrap();
        let qq = GeneratingQuadruple::new_unchecked(Drift::Explicit(0.0), 0.0, lam, tab).unwrap();
        // x = 2: 2^{-0.9} ∫_2^∞ z^{-1} z^{-0.1} dz = 2^{-0.9} · 2^{-0.1} / 0.1
        match moment_finite(&qq, 0.9).unwrap() {
            MomentVerdict::FiniteIf(ExtReal::Finite(val)) => {
                assert_relative_eq!(val, 0.5 / 0.1, max_relative = 1e-10)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exponential_moment_threshold() {
        // density e^{-2z} on (1,∞): rate e^{-2}/2 with shifted Exp(2) sizes
        let lam = LevyFamily::positive(LevyPart::CompoundPoisson {
            rate: (-2f64).exp() / 2.0,
            jumps: JumpLaw::ShiftedExponential { shift: 1.0, rate: 2.0 },
        })
        .unwrap();
        let qq = q(lam, delta1());
        let s_star = exp_moment_threshold(&qq, 1.0).unwrap();
        assert_relative_eq!(s_star, 2.0 / (1.0 - (-1f64).exp()), max_relative = 1e-14);
        assert!((s_star - 3.1639).abs() < 1e-4);
        assert_eq!(exp_moment(&qq, 1.0, 3.0).unwrap(), ExpMoment::Finite);
        assert_eq!(exp_moment(&qq, 1.0, 3.2).unwrap(), ExpMoment::Infinite);
        assert_eq!(exp_moment(&qq, 1.0, s_star).unwrap(), ExpMoment::Boundary);
    }

    #[test]
    fn exponential_moment_bounded_and_heavy() {
        let bounded = LevyFamily::positive(LevyPart::CompoundPoisson {
            rate: 1.0,
            jumps: JumpLaw::Fixed { size: 5.0 },
        })
        .unwrap();
        assert_eq!(exp_moment(&q(bounded, delta1()), 10.0, 1e6).unwrap(), ExpMoment::Finite);
        let heavy = LevyFamily::positive(LevyPart::ParetoTail { eta: 4.0, scale: 1.0 }).unwrap();
        assert_eq!(exp_moment(&q(heavy, delta1()), 1.0, 1e-6).unwrap(), ExpMoment::Infinite);
    }
}
