use std::fmt;

use super::{Index, LevyFamily, MeasureFamily, Region};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// How the drift `a` is fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Drift {
    /// `a = ∫_{|z|≤1} z λ(dz)` when `∫_{|z|≤1} |z| λ(dz) < ∞`, else `a = 0`.
    Natural,
    /// User-given drift, no centering convention applied.
    Explicit(f64),
}

/// The generating quadruple `(a, b, λ, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingQuadruple {
    a: f64,
    drift: Drift,
    b: f64,
    lam: LevyFamily,
    pi: MeasureFamily,
}

impl GeneratingQuadruple {
    /// Builds a quadruple, re-checking the existence conditions of both
    /// measures.
    pub fn new(drift: Drift, b: f64, lam: LevyFamily, pi: MeasureFamily) -> Result<Self> {
        pi.check_existence()?;
        lam.check_existence()?;
        Self::new_unchecked(drift, b, lam, pi)
    }

    /// Builds a quadruple without the existence conditions on λ and π.
    pub fn new_unchecked(drift: Drift, b: f64, lam: LevyFamily, pi: MeasureFamily) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "b must be a finite nonnegative variance, got {b}"
            )));
        }
        let a = match drift {
            Drift::Explicit(a) => {
                if !a.is_finite() {
                    return Err(Error::InvalidParameter(format!("drift a must be finite, got {a}")));
                }
                a
            }
            Drift::Natural => {
                if lam.finite_variation() {
                    lam.signed_first_moment(Region::UNIT)?.value().unwrap_or(0.0)
                } else {
                    0.0
                }
            }
        };
        Ok(GeneratingQuadruple {
            a,
            drift,
            b,
            lam,
            pi,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn drift(&self) -> Drift {
        self.drift
    }

    pub fn lam(&self) -> &LevyFamily {
        &self.lam
    }

    pub fn pi(&self) -> &MeasureFamily {
        &self.pi
    }

    /// `m₋₁(π)`, finite for every valid quadruple.
    pub fn m_minus1(&self) -> f64 {
        self.pi.m(-1.0).to_f64_lossy()
    }

    pub fn indices(&self) -> IndexTriple {
        compute_indices(self)
    }

    /// `∫_{|z|>1} z λ(dz)` (signed).
    pub fn large_jump_mean(&self) -> Result<ExtReal> {
        self.lam.signed_first_moment(Region::above(1.0))
    }
}

impl fmt::Display for GeneratingQuadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let drift = match self.drift {
            Drift::Natural => "natural".to_string(),
            Drift::Explicit(a) => format!("{a}"),
        };
        write!(f, "Quadruple(a={drift},b={},lam={},pi={})", self.b, self.lam, self.pi)
    }
}

/// `(α₀, β₀, η∞)` with achieved flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexTriple {
    pub alpha: Index,
    pub beta: Index,
    pub eta: Index,
}

impl IndexTriple {
    /// Raw index values.
    pub fn raw(&self) -> (f64, f64, f64) {
        (self.alpha.value, self.beta.value, self.eta.value)
    }

    /// Working values: an index that is not achieved is moved by `offset`
    /// into its admissible side (`α < α₀`, `β > β₀`, `η < η∞`).
    pub fn working(&self, offset: f64) -> (f64, f64, f64) {
        let down = |i: Index| {
            if i.achieved || i.is_infinite() {
                i.value
            } else {
                (i.value - offset).max(0.0)
            }
        };
        let beta = if self.beta.achieved {
            self.beta.value
        } else {
            (self.beta.value + offset).min(2.0)
        };
        (down(self.alpha), beta, down(self.eta))
    }
}

/// Indices of a quadruple, read off the family parameters.
pub fn compute_indices(q: &GeneratingQuadruple) -> IndexTriple {
    IndexTriple {
        alpha: q.pi.alpha0(),
        beta: q.lam.beta0(),
        eta: q.lam.eta_inf(),
    }
}
