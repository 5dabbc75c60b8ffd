//! Parametric families for the mean-reversion measure π and the jump measure λ,
//! the generating quadruple, index computations and the γ-integrability test.

mod gamma_condition;
mod levy;
mod pi;
mod quadruple;
pub mod text;

pub use gamma_condition::{gamma_condition, zero_order_condition, GammaSplit};
pub use levy::{JumpLaw, JumpSampler, LevyFamily, LevyPart, SmallJumpProfile};
pub use pi::{Atom, MeasureFamily, PiSampler, PiVariant, Segment};
pub use quadruple::{compute_indices, Drift, GeneratingQuadruple, IndexTriple};

use crate::error::{Error, Result};
use crate::quad::{self, Estimate, Tolerance};

/// Half-open interval `(lo, hi]` of the positive half-line; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub lo: f64,
    pub hi: f64,
}

impl Region {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo < 0.0 || lo == f64::INFINITY {
            return Err(Error::Domain(format!("invalid region ({lo}, {hi}]")));
        }
        if hi <= lo {
            return Err(Error::Domain(format!("empty or reversed region ({lo}, {hi}]")));
        }
        Ok(Region { lo, hi })
    }

    /// `(0, ∞)`
    pub const ALL: Region = Region {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    /// `(0, 1]`
    pub const UNIT: Region = Region { lo: 0.0, hi: 1.0 };

    /// `(c, ∞)`
    pub fn above(c: f64) -> Region {
        Region {
            lo: c.max(0.0),
            hi: f64::INFINITY,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x <= self.hi
    }

    /// Intersection with `(lo, hi]`, or `None` when empty.
    pub fn clip(&self, lo: f64, hi: f64) -> Option<Region> {
        let l = self.lo.max(lo);
        let h = self.hi.min(hi);
        (h > l).then_some(Region { lo: l, hi: h })
    }
}

/// A Blumenthal–Getoor-type index together with whether the defining
/// integral is finite at the index itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Index {
    pub value: f64,
    pub achieved: bool,
}

impl Index {
    pub const fn new(value: f64, achieved: bool) -> Self {
        Index { value, achieved }
    }

    pub const fn infinite() -> Self {
        Index {
            value: f64::INFINITY,
            achieved: false,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Behaviour of π near zero, as used by the small-scale part of the γ-test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NearZero {
    /// No mass in a neighbourhood of zero.
    Empty,
    /// `π((0, x]) ≍ x^p` as `x ↓ 0`.
    Power(f64),
    /// Dyadic atoms with `π((0, a_n]) = a_n^{1+a}`.
    Dyadic(f64),
}

pub(crate) fn quad_tol() -> Tolerance {
    Tolerance::new(1e-11, 1e-15)
}

/// Integrate `f` over `(lo, hi]`, splitting at `breaks`. Handles `lo = 0`
/// (integrable algebraic singularity) and `hi = ∞` (log map for power-law
/// tails, rational map otherwise).
pub(crate) fn integrate_density<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    power_tail: bool,
) -> Estimate {
    let tol = quad_tol();
    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi && x.is_finite())
        .collect();
    if lo == 0.0 && hi > 1.0 {
        edges.push(1.0);
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut all = Vec::with_capacity(edges.len() + 2);
    all.push(lo);
    all.extend(edges);
    all.push(hi);
    let n = all.len() - 1;
    let mut total = Estimate::ZERO;
    for i in 0..n {
        let (a, b) = (all[i], all[i + 1]);
        let piece = if a == 0.0 {
            quad::integrate_from_zero(&f, b, tol)
        } else if b == f64::INFINITY {
            if power_tail {
                quad::integrate_log_tail(&f, a, tol)
            } else {
                quad::integrate_to_infinity(&f, a, tol)
            }
        } else {
            quad::integrate(&f, a, b, tol)
        };
        total = total + piece;
    }
    total
}

/// `∫_A^B z^e dz` in closed form for `0 ≤ A < B ≤ ∞`; `None` when divergent.
pub(crate) fn power_integral(e: f64, a: f64, b: f64) -> Option<f64> {
    if b <= a {
        return Some(0.0);
    }
    let k = e + 1.0;
    if k == 0.0 {
        if a == 0.0 || b == f64::INFINITY {
            return None;
        }
        return Some((b / a).ln());
    }
    if a == 0.0 && k < 0.0 {
        return None;
    }
    if b == f64::INFINITY && k > 0.0 {
        return None;
    }
    let upper = if b == f64::INFINITY { 0.0 } else { b.powf(k) };
    let lower = if a == 0.0 { 0.0 } else { a.powf(k) };
    Some((upper - lower) / k)
}

/// Dyadic points `a_n = 2^{-2^n}`.
pub mod dyadic {
    /// Atoms used when a dyadic measure must be enumerated numerically
    /// (sampling, quadrature against π); `a_8 = 2^{-256}`. Moments are summed
    /// in log-space to convergence instead.
    pub const ENUMERATED_ATOMS: usize = 9;

    /// `a_n`, exact for `n ≤ 10`.
    pub fn point(n: usize) -> f64 {
        if n > 10 {
            return 0.0;
        }
        0.5f64.powi(1 << n)
    }

    /// `log2 a_n = -2^n`.
    pub fn log2_point(n: usize) -> f64 {
        -(2f64.powi(n as i32))
    }

    /// For `0 < r < a_0`, the index `m ≥ 1` with `a_m ≤ r < a_{m-1}`.
    pub fn bracket(r: f64) -> usize {
        debug_assert!(r > 0.0 && r < 0.5);
        let l = -r.log2();
        let mut m = l.log2().ceil().max(1.0) as usize;
        while log2_point(m) > r.log2() {
            m += 1;
        }
        while m > 1 && log2_point(m - 1) <= r.log2() {
            m -= 1;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_validation() {
        assert!(Region::new(1.0, 1.0).is_err());
        assert!(Region::new(2.0, 1.0).is_err());
        assert!(Region::new(-1.0, 1.0).is_err());
        assert!(Region::new(0.0, f64::INFINITY).is_ok());
    }

    #[test]
    fn dyadic_bracket_is_consistent() {
        for m in 1..9 {
            let a = dyadic::point(m);
            assert_eq!(dyadic::bracket(a), m);
            assert_eq!(dyadic::bracket(a * 1.5), m);
        }
        assert_eq!(dyadic::bracket(0.3), 1);
        assert_eq!(dyadic::bracket(0.25), 1);
        assert_eq!(dyadic::bracket(0.2), 2);
    }

    #[test]
    fn closed_power_integrals() {
        assert_eq!(power_integral(-1.0, 0.0, 1.0), None);
        assert_eq!(power_integral(-2.0, 1.0, f64::INFINITY), Some(1.0));
        assert_eq!(power_integral(-0.5, 0.0, 1.0), Some(2.0));
        assert_eq!(power_integral(1.0, 0.0, f64::INFINITY), None);
    }
}
