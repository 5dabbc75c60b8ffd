use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::measures::{GeneratingQuadruple, Index, IndexTriple, Region, SmallJumpProfile};

/// Which row of the growth table applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthCase {
    Half,
    InvEta,
    InvOnePlusAlpha,
    OneMinusAlphaOverBeta,
}

impl GrowthCase {
    pub fn tag(&self) -> &'static str {
        match self {
            GrowthCase::Half => "half",
            GrowthCase::InvEta => "inv_eta",
            GrowthCase::InvOnePlusAlpha => "inv_one_plus_alpha",
            GrowthCase::OneMinusAlphaOverBeta => "one_minus_alpha_over_beta",
        }
    }
}

impl fmt::Display for GrowthCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Upper bound on `limsup log|X*(t) - centre| / log t`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthVerdict {
    pub exponent_bound: f64,
    /// Exact value when every index entering the formula is finite;
    /// `None` for `1/η` with `η = 0`.
    pub exact: Option<BigRational>,
    pub case: GrowthCase,
    /// The bound carries an extra `log t` factor (infinite-variation small
    /// jumps with `β ≤ 1 + α`).
    pub log_correction: bool,
}

/// An index value seen from the side on which the working index lives:
/// `α < α₀` and `η < η∞` when not achieved, `β > β₀` when not achieved.
#[derive(Debug, Clone)]
enum Side {
    Exact(BigRational),
    Below(BigRational),
    Above(BigRational),
    Inf,
}

impl Side {
    fn lower(ix: Index) -> Side {
        match to_rational(ix.value) {
            None => Side::Inf,
            Some(v) if ix.achieved => Side::Exact(v),
            Some(v) => Side::Below(v),
        }
    }

    fn upper(ix: Index) -> Side {
        match to_rational(ix.value) {
            None => Side::Inf,
            Some(v) if ix.achieved => Side::Exact(v),
            Some(v) => Side::Above(v),
        }
    }

    /// Compare against a constant; `Equal` only when the value is exactly `c`.
    fn cmp(&self, c: &BigRational) -> Ordering {
        match self {
            Side::Inf => Ordering::Greater,
            Side::Exact(v) => v.cmp(c),
            Side::Below(v) => match v.cmp(c) {
                Ordering::Greater => Ordering::Greater,
                _ => Ordering::Less,
            },
            Side::Above(v) => match v.cmp(c) {
                Ordering::Less => Ordering::Less,
                _ => Ordering::Greater,
            },
        }
    }

    fn value(&self) -> Option<&BigRational> {
        match self {
            Side::Exact(v) | Side::Below(v) | Side::Above(v) => Some(v),
            Side::Inf => None,
        }
    }
}

/// Decimal reading of an `f64` (`1.8` becomes `9/5`); `None` for `±∞`/NaN.
pub fn to_rational(x: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let s = format!("{x}");
    let (neg, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.as_str()),
    };
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, den);
    Some(if neg { -r } else { r })
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Value of one row's formula at given index values; `None` when it is
/// not a finite number (`∞` inputs, `η = 0`).
pub fn case_value(
    case: GrowthCase,
    alpha: Option<&BigRational>,
    beta: Option<&BigRational>,
    eta: Option<&BigRational>,
) -> Option<BigRational> {
    let one = BigRational::one();
    match case {
        GrowthCase::Half => Some(BigRational::new(1.into(), 2.into())),
        GrowthCase::InvEta => eta.filter(|e| !e.is_zero()).map(|e| e.recip()),
        GrowthCase::InvOnePlusAlpha => alpha.map(|a| (&one + a).recip()),
        GrowthCase::OneMinusAlphaOverBeta => {
            let (a, b) = (alpha?, beta?);
            (!b.is_zero()).then(|| &one - a / b)
        }
    }
}

/// Growth-exponent table in terms of `(α, β, η)`.
///
/// Comparisons are exact on the decimal values of the indices; an index
/// that is not achieved sits strictly on its admissible side of the raw
/// value. The table leaves `α < 1, η ≤ 1+α, β > 1+α` open; there the larger
/// of `1/η` and `1 - α/β` is returned.
pub fn growth_exponent(ix: &IndexTriple) -> GrowthVerdict {
    let alpha = Side::lower(ix.alpha);
    let beta = Side::upper(ix.beta);
    let eta = Side::lower(ix.eta);
    let one = rat(1);
    let two = rat(2);

    let alpha_ge_1 = alpha.cmp(&one) != Ordering::Less;
    // 1 + α, used only when α < 1 (so finite)
    let opa = alpha.value().map(|a| &one + a);
    let verdict = |case: GrowthCase| {
        let exact = case_value(case, alpha.value(), beta.value(), eta.value());
        let exponent_bound = match (&exact, case) {
            (Some(v), _) => v.to_f64().unwrap_or(f64::NAN),
            (None, GrowthCase::InvEta) => match &eta {
                Side::Inf => 0.0,
                _ => f64::INFINITY,
            },
            (None, _) => f64::NAN,
        };
        (case, exact, exponent_bound)
    };

    let (case, exact, exponent_bound) = if alpha_ge_1 {
        if eta.cmp(&two) != Ordering::Less {
            verdict(GrowthCase::Half)
        } else {
            verdict(GrowthCase::InvEta)
        }
    } else {
        let opa = opa.clone().expect("α < 1 is finite");
        let eta_small = eta.cmp(&opa) != Ordering::Greater;
        let beta_small = beta.cmp(&opa) != Ordering::Greater;
        match (eta_small, beta_small) {
            (true, true) => verdict(GrowthCase::InvEta),
            (false, true) => verdict(GrowthCase::InvOnePlusAlpha),
            (false, false) => verdict(GrowthCase::OneMinusAlphaOverBeta),
            (true, false) => {
                let a = verdict(GrowthCase::InvEta);
                let b = verdict(GrowthCase::OneMinusAlphaOverBeta);
                if a.2 >= b.2 {
                    a
                } else {
                    b
                }
            }
        }
    };

    let infinite_variation = beta.cmp(&one) == Ordering::Greater;
    let beta_le_opa = match &alpha {
        Side::Inf => true,
        _ => alpha_ge_1 || beta.cmp(opa.as_ref().unwrap()) != Ordering::Greater,
    };
    GrowthVerdict {
        exponent_bound,
        exact,
        case,
        log_correction: infinite_variation && beta_le_opa,
    }
}

/// Self-similar limit of the integrated process.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LimitClass {
    BrownianMotion { h: f64 },
    FractionalBm { h: f64 },
    StableLevy { h: f64 },
    StableDependent { h: f64 },
    Unclassified { reason: &'static str },
}

impl LimitClass {
    pub fn hurst(&self) -> Option<f64> {
        match *self {
            LimitClass::BrownianMotion { h }
            | LimitClass::FractionalBm { h }
            | LimitClass::StableLevy { h }
            | LimitClass::StableDependent { h } => Some(h),
            LimitClass::Unclassified { .. } => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LimitClass::BrownianMotion { .. } => "brownian_motion",
            LimitClass::FractionalBm { .. } => "fractional_bm",
            LimitClass::StableLevy { .. } => "stable_levy",
            LimitClass::StableDependent { .. } => "stable_dependent",
            LimitClass::Unclassified { .. } => "unclassified",
        }
    }
}

impl fmt::Display for LimitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hurst() {
            Some(h) => write!(f, "{}(H={h})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Limit class of `X*(t)` under finite variance.
pub fn limit_class(q: &GeneratingQuadruple) -> LimitClass {
    let lam = q.lam();
    let m2 = lam.abs_moment(2.0, Region::ALL).map(|v| v.is_finite()).unwrap_or(false);
    if !m2 {
        return LimitClass::Unclassified {
            reason: "infinite variance",
        };
    }
    if lam.is_zero() && q.b() == 0.0 {
        return LimitClass::Unclassified {
            reason: "degenerate process",
        };
    }
    let alpha0 = q.pi().alpha0().value;
    if alpha0 > 1.0 {
        return LimitClass::BrownianMotion { h: 0.5 };
    }
    let Some((alpha, _)) = q.pi().regular_variation_at_zero() else {
        return LimitClass::Unclassified {
            reason: "no regularly varying density at zero",
        };
    };
    if !(alpha > 0.0 && alpha < 1.0) {
        return LimitClass::Unclassified {
            reason: "alpha0 outside (0, 1)",
        };
    }
    if q.b() > 0.0 {
        return LimitClass::FractionalBm { h: 1.0 - alpha / 2.0 };
    }
    let near = lam
        .abs_moment(1.0 + alpha, Region::UNIT)
        .map(|v| v.is_finite())
        .unwrap_or(false);
    if near {
        return LimitClass::StableLevy {
            h: 1.0 / (1.0 + alpha),
        };
    }
    let beta0 = lam.beta0().value;
    let power = lam
        .parts()
        .iter()
        .flat_map(|p| p.profiles())
        .any(|p| matches!(p, SmallJumpProfile::Power(b) if b == beta0));
    if power && beta0 > 1.0 + alpha && beta0 < 2.0 {
        return LimitClass::StableDependent {
            h: 1.0 - alpha / beta0,
        };
    }
    LimitClass::Unclassified {
        reason: "small jumps outside the classified regimes",
    }
}
