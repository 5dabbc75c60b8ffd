use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Exp;

use super::pi::gamma_moment;
use super::{dyadic, integrate_density, power_integral, Index, Region};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;

/// Jump-size law of a compound Poisson leaf. All sizes are positive.
#[derive(Debug, Clone, PartialEq)]
pub enum JumpLaw {
    Fixed { size: f64 },
    /// `(size, probability)` pairs.
    Discrete { atoms: Vec<(f64, f64)> },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    /// `shift + Exp(rate)`.
    ShiftedExponential { shift: f64, rate: f64 },
}

/// One sign of a jump measure λ, as a measure on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub enum LevyPart {
    CompoundPoisson { rate: f64, jumps: JumpLaw },
    /// Density `c z^{-1-β₀}` on `(0, 1]`.
    StableLike { beta0: f64, c: f64 },
    /// Density `c z^{-1-β₀} e^{-θ z}` on `(0, ∞)`.
    TemperedStable { beta0: f64, theta: f64, c: f64 },
    /// Tail `scale · z^{-η}` for `z ≥ 1`, no mass below 1.
    ParetoTail { eta: f64, scale: f64 },
    /// Tail `λ̄(r) = a_{n-1}^{-b}` for `r ∈ [a_n, a_{n-1})`.
    DyadicExotic { b: f64 },
    /// Image of `inner` under `z ↦ factor · z`.
    Scaled { factor: f64, inner: Box<LevyPart> },
    Sum(Vec<LevyPart>),
}

/// Small-jump behaviour of a single leaf, as used by the γ-test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmallJumpProfile {
    /// No mass in a neighbourhood of zero, or finite mass there.
    None,
    /// `λ̄(r) ≍ r^{-β}` as `r ↓ 0`.
    Power(f64),
    /// Dyadic tail with exponent `b`.
    Dyadic(f64),
}

impl LevyPart {
    pub fn zero() -> Self {
        LevyPart::Sum(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            LevyPart::Sum(v) => v.iter().all(LevyPart::is_zero),
            LevyPart::CompoundPoisson { rate, .. } => *rate == 0.0,
            LevyPart::StableLike { c, .. } | LevyPart::TemperedStable { c, .. } => *c == 0.0,
            LevyPart::ParetoTail { scale, .. } => *scale == 0.0,
            LevyPart::Scaled { inner, .. } => inner.is_zero(),
            LevyPart::DyadicExotic { .. } => false,
        }
    }

    pub(crate) fn check_params(&self, strict: bool) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        let pos = |x: f64| x.is_finite() && x > 0.0;
        match self {
            LevyPart::CompoundPoisson { rate, jumps } => {
                if !(rate.is_finite() && *rate >= 0.0) {
                    return bad(format!("CompoundPoisson: rate must be >= 0, got {rate}"));
                }
                match jumps {
                    JumpLaw::Fixed { size } if !pos(*size) => {
                        return bad(format!("Fixed: size must be positive, got {size}"))
                    }
                    JumpLaw::Discrete { atoms } => {
                        if atoms.is_empty() {
                            return bad("Discrete: needs at least one atom".into());
                        }
                        let mut total = 0.0;
                        for &(v, p) in atoms {
                            if !pos(v) || !(p.is_finite() && p >= 0.0) {
                                return bad(format!("Discrete: atom ({v}, {p}) is invalid"));
                            }
                            total += p;
                        }
                        if (total - 1.0).abs() > 1e-9 {
                            return bad(format!("Discrete: probabilities sum to {total}, not 1"));
                        }
                    }
                    JumpLaw::Uniform { lo, hi } => {
                        if !(lo.is_finite() && *lo >= 0.0 && hi.is_finite() && hi > lo) {
                            return bad(format!("Uniform: need 0 <= lo < hi, got ({lo}, {hi})"));
                        }
                    }
                    JumpLaw::Exponential { rate } if !pos(*rate) => {
                        return bad(format!("Exponential: rate must be positive, got {rate}"))
                    }
                    JumpLaw::ShiftedExponential { shift, rate }
                        if !(shift.is_finite() && *shift >= 0.0 && pos(*rate)) => {
                            return bad(format!(
                                "ShiftedExponential: need shift >= 0, rate > 0, got ({shift}, {rate})"
                            ));
                        }
                    _ => {}
                }
            }
            LevyPart::StableLike { beta0, c } => {
                if !(pos(*beta0) && *beta0 < 2.0) {
                    return bad(format!("StableLike: beta0 must lie in (0, 2), got {beta0}"));
                }
                if !(c.is_finite() && *c >= 0.0) {
                    return bad(format!("StableLike: c must be >= 0, got {c}"));
                }
            }
            LevyPart::TemperedStable { beta0, theta, c } => {
                if !(pos(*beta0) && *beta0 < 2.0) {
                    return bad(format!("TemperedStable: beta0 must lie in (0, 2), got {beta0}"));
                }
                if !pos(*theta) || !(c.is_finite() && *c >= 0.0) {
                    return bad(format!(
                        "TemperedStable: need theta > 0 and c >= 0, got ({theta}, {c})"
                    ));
                }
            }
            LevyPart::ParetoTail { eta, scale } => {
                if !pos(*eta) || !(scale.is_finite() && *scale >= 0.0) {
                    return bad(format!(
                        "ParetoTail: need eta > 0 and scale >= 0, got ({eta}, {scale})"
                    ));
                }
            }
            LevyPart::DyadicExotic { b } => {
                if !pos(*b) {
                    return bad(format!("DyadicExotic: b must be positive, got {b}"));
                }
                if strict && *b >= 2.0 {
                    return Err(Error::Existence(format!(
                        "DyadicExotic(b={b}): integral of min(z^2, 1) lambda(dz) diverges"
                    )));
                }
            }
            LevyPart::Scaled { factor, inner } => {
                if !pos(*factor) {
                    return bad(format!("Scaled: factor must be positive, got {factor}"));
                }
                inner.check_params(strict)?;
            }
            LevyPart::Sum(parts) => {
                for p in parts {
                    p.check_params(strict)?;
                }
            }
        }
        Ok(())
    }

    /// `λ̄(r) = λ((r, ∞))` for `r ≥ 0`; `+∞` when the mass is infinite.
    pub fn tail(&self, r: f64) -> f64 {
        let r = r.max(0.0);
        match self {
            LevyPart::CompoundPoisson { rate, jumps } => rate * jump_survival(jumps, r),
            LevyPart::StableLike { beta0, c } => {
                if r >= 1.0 || *c == 0.0 {
                    0.0
                } else if r == 0.0 {
                    f64::INFINITY
                } else {
                    c / beta0 * (r.powf(-beta0) - 1.0)
                }
            }
            LevyPart::TemperedStable { beta0, theta, c } => {
                if *c == 0.0 {
                    0.0
                } else if r == 0.0 {
                    f64::INFINITY
                } else {
                    tempered_integral(*beta0, *theta, 0.0, r, f64::INFINITY) * c
                }
            }
            LevyPart::ParetoTail { eta, scale } => {
                if r < 1.0 {
                    *scale
                } else {
                    scale * r.powf(-eta)
                }
            }
            LevyPart::DyadicExotic { b } => {
                if r >= 0.5 {
                    0.0
                } else if r == 0.0 {
                    f64::INFINITY
                } else {
                    let m = dyadic::bracket(r);
                    (-dyadic::log2_point(m - 1) * b).exp2()
                }
            }
            LevyPart::Scaled { factor, inner } => inner.tail(r / factor),
            LevyPart::Sum(parts) => parts.iter().map(|p| p.tail(r)).sum(),
        }
    }

    /// `∫_region z^p λ(dz)`.
    pub fn moment(&self, p: f64, region: Region) -> Result<ExtReal> {
        if region.hi <= region.lo {
            return Err(Error::Domain(format!(
                "empty region ({}, {}]",
                region.lo, region.hi
            )));
        }
        Ok(self.moment_in(p, region.lo, region.hi))
    }

    fn moment_in(&self, p: f64, lo: f64, hi: f64) -> ExtReal {
        if hi <= lo {
            return ExtReal::ZERO;
        }
        match self {
            LevyPart::CompoundPoisson { rate, jumps } => {
                if *rate == 0.0 {
                    return ExtReal::ZERO;
                }
                jump_moment(jumps, p, lo, hi).scale(*rate)
            }
            LevyPart::StableLike { beta0, c } => {
                if *c == 0.0 {
                    return ExtReal::ZERO;
                }
                power_integral(p - 1.0 - beta0, lo, hi.min(1.0))
                    .map(|v| ExtReal::Finite(c * v))
                    .unwrap_or(ExtReal::PosInf)
            }
            LevyPart::TemperedStable { beta0, theta, c } => {
                if *c == 0.0 {
                    return ExtReal::ZERO;
                }
                if lo == 0.0 && p <= *beta0 {
                    return ExtReal::PosInf;
                }
                ExtReal::Finite(c * tempered_integral(*beta0, *theta, p, lo, hi))
            }
            LevyPart::ParetoTail { eta, scale } => {
                if *scale == 0.0 {
                    return ExtReal::ZERO;
                }
                let l = lo.max(1.0);
                if hi <= l {
                    // atomless at 1 from the right: mass sits on (1, ∞)
                    return ExtReal::ZERO;
                }
                power_integral(p - 1.0 - eta, l, hi)
                    .map(|v| ExtReal::Finite(scale * eta * v))
                    .unwrap_or(ExtReal::PosInf)
            }
            LevyPart::DyadicExotic { b } => dyadic_levy_moment(*b, p, lo, hi),
            LevyPart::Scaled { factor, inner } => inner
                .moment_in(p, lo / factor, hi / factor)
                .scale(factor.powf(p)),
            LevyPart::Sum(parts) => parts.iter().map(|q| q.moment_in(p, lo, hi)).sum(),
        }
    }

    /// `β₀ = inf{β ≥ 0 : ∫_{(0,1]} z^β λ(dz) < ∞}`.
    pub fn beta0(&self) -> Index {
        match self {
            LevyPart::CompoundPoisson { .. } | LevyPart::ParetoTail { .. } => Index::new(0.0, true),
            LevyPart::StableLike { beta0, c } | LevyPart::TemperedStable { beta0, c, .. } => {
                if *c == 0.0 {
                    Index::new(0.0, true)
                } else {
                    Index::new(*beta0, false)
                }
            }
            LevyPart::DyadicExotic { b } => Index::new(*b, false),
            LevyPart::Scaled { inner, .. } => inner.beta0(),
            LevyPart::Sum(parts) => {
                let mut out = Index::new(0.0, true);
                for idx in parts.iter().map(LevyPart::beta0) {
                    if idx.value > out.value {
                        out = idx;
                    } else if idx.value == out.value {
                        out.achieved &= idx.achieved;
                    }
                }
                out
            }
        }
    }

    /// `η∞ = sup{η ≥ 0 : ∫_{(1,∞)} z^η λ(dz) < ∞}`.
    pub fn eta_inf(&self) -> Index {
        match self {
            LevyPart::ParetoTail { eta, scale } if *scale > 0.0 => Index::new(*eta, false),
            LevyPart::Scaled { inner, .. } => inner.eta_inf(),
            LevyPart::Sum(parts) => {
                let mut out = Index::infinite();
                for idx in parts.iter().map(LevyPart::eta_inf) {
                    if idx.value < out.value {
                        out = idx;
                    } else if idx.value == out.value {
                        out.achieved &= idx.achieved;
                    }
                }
                out
            }
            _ => Index::infinite(),
        }
    }

    /// Small-jump profiles of all leaves.
    pub fn profiles(&self) -> Vec<SmallJumpProfile> {
        let mut out = Vec::new();
        self.collect_profiles(&mut out);
        out
    }

    fn collect_profiles(&self, out: &mut Vec<SmallJumpProfile>) {
        match self {
            LevyPart::StableLike { beta0, c } | LevyPart::TemperedStable { beta0, c, .. }
                if *c > 0.0 =>
            {
                out.push(SmallJumpProfile::Power(*beta0))
            }
            LevyPart::DyadicExotic { b } => out.push(SmallJumpProfile::Dyadic(*b)),
            LevyPart::Scaled { inner, .. } => inner.collect_profiles(out),
            LevyPart::Sum(parts) => parts.iter().for_each(|p| p.collect_profiles(out)),
            _ => out.push(SmallJumpProfile::None),
        }
    }

    /// Leaves together with their accumulated scale factor.
    pub fn leaves(&self) -> Vec<(f64, &LevyPart)> {
        let mut out = Vec::new();
        self.collect_leaves(1.0, &mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, f: f64, out: &mut Vec<(f64, &'a LevyPart)>) {
        match self {
            LevyPart::Scaled { factor, inner } => inner.collect_leaves(f * factor, out),
            LevyPart::Sum(parts) => parts.iter().for_each(|p| p.collect_leaves(f, out)),
            _ => out.push((f, self)),
        }
    }

    /// Exponential decay rate θ of the tail: `∫_{(1,∞)} e^{sz} λ(dz) < ∞`
    /// iff `s < θ` (`+∞` for bounded support, `0` for power tails).
    pub fn exp_rate(&self) -> f64 {
        match self {
            LevyPart::CompoundPoisson { rate, jumps } => {
                if *rate == 0.0 {
                    return f64::INFINITY;
                }
                match jumps {
                    JumpLaw::Exponential { rate } | JumpLaw::ShiftedExponential { rate, .. } => {
                        *rate
                    }
                    _ => f64::INFINITY,
                }
            }
            LevyPart::TemperedStable { theta, c, .. } if *c > 0.0 => *theta,
            LevyPart::ParetoTail { scale, .. } if *scale > 0.0 => 0.0,
            LevyPart::Scaled { factor, inner } => inner.exp_rate() / factor,
            LevyPart::Sum(parts) => parts
                .iter()
                .map(LevyPart::exp_rate)
                .fold(f64::INFINITY, f64::min),
            _ => f64::INFINITY,
        }
    }

    /// Discontinuities of `λ̄`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (f, leaf) in self.leaves() {
            match leaf {
                LevyPart::CompoundPoisson { jumps, .. } => match jumps {
                    JumpLaw::Fixed { size } => out.push(f * size),
                    JumpLaw::Discrete { atoms } => out.extend(atoms.iter().map(|a| f * a.0)),
                    JumpLaw::Uniform { lo, hi } => out.extend([f * lo, f * hi]),
                    JumpLaw::Exponential { .. } => {}
                    JumpLaw::ShiftedExponential { shift, .. } => out.push(f * shift),
                },
                LevyPart::StableLike { .. } | LevyPart::ParetoTail { .. } => out.push(f),
                LevyPart::TemperedStable { .. } => {}
                LevyPart::DyadicExotic { .. } => {
                    out.extend((0..dyadic::ENUMERATED_ATOMS).map(|n| f * dyadic::point(n)))
                }
                _ => {}
            }
        }
        out.retain(|x| *x > 0.0);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    /// Supremum of the support (`+∞` when unbounded, `0` for the zero measure).
    pub fn sup_support(&self) -> f64 {
        let mut s: f64 = 0.0;
        for (f, leaf) in self.leaves() {
            let v = match leaf {
                LevyPart::CompoundPoisson { rate, jumps } => {
                    if *rate == 0.0 {
                        0.0
                    } else {
                        match jumps {
                            JumpLaw::Fixed { size } => *size,
                            JumpLaw::Discrete { atoms } => atoms
                                .iter()
                                .filter(|a| a.1 > 0.0)
                                .map(|a| a.0)
                                .fold(0.0, f64::max),
                            JumpLaw::Uniform { hi, .. } => *hi,
                            _ => f64::INFINITY,
                        }
                    }
                }
                LevyPart::StableLike { c, .. } => {
                    if *c > 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                LevyPart::DyadicExotic { .. } => 0.5,
                _ if leaf.is_zero() => 0.0,
                _ => f64::INFINITY,
            };
            s = s.max(f * v);
        }
        s
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevyPart::CompoundPoisson { rate, jumps } => {
                write!(f, "CompoundPoisson(rate={rate},jumps={jumps})")
            }
            LevyPart::StableLike { beta0, c } => write!(f, "StableLike(beta0={beta0},c={c})"),
            LevyPart::TemperedStable { beta0, theta, c } => {
                write!(f, "TemperedStable(beta0={beta0},theta={theta},c={c})")
            }
            LevyPart::ParetoTail { eta, scale } => write!(f, "ParetoTail(eta={eta},scale={scale})"),
            LevyPart::DyadicExotic { b } => write!(f, "DyadicExotic(b={b})"),
            LevyPart::Scaled { factor, inner } => write!(f, "Scaled(factor={factor},inner={inner})"),
            LevyPart::Sum(parts) => {
                write!(f, "Sum[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    p.fmt_inner(f)?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for LevyPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_inner(f)
    }
}

impl fmt::Display for JumpLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JumpLaw::Fixed { size } => write!(f, "Fixed(size={size})"),
            JumpLaw::Discrete { atoms } => {
                write!(f, "Discrete(atoms=[")?;
                for (i, (v, p)) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{v}:{p}")?;
                }
                write!(f, "])")
            }
            JumpLaw::Uniform { lo, hi } => write!(f, "Uniform(lo={lo},hi={hi})"),
            JumpLaw::Exponential { rate } => write!(f, "Exponential(rate={rate})"),
            JumpLaw::ShiftedExponential { shift, rate } => {
                write!(f, "ShiftedExponential(shift={shift},rate={rate})")
            }
        }
    }
}

fn jump_survival(j: &JumpLaw, r: f64) -> f64 {
    match j {
        JumpLaw::Fixed { size } => (*size > r) as u8 as f64,
        JumpLaw::Discrete { atoms } => atoms.iter().filter(|a| a.0 > r).map(|a| a.1).sum(),
        JumpLaw::Uniform { lo, hi } => ((hi - r) / (hi - lo)).clamp(0.0, 1.0),
        JumpLaw::Exponential { rate } => (-rate * r).exp(),
        JumpLaw::ShiftedExponential { shift, rate } => {
            if r < *shift {
                1.0
            } else {
                (-rate * (r - shift)).exp()
            }
        }
    }
}

fn jump_moment(j: &JumpLaw, p: f64, lo: f64, hi: f64) -> ExtReal {
    let region = Region { lo, hi };
    match j {
        JumpLaw::Fixed { size } => {
            ExtReal::Finite(if region.contains(*size) { size.powf(p) } else { 0.0 })
        }
        JumpLaw::Discrete { atoms } => ExtReal::Finite(
            atoms
                .iter()
                .filter(|a| region.contains(a.0))
                .map(|a| a.1 * a.0.powf(p))
                .sum(),
        ),
        JumpLaw::Uniform { lo: l, hi: h } => match region.clip(*l, *h) {
            None => ExtReal::ZERO,
            Some(r) => power_integral(p, r.lo, r.hi)
                .map(|v| ExtReal::Finite(v / (h - l)))
                .unwrap_or(ExtReal::PosInf),
        },
        JumpLaw::Exponential { rate } => gamma_moment(1.0, *rate, p, lo, hi),
        JumpLaw::ShiftedExponential { shift, rate } => {
            if *shift == 0.0 {
                return gamma_moment(1.0, *rate, p, lo, hi);
            }
            let l = lo.max(*shift);
            if hi <= l {
                return ExtReal::ZERO;
            }
            let e = integrate_density(
                |z| rate * (-rate * (z - shift)).exp() * z.powf(p),
                l,
                hi,
                &[],
                false,
            );
            ExtReal::Finite(e.value)
        }
    }
}

/// `∫_lo^hi z^{p-1-β} e^{-θz} dz`, assumed finite.
fn tempered_integral(beta: f64, theta: f64, p: f64, lo: f64, hi: f64) -> f64 {
    let e = p - 1.0 - beta;
    integrate_density(|z| z.powf(e) * (-theta * z).exp(), lo, hi, &[1.0 / theta], false).value
}

/// Mass of the dyadic λ atom at `a_n`.
pub(crate) fn dyadic_levy_mass(b: f64, n: usize) -> f64 {
    if n == 0 {
        return b.exp2();
    }
    let l = dyadic::log2_point(n);
    let prev = dyadic::log2_point(n - 1);
    (-l * b).exp2() * (1.0 - (prev * b).exp2())
}

fn dyadic_levy_moment(b: f64, p: f64, lo: f64, hi: f64) -> ExtReal {
    let n_start = if hi >= 0.5 { 0 } else { dyadic::bracket(hi) };
    let n_end = if lo >= 0.5 {
        0
    } else if lo == 0.0 {
        usize::MAX
    } else {
        dyadic::bracket(lo)
    };
    if n_start >= n_end {
        return ExtReal::ZERO;
    }
    if n_end == usize::MAX && p <= b {
        return ExtReal::PosInf;
    }
    let mut total = 0.0;
    let mut n = n_start;
    while n < n_end && n < 60 {
        let l = dyadic::log2_point(n);
        let w = if n == 0 {
            1.0
        } else {
            1.0 - (dyadic::log2_point(n - 1) * b).exp2()
        };
        let term = (l * (p - b)).exp2() * w;
        total += term;
        if term == 0.0 || (n > n_start && term < 1e-18 * total) {
            break;
        }
        n += 1;
    }
    ExtReal::Finite(total)
}

/// The jump measure λ, as a positive and a negative part on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevyFamily {
    positive: LevyPart,
    negative: LevyPart,
}

impl LevyFamily {
    /// Validates parameters and the Lévy-measure conditions.
    pub fn new(positive: LevyPart, negative: LevyPart) -> Result<Self> {
        positive.check_params(true)?;
        negative.check_params(true)?;
        let fam = LevyFamily { positive, negative };
        fam.check_existence()?;
        Ok(fam)
    }

    /// Validates parameters only; `∫ (z² ∧ 1) λ(dz) < ∞` is not enforced.
    pub fn new_unchecked(positive: LevyPart, negative: LevyPart) -> Result<Self> {
        positive.check_params(false)?;
        negative.check_params(false)?;
        Ok(LevyFamily { positive, negative })
    }

    pub fn positive(part: LevyPart) -> Result<Self> {
        Self::new(part, LevyPart::zero())
    }

    pub fn symmetric(part: LevyPart) -> Result<Self> {
        Self::new(part.clone(), part)
    }

    pub fn zero() -> Self {
        LevyFamily {
            positive: LevyPart::zero(),
            negative: LevyPart::zero(),
        }
    }

    pub fn pos(&self) -> &LevyPart {
        &self.positive
    }

    pub fn neg(&self) -> &LevyPart {
        &self.negative
    }

    pub fn parts(&self) -> [&LevyPart; 2] {
        [&self.positive, &self.negative]
    }

    pub fn is_zero(&self) -> bool {
        self.positive.is_zero() && self.negative.is_zero()
    }

    pub fn is_one_sided(&self) -> bool {
        self.negative.is_zero()
    }

    pub fn check_existence(&self) -> Result<()> {
        let small = self.abs_moment(2.0, Region::UNIT)?;
        if !small.is_finite() {
            return Err(Error::Existence(
                "integral of min(z^2, 1) lambda(dz) diverges".into(),
            ));
        }
        for part in self.parts() {
            let log_mom = integrate_log_moment(part);
            if !log_mom {
                return Err(Error::Existence(
                    "integral of log|z| over |z| > 1 diverges".into(),
                ));
            }
        }
        Ok(())
    }

    /// `λ̄(r) = λ({|z| > r})`.
    pub fn tail(&self, r: f64) -> f64 {
        self.positive.tail(r) + self.negative.tail(r)
    }

    /// `∫_{|z| ∈ region} |z|^p λ(dz)`.
    pub fn abs_moment(&self, p: f64, region: Region) -> Result<ExtReal> {
        Ok(self.positive.moment(p, region)? + self.negative.moment(p, region)?)
    }

    /// `∫_{|z| ∈ region} z λ(dz)`; undefined when both signs diverge.
    pub fn signed_first_moment(&self, region: Region) -> Result<ExtReal> {
        let p = self.positive.moment(1.0, region)?;
        let n = self.negative.moment(1.0, region)?;
        Ok(match (p, n) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a - b),
            (ExtReal::PosInf, ExtReal::Finite(_)) => ExtReal::PosInf,
            _ => ExtReal::Undefined,
        })
    }

    /// `β₀` of λ.
    pub fn beta0(&self) -> Index {
        LevyPart::Sum(vec![self.positive.clone(), self.negative.clone()]).beta0()
    }

    /// `η∞` of λ.
    pub fn eta_inf(&self) -> Index {
        LevyPart::Sum(vec![self.positive.clone(), self.negative.clone()]).eta_inf()
    }

    /// `∫_{|z| ≤ 1} |z| λ(dz) < ∞`.
    pub fn finite_variation(&self) -> bool {
        self.abs_moment(1.0, Region::UNIT)
            .map(|v| v.is_finite())
            .unwrap_or(false)
    }
}

/// `∫_{(1,∞)} log z λ(dz) < ∞`, decided per leaf.
fn integrate_log_moment(part: &LevyPart) -> bool {
    part.leaves().iter().all(|(_, leaf)| match leaf {
        LevyPart::ParetoTail { eta, .. } => *eta > 0.0,
        _ => true,
    })
}

impl fmt::Display for LevyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Levy(pos={},neg={})", self.positive, self.negative)
    }
}

/// Draws jump sizes from `λ` restricted to `(ε, ∞)`, normalised.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    leaves: Vec<LeafSampler>,
    index: Option<WeightedIndex<f64>>,
    /// `λ̄(ε)` of the sampled part.
    pub mass: f64,
}

#[derive(Debug, Clone)]
enum LeafSampler {
    Fixed(f64),
    Table { values: Vec<f64>, index: WeightedIndex<f64> },
    Uniform { lo: f64, hi: f64 },
    ShiftedExp { start: f64, exp: Exp<f64> },
    StableLike { eps_pow: f64, beta: f64 },
    Pareto { start: f64, eta: f64 },
    Tempered { eps: f64, beta: f64, theta: f64 },
    Scaled { factor: f64, inner: Box<LeafSampler> },
}

impl JumpSampler {
    pub fn new(part: &LevyPart, eps: f64) -> Result<Self> {
        let mut leaves = Vec::new();
        let mut weights = Vec::new();
        for (f, leaf) in part.leaves() {
            let e = eps / f;
            let m = leaf.tail(e);
            if !m.is_finite() {
                return Err(Error::Unsupported(format!(
                    "lambda has infinite mass above the cutoff {eps}"
                )));
            }
            if m <= 0.0 {
                continue;
            }
            let s = leaf_sampler(leaf, e)?;
            leaves.push(if f == 1.0 {
                s
            } else {
                LeafSampler::Scaled {
                    factor: f,
                    inner: Box::new(s),
                }
            });
            weights.push(m);
        }
        let mass = weights.iter().sum();
        let index = if weights.is_empty() {
            None
        } else {
            Some(
                WeightedIndex::new(&weights)
                    .map_err(|e| Error::Numeric(format!("jump sampler weights: {e}")))?,
            )
        };
        Ok(JumpSampler {
            leaves,
            index,
            mass,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let i = self.index.as_ref().map(|ix| ix.sample(rng)).unwrap_or(0);
        sample_leaf(&self.leaves[i], rng)
    }
}

fn leaf_sampler(leaf: &LevyPart, e: f64) -> Result<LeafSampler> {
    let table = |pairs: Vec<(f64, f64)>| -> Result<LeafSampler> {
        let values = pairs.iter().map(|p| p.0).collect();
        let index = WeightedIndex::new(pairs.iter().map(|p| p.1))
            .map_err(|err| Error::Numeric(format!("jump table: {err}")))?;
        Ok(LeafSampler::Table { values, index })
    };
    Ok(match leaf {
        LevyPart::CompoundPoisson { jumps, .. } => match jumps {
            JumpLaw::Fixed { size } => LeafSampler::Fixed(*size),
            JumpLaw::Discrete { atoms } => {
                table(atoms.iter().copied().filter(|a| a.0 > e && a.1 > 0.0).collect())?
            }
            JumpLaw::Uniform { lo, hi } => LeafSampler::Uniform {
                lo: lo.max(e),
                hi: *hi,
            },
            JumpLaw::Exponential { rate } => LeafSampler::ShiftedExp {
                start: e,
                exp: Exp::new(*rate).map_err(|x| Error::InvalidParameter(x.to_string()))?,
            },
            JumpLaw::ShiftedExponential { shift, rate } => LeafSampler::ShiftedExp {
                start: shift.max(e),
                exp: Exp::new(*rate).map_err(|x| Error::InvalidParameter(x.to_string()))?,
            },
        },
        LevyPart::StableLike { beta0, .. } => LeafSampler::StableLike {
            eps_pow: e.powf(-beta0),
            beta: *beta0,
        },
        LevyPart::ParetoTail { eta, .. } => LeafSampler::Pareto {
            start: e.max(1.0),
            eta: *eta,
        },
        LevyPart::TemperedStable { beta0, theta, .. } => LeafSampler::Tempered {
            eps: e,
            beta: *beta0,
            theta: *theta,
        },
        LevyPart::DyadicExotic { b } => {
            let n_end = if e >= 0.5 { 0 } else { dyadic::bracket(e) };
            table(
                (0..n_end)
                    .map(|n| (dyadic::point(n), dyadic_levy_mass(*b, n)))
                    .collect(),
            )?
        }
        LevyPart::Scaled { .. } | LevyPart::Sum(_) => {
            return Err(Error::Numeric("composite leaf in sampler".into()))
        }
    })
}

fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // (0, 1]
    1.0 - rng.random::<f64>()
}

fn sample_leaf<R: Rng + ?Sized>(s: &LeafSampler, rng: &mut R) -> f64 {
    match s {
        LeafSampler::Fixed(v) => *v,
        LeafSampler::Table { values, index } => values[index.sample(rng)],
        LeafSampler::Uniform { lo, hi } => lo + (hi - lo) * open_unit(rng),
        LeafSampler::ShiftedExp { start, exp } => start + exp.sample(rng),
        LeafSampler::StableLike { eps_pow, beta } => {
            let u = rng.random::<f64>();
            (eps_pow - u * (eps_pow - 1.0)).powf(-1.0 / beta)
        }
        LeafSampler::Pareto { start, eta } => start * open_unit(rng).powf(-1.0 / eta),
        LeafSampler::Tempered { eps, beta, theta } => loop {
            let z = eps * open_unit(rng).powf(-1.0 / beta);
            if rng.random::<f64>() < (-theta * (z - eps)).exp() {
                break z;
            }
        },
        LeafSampler::Scaled { factor, inner } => factor * sample_leaf(inner, rng),
    }
}
