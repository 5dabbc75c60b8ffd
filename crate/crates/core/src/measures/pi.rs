use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Gamma;
use statrs::function::gamma::{gamma_lr, gamma_ur, ln_gamma};

use super::{dyadic, integrate_density, power_integral, Index, NearZero, Region};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::quad::Estimate;

/// Point mass `mass · δ_x` inside a tabulated π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

/// Density `coef · x^power` on `(lo, hi]` inside a tabulated π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub coef: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PiVariant {
    PointMass { x0: f64 },
    /// Density `(1+a) x^a` on `(0, 1]`.
    PowerDensity { a: f64 },
    /// Gamma density with the given shape and rate.
    GammaDensity { shape: f64, rate: f64 },
    /// Atoms at `a_n = 2^{-2^n}` with mass `a_n^{1+a} - a_{n+1}^{1+a}`.
    DyadicExotic { a: f64 },
    Tabulated {
        atoms: Vec<Atom>,
        segments: Vec<Segment>,
    },
}

/// The mean-reversion measure π on `(0, ∞)`.
///
/// Moments of the dyadic family are summed in log-space until the terms
/// drop below double precision; sampling and quadrature against π enumerate
/// the atoms `a_0, …, a_8` only (the remaining mass is below `2^{-512(1+a)}`,
/// or `2^{-512 a}` under size-biasing).
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureFamily {
    variant: PiVariant,
}

impl MeasureFamily {
    /// Validates parameters and the existence condition `m_{-1}(π) < ∞`.
    pub fn new(variant: PiVariant) -> Result<Self> {
        let m = Self::new_unchecked(variant)?;
        m.check_existence()?;
        Ok(m)
    }

    /// Validates parameters only, skipping the existence condition. Used to
    /// study measures outside the admissible class.
    pub fn new_unchecked(variant: PiVariant) -> Result<Self> {
        check_params(&variant)?;
        Ok(MeasureFamily { variant })
    }

    pub fn point_mass(x0: f64) -> Result<Self> {
        Self::new(PiVariant::PointMass { x0 })
    }

    pub fn power_density(a: f64) -> Result<Self> {
        Self::new(PiVariant::PowerDensity { a })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(PiVariant::GammaDensity { shape, rate })
    }

    pub fn dyadic(a: f64) -> Result<Self> {
        Self::new(PiVariant::DyadicExotic { a })
    }

    pub fn tabulated(atoms: Vec<Atom>, segments: Vec<Segment>) -> Result<Self> {
        Self::new(PiVariant::Tabulated { atoms, segments })
    }

    pub fn variant(&self) -> &PiVariant {
        &self.variant
    }

    pub fn check_existence(&self) -> Result<()> {
        if !self.moment(-1.0, Region::ALL)?.is_finite() {
            return Err(Error::Existence(
                "m_{-1}(pi) = integral of x^{-1} pi(dx) diverges".into(),
            ));
        }
        if !self.total_mass().is_finite() {
            return Err(Error::Existence("pi has infinite total mass".into()));
        }
        Ok(())
    }

    /// `∫_region x^p π(dx)`.
    pub fn moment(&self, p: f64, region: Region) -> Result<ExtReal> {
        if region.hi <= region.lo {
            return Err(Error::Domain(format!(
                "empty region ({}, {}]",
                region.lo, region.hi
            )));
        }
        let (lo, hi) = (region.lo, region.hi);
        let v = match &self.variant {
            PiVariant::PointMass { x0 } => {
                ExtReal::Finite(if region.contains(*x0) { x0.powf(p) } else { 0.0 })
            }
            PiVariant::PowerDensity { a } => match region.clip(0.0, 1.0) {
                None => ExtReal::ZERO,
                Some(r) => power_integral(a + p, r.lo, r.hi)
                    .map(|v| ExtReal::Finite((1.0 + a) * v))
                    .unwrap_or(ExtReal::PosInf),
            },
            PiVariant::GammaDensity { shape, rate } => gamma_moment(*shape, *rate, p, lo, hi),
            PiVariant::DyadicExotic { a } => dyadic_pi_moment(*a, p, lo, hi),
            PiVariant::Tabulated { atoms, segments } => {
                let mut total = ExtReal::ZERO;
                for at in atoms {
                    if region.contains(at.x) {
                        total = total + ExtReal::Finite(at.mass * at.x.powf(p));
                    }
                }
                for s in segments {
                    if s.coef == 0.0 {
                        continue;
                    }
                    if let Some(r) = region.clip(s.lo, s.hi) {
                        total = total
                            + power_integral(s.power + p, r.lo, r.hi)
                                .map(|v| ExtReal::Finite(s.coef * v))
                                .unwrap_or(ExtReal::PosInf);
                    }
                }
                total
            }
        };
        Ok(v)
    }

    pub fn total_mass(&self) -> ExtReal {
        self.moment(0.0, Region::ALL).unwrap_or(ExtReal::Undefined)
    }

    /// `π((0, r])`.
    pub fn cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.moment(0.0, Region { lo: 0.0, hi: r })
            .map(|v| v.to_f64_lossy())
            .unwrap_or(f64::NAN)
    }

    /// `π((r, ∞))`.
    pub fn tail(&self, r: f64) -> f64 {
        self.moment(0.0, Region::above(r))
            .map(|v| v.to_f64_lossy())
            .unwrap_or(f64::NAN)
    }

    /// `m_p(π)` over the whole half-line.
    pub fn m(&self, p: f64) -> ExtReal {
        self.moment(p, Region::ALL).unwrap_or(ExtReal::Undefined)
    }

    /// `α₀ = sup{α ≥ 0 : ∫_{(0,1]} x^{-α-1} π(dx) < ∞}`.
    pub fn alpha0(&self) -> Index {
        match &self.variant {
            PiVariant::PointMass { .. } => Index::infinite(),
            PiVariant::PowerDensity { a } => Index::new(*a, false),
            PiVariant::GammaDensity { shape, .. } => Index::new((shape - 1.0).max(0.0), false),
            PiVariant::DyadicExotic { a } => Index::new(*a, false),
            PiVariant::Tabulated { segments, .. } => zero_segment(segments)
                .map(|s| Index::new(s.power.max(0.0), false))
                .unwrap_or(Index::infinite()),
        }
    }

    pub fn near_zero(&self) -> NearZero {
        match &self.variant {
            PiVariant::PointMass { .. } => NearZero::Empty,
            PiVariant::PowerDensity { a } => NearZero::Power(1.0 + a),
            PiVariant::GammaDensity { shape, .. } => NearZero::Power(*shape),
            PiVariant::DyadicExotic { a } => NearZero::Dyadic(*a),
            PiVariant::Tabulated { segments, .. } => zero_segment(segments)
                .map(|s| NearZero::Power(s.power + 1.0))
                .unwrap_or(NearZero::Empty),
        }
    }

    /// `ε₀ = sup{s : π((0, s)) = 0}`.
    pub fn eps0(&self) -> f64 {
        match &self.variant {
            PiVariant::PointMass { x0 } => *x0,
            PiVariant::Tabulated { atoms, segments } => atoms
                .iter()
                .filter(|a| a.mass > 0.0)
                .map(|a| a.x)
                .chain(segments.iter().filter(|s| s.coef > 0.0).map(|s| s.lo))
                .fold(f64::INFINITY, f64::min),
            _ => 0.0,
        }
    }

    /// Whether π has a Lebesgue density.
    pub fn has_density(&self) -> bool {
        match &self.variant {
            PiVariant::PowerDensity { .. } | PiVariant::GammaDensity { .. } => true,
            PiVariant::Tabulated { atoms, segments } => {
                atoms.iter().all(|a| a.mass == 0.0) && !segments.is_empty()
            }
            _ => false,
        }
    }

    /// For a density `c x^α (1 + o(1))` at zero with `α > 0`, returns
    /// `(α, c / α)`.
    pub fn regular_variation_at_zero(&self) -> Option<(f64, f64)> {
        match &self.variant {
            PiVariant::PowerDensity { a } if *a > 0.0 => Some((*a, (1.0 + a) / a)),
            PiVariant::GammaDensity { shape, rate } if *shape > 1.0 => {
                let c = (shape * rate.ln() - ln_gamma(*shape)).exp();
                Some((shape - 1.0, c / (shape - 1.0)))
            }
            PiVariant::Tabulated { segments, .. } => zero_segment(segments)
                .filter(|s| s.power > 0.0)
                .map(|s| (s.power, s.coef / s.power)),
            _ => None,
        }
    }

    /// Points where a density is non-smooth or atoms sit; used as
    /// quadrature breakpoints.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.variant {
            PiVariant::PointMass { x0 } => vec![*x0],
            PiVariant::PowerDensity { .. } => vec![1.0],
            PiVariant::GammaDensity { .. } => vec![],
            PiVariant::DyadicExotic { .. } => {
                (0..dyadic::ENUMERATED_ATOMS).map(dyadic::point).collect()
            }
            PiVariant::Tabulated { atoms, segments } => atoms
                .iter()
                .map(|a| a.x)
                .chain(segments.iter().flat_map(|s| [s.lo, s.hi]))
                .filter(|&x| x > 0.0)
                .collect(),
        }
    }

    /// `∫_region f(x) π(dx)`, with `f` evaluated only inside the region.
    /// `extra_breaks` marks non-smooth points of `f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, region: Region, extra_breaks: &[f64]) -> Estimate {
        let mut breaks = self.breakpoints();
        breaks.extend_from_slice(extra_breaks);
        match &self.variant {
            PiVariant::PointMass { x0 } => {
                if region.contains(*x0) {
                    Estimate::exact(f(*x0))
                } else {
                    Estimate::ZERO
                }
            }
            PiVariant::PowerDensity { a } => match region.clip(0.0, 1.0) {
                None => Estimate::ZERO,
                Some(r) => {
                    integrate_density(|x| (1.0 + a) * x.powf(*a) * f(x), r.lo, r.hi, &breaks, true)
                }
            },
            PiVariant::GammaDensity { shape, rate } => {
                let lc = shape * rate.ln() - ln_gamma(*shape);
                let dens = |x: f64| (lc + (shape - 1.0) * x.ln() - rate * x).exp();
                integrate_density(|x| dens(x) * f(x), region.lo, region.hi, &breaks, false)
            }
            PiVariant::DyadicExotic { a } => {
                let mut total = Estimate::ZERO;
                for n in 0..dyadic::ENUMERATED_ATOMS {
                    let x = dyadic::point(n);
                    if region.contains(x) {
                        total = total + Estimate::exact(dyadic_pi_mass(*a, n) * f(x));
                    }
                }
                total
            }
            PiVariant::Tabulated { atoms, segments } => {
                let mut total = Estimate::ZERO;
                for at in atoms {
                    if region.contains(at.x) {
                        total = total + Estimate::exact(at.mass * f(at.x));
                    }
                }
                for s in segments {
                    if let Some(r) = region.clip(s.lo, s.hi) {
                        total = total
                            + integrate_density(
                                |x| s.coef * x.powf(s.power) * f(x),
                                r.lo,
                                r.hi,
                                &breaks,
                                true,
                            );
                    }
                }
                total
            }
        }
    }
}

fn zero_segment(segments: &[Segment]) -> Option<&Segment> {
    segments
        .iter()
        .filter(|s| s.lo == 0.0 && s.coef > 0.0)
        .min_by(|a, b| a.power.total_cmp(&b.power))
}

fn check_params(v: &PiVariant) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidParameter(m));
    match v {
        PiVariant::PointMass { x0 } => {
            if !(x0.is_finite() && *x0 > 0.0) {
                return bad(format!("PointMass: x0 must be positive and finite, got {x0}"));
            }
        }
        PiVariant::PowerDensity { a } => {
            if !(a.is_finite() && *a >= 0.0) {
                return bad(format!("PowerDensity: a must be >= 0, got {a}"));
            }
        }
        PiVariant::GammaDensity { shape, rate } => {
            if !(shape.is_finite() && *shape > 0.0 && rate.is_finite() && *rate > 0.0) {
                return bad(format!(
                    "GammaDensity: shape and rate must be positive, got ({shape}, {rate})"
                ));
            }
        }
        PiVariant::DyadicExotic { a } => {
            if !(a.is_finite() && *a >= 0.0) {
                return bad(format!("DyadicExotic: a must be >= 0, got {a}"));
            }
        }
        PiVariant::Tabulated { atoms, segments } => {
            if atoms.is_empty() && segments.is_empty() {
                return bad("Tabulated: needs at least one atom or segment".into());
            }
            for at in atoms {
                if !(at.x.is_finite() && at.x > 0.0 && at.mass.is_finite() && at.mass >= 0.0) {
                    return bad(format!(
                        "Tabulated: atom at {} with mass {} is invalid",
                        at.x, at.mass
                    ));
                }
            }
            for s in segments {
                if !(s.lo >= 0.0 && s.hi.is_finite() && s.hi > s.lo) {
                    return bad(format!("Tabulated: segment ({}, {}] is invalid", s.lo, s.hi));
                }
                if !(s.coef.is_finite() && s.coef >= 0.0 && s.power.is_finite()) {
                    return bad(format!(
                        "Tabulated: segment coefficient {} / power {} is invalid",
                        s.coef, s.power
                    ));
                }
            }
        }
    }
    Ok(())
}

pub(crate) fn gamma_moment(k: f64, theta: f64, p: f64, lo: f64, hi: f64) -> ExtReal {
    let s = k + p;
    if s <= 0.0 {
        return if lo == 0.0 {
            ExtReal::PosInf
        } else {
            gamma_moment_quad(k, theta, p, lo, hi)
        };
    }
    let scale = (ln_gamma(s) - ln_gamma(k) - p * theta.ln()).exp();
    let (xl, xh) = (theta * lo, theta * hi);
    let frac = if xl > s {
        let upper_h = if hi.is_infinite() { 0.0 } else { gamma_ur(s, xh) };
        gamma_ur(s, xl) - upper_h
    } else {
        let lower_l = if lo == 0.0 { 0.0 } else { gamma_lr(s, xl) };
        let lower_h = if hi.is_infinite() { 1.0 } else { gamma_lr(s, xh) };
        lower_h - lower_l
    };
    ExtReal::Finite(scale * frac.max(0.0))
}

fn gamma_moment_quad(k: f64, theta: f64, p: f64, lo: f64, hi: f64) -> ExtReal {
    let lc = k * theta.ln() - ln_gamma(k);
    let e = integrate_density(
        |x| (lc + (k + p - 1.0) * x.ln() - theta * x).exp(),
        lo,
        hi,
        &[],
        false,
    );
    ExtReal::Finite(e.value)
}

/// Mass of the dyadic π atom at `a_n`.
pub(crate) fn dyadic_pi_mass(a: f64, n: usize) -> f64 {
    let l = dyadic::log2_point(n) * (1.0 + a);
    l.exp2() * (1.0 - l.exp2())
}

/// Σ over atoms `a_n ∈ (lo, hi]` of `w_n a_n^p`, summed in log-space.
fn dyadic_pi_moment(a: f64, p: f64, lo: f64, hi: f64) -> ExtReal {
    // first index with a_n <= hi
    let n_start = if hi >= 0.5 { 0 } else { dyadic::bracket(hi) };
    // indices n with a_n > lo are n < n_end
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
    if n_end == usize::MAX && p + 1.0 + a <= 0.0 {
        return ExtReal::PosInf;
    }
    let mut total = 0.0;
    let mut n = n_start;
    while n < n_end && n < 60 {
        let l = dyadic::log2_point(n);
        let term = (l * (p + 1.0 + a)).exp2() * (1.0 - (l * (1.0 + a)).exp2());
        total += term;
        if term == 0.0 || (n > n_start && term < 1e-18 * total) {
            break;
        }
        n += 1;
    }
    ExtReal::Finite(total)
}

/// Draws from `x^w π(dx)` normalised, for `w ∈ {0, -1}`.
#[derive(Debug, Clone)]
pub struct PiSampler {
    comps: Vec<Comp>,
    index: Option<WeightedIndex<f64>>,
    /// Total mass of `x^w π`.
    pub mass: f64,
}

#[derive(Debug, Clone)]
enum Comp {
    Atom(f64),
    Power { lo: f64, hi: f64, e: f64 },
    Gamma(Gamma<f64>),
}

impl PiSampler {
    pub fn new(pi: &MeasureFamily, w: f64) -> Result<Self> {
        let mut comps = Vec::new();
        let mut weights = Vec::new();
        match &pi.variant {
            PiVariant::PointMass { x0 } => {
                comps.push(Comp::Atom(*x0));
                weights.push(x0.powf(w));
            }
            PiVariant::PowerDensity { a } => {
                let e = a + w;
                let m = power_integral(e, 0.0, 1.0).ok_or_else(|| {
                    Error::Unsupported(format!("x^{w} pi has infinite mass"))
                })?;
                comps.push(Comp::Power { lo: 0.0, hi: 1.0, e });
                weights.push((1.0 + a) * m);
            }
            PiVariant::GammaDensity { shape, rate } => {
                let s = shape + w;
                if s <= 0.0 {
                    return Err(Error::Unsupported(format!("x^{w} pi has infinite mass")));
                }
                let g = Gamma::new(s, 1.0 / rate)
                    .map_err(|e| Error::InvalidParameter(format!("gamma sampler: {e}")))?;
                comps.push(Comp::Gamma(g));
                weights.push((ln_gamma(s) - ln_gamma(*shape) - w * rate.ln()).exp());
            }
            PiVariant::DyadicExotic { a } => {
                for n in 0..dyadic::ENUMERATED_ATOMS {
                    let x = dyadic::point(n);
                    let l = dyadic::log2_point(n);
                    comps.push(Comp::Atom(x));
                    weights.push((l * (1.0 + a + w)).exp2() * (1.0 - (l * (1.0 + a)).exp2()));
                }
            }
            PiVariant::Tabulated { atoms, segments } => {
                for at in atoms {
                    comps.push(Comp::Atom(at.x));
                    weights.push(at.mass * at.x.powf(w));
                }
                for s in segments {
                    let e = s.power + w;
                    let m = power_integral(e, s.lo, s.hi).ok_or_else(|| {
                        Error::Unsupported(format!("x^{w} pi has infinite mass"))
                    })?;
                    comps.push(Comp::Power {
                        lo: s.lo,
                        hi: s.hi,
                        e,
                    });
                    weights.push(s.coef * m);
                }
            }
        }
        let mass: f64 = weights.iter().sum();
        if !mass.is_finite() {
            return Err(Error::Unsupported(format!("x^{w} pi has infinite mass")));
        }
        let index = if mass > 0.0 {
            Some(
                WeightedIndex::new(&weights)
                    .map_err(|e| Error::Numeric(format!("pi sampler weights: {e}")))?,
            )
        } else {
            None
        };
        Ok(PiSampler { comps, index, mass })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let i = match &self.index {
            Some(ix) => ix.sample(rng),
            None => 0,
        };
        match &self.comps[i] {
            Comp::Atom(x) => *x,
            Comp::Gamma(g) => g.sample(rng).max(f64::MIN_POSITIVE),
            Comp::Power { lo, hi, e } => {
                let u: f64 = 1.0 - rng.random::<f64>();
                sample_power(*lo, *hi, *e, u)
            }
        }
    }
}

/// Inverse CDF of the density `∝ x^e` on `(lo, hi]` at `u ∈ (0, 1]`.
fn sample_power(lo: f64, hi: f64, e: f64, u: f64) -> f64 {
    let k = e + 1.0;
    let x = if k == 0.0 {
        lo * (hi / lo).powf(u)
    } else if lo == 0.0 {
        hi * u.powf(1.0 / k)
    } else {
        let (l, h) = (lo.powf(k), hi.powf(k));
        (l + u * (h - l)).powf(1.0 / k)
    };
    x.clamp(f64::MIN_POSITIVE.max(lo), hi)
}

impl fmt::Display for MeasureFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.variant {
            PiVariant::PointMass { x0 } => write!(f, "PointMass(x0={x0})"),
            PiVariant::PowerDensity { a } => write!(f, "PowerDensity(a={a})"),
            PiVariant::GammaDensity { shape, rate } => {
                write!(f, "GammaDensity(shape={shape},rate={rate})")
            }
            PiVariant::DyadicExotic { a } => write!(f, "DyadicExotic(a={a})"),
            PiVariant::Tabulated { atoms, segments } => {
                write!(f, "Tabulated(atoms=[")?;
                for (i, at) in atoms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}:{}", at.x, at.mass)?;
                }
                write!(f, "],segments=[")?;
                for (i, s) in segments.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{}:{}:{}:{}", s.lo, s.hi, s.coef, s.power)?;
                }
                write!(f, "])")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fin(v: ExtReal) -> f64 {
        v.value().expect("finite")
    }

    #[test]
    fn point_mass_inverse_moment() {
        let pi = MeasureFamily::point_mass(1.0).unwrap();
        assert_eq!(fin(pi.m(-1.0)), 1.0);
    }

    #[test]
    fn power_density_inverse_moment() {
        let pi = MeasureFamily::power_density(0.5).unwrap();
        assert_relative_eq!(fin(pi.moment(-1.0, Region::UNIT).unwrap()), 3.0, max_relative = 1e-14);
        assert_eq!(pi.m(-2.0), ExtReal::PosInf);
        assert_relative_eq!(fin(pi.total_mass()), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn power_density_zero_is_rejected() {
        let err = MeasureFamily::power_density(0.0).unwrap_err();
        assert!(matches!(err, Error::Existence(_)));
    }

    #[test]
    fn tabulated_inverse_density_is_rejected() {
        let err = MeasureFamily::tabulated(
            vec![],
            vec![Segment {
                lo: 0.0,
                hi: 1.0,
                coef: 1.0,
                power: -1.0,
            }],
        )
        .unwrap_err();
        assert!(err.to_string().contains("m_{-1}"), "{err}");
    }

    #[test]
    fn gamma_moments_match_quadrature() {
        let pi = MeasureFamily::gamma(2.5, 1.5).unwrap();
        assert_relative_eq!(fin(pi.total_mass()), 1.0, max_relative = 1e-12);
        // E[1/X] for Gamma(k, θ) is θ/(k-1)
        assert_relative_eq!(fin(pi.m(-1.0)), 1.5 / 1.5, max_relative = 1e-12);
        let r = Region::new(0.3, 2.0).unwrap();
        let q = pi.integrate(|x| x.powf(-0.7), r, &[]);
        assert_relative_eq!(fin(pi.moment(-0.7, r).unwrap()), q.value, max_relative = 1e-9);
        let far = Region::new(8.0, f64::INFINITY).unwrap();
        let qf = pi.integrate(|x| x * x, far, &[]);
        assert_relative_eq!(fin(pi.moment(2.0, far).unwrap()), qf.value, max_relative = 1e-8);
    }

    #[test]
    fn dyadic_cdf_is_power_of_bracket() {
        let a = 0.5;
        let pi = MeasureFamily::dyadic(a).unwrap();
        for m in 1..6 {
            let am = dyadic::point(m);
            assert_relative_eq!(pi.cdf(am), am.powf(1.0 + a), max_relative = 1e-12);
            assert_relative_eq!(pi.cdf(am * 1.7), am.powf(1.0 + a), max_relative = 1e-12);
        }
        assert_relative_eq!(fin(pi.total_mass()), 0.5f64.powf(1.5), max_relative = 1e-14);
        assert!(pi.m(-1.0).is_finite());
        assert_eq!(pi.m(-1.5 - 1e-9), ExtReal::PosInf);
    }

    #[test]
    fn dyadic_a_zero_violates_existence() {
        assert!(MeasureFamily::dyadic(0.0).is_err());
        assert!(MeasureFamily::new_unchecked(PiVariant::DyadicExotic { a: 0.0 }).is_ok());
    }

    #[test]
    fn eps0_per_family() {
        assert_eq!(MeasureFamily::point_mass(2.0).unwrap().eps0(), 2.0);
        assert_eq!(MeasureFamily::power_density(0.5).unwrap().eps0(), 0.0);
    }

    #[test]
    fn size_biased_sampler_mean() {
        // x^{-1} π for PowerDensity(a) has density ∝ x^{a-1}: E = a/(a+1)
        let pi = MeasureFamily::power_density(0.5).unwrap();
        let s = PiSampler::new(&pi, -1.0).unwrap();
        assert_relative_eq!(s.mass, 3.0, max_relative = 1e-14);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0 / 3.0).abs() < 0.005, "{mean}");
    }

    #[test]
    fn gamma_sampler_is_size_biased() {
        let pi = MeasureFamily::gamma(3.0, 2.0).unwrap();
        let s = PiSampler::new(&pi, -1.0).unwrap();
        assert_relative_eq!(s.mass, 1.0, max_relative = 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 200_000;
        let mean: f64 = (0..n).map(|_| s.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            MeasureFamily::power_density(0.5).unwrap().to_string(),
            "PowerDensity(a=0.5)"
        );
        let t = MeasureFamily::tabulated(
            vec![Atom { x: 1.0, mass: 0.5 }],
            vec![Segment {
                lo: 0.0,
                hi: 1.0,
                coef: 2.0,
                power: 1.0,
            }],
        )
        .unwrap();
        assert_eq!(t.to_string(), "Tabulated(atoms=[1:0.5],segments=[0:1:2:1])");
    }
}
