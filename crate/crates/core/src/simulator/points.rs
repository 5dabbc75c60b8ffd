use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::config::{PastWindow, SimConfig};
use crate::error::{Error, Result};
use crate::measures::{GeneratingQuadruple, JumpSampler, PiSampler};

/// One atom `(ξ, τ, ζ)` of the Poisson random measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTriple {
    pub xi: f64,
    pub tau: f64,
    pub zeta: f64,
}

/// Sampled atoms together with the window they were drawn on.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    pub points: Vec<PointTriple>,
    pub horizon: f64,
    pub cutoff: f64,
    pub window: PastWindow,
}

/// Precomputed samplers for one `(q, cfg)` pair.
#[derive(Debug, Clone)]
pub struct PointSampler {
    horizon: f64,
    cutoff: f64,
    window: PastWindow,
    pi0: Option<PiSampler>,
    pi1: Option<PiSampler>,
    pos: JumpSampler,
    neg: JumpSampler,
}

impl PointSampler {
    /// `window` must already be resolved (not [`PastWindow::Auto`]).
    pub fn new(q: &GeneratingQuadruple, cfg: &SimConfig, window: PastWindow) -> Result<Self> {
        let eps = cfg.small_jump_cutoff;
        let pos = JumpSampler::new(q.lam().pos(), eps)?;
        let neg = JumpSampler::new(q.lam().neg(), eps)?;
        let (pi0, pi1) = match window {
            PastWindow::Uniform(_) => (Some(PiSampler::new(q.pi(), 0.0)?), None),
            PastWindow::RateScaled(_) => (
                Some(PiSampler::new(q.pi(), 0.0)?),
                Some(PiSampler::new(q.pi(), -1.0)?),
            ),
            PastWindow::Auto => {
                return Err(Error::Usage("point sampler needs a resolved past window".into()))
            }
        };
        Ok(PointSampler {
            horizon: cfg.horizon,
            cutoff: eps,
            window,
            pi0,
            pi1,
            pos,
            neg,
        })
    }

    /// `λ̄⁺(ε) + λ̄⁻(ε)`.
    pub fn jump_rate(&self) -> f64 {
        self.pos.mass + self.neg.mass
    }

    /// Expected number of sampled points.
    pub fn expected_count(&self) -> f64 {
        let lam = self.jump_rate();
        let m0 = self.pi0.as_ref().map_or(0.0, |s| s.mass);
        match self.window {
            PastWindow::Uniform(s) => m0 * (self.horizon + s) * lam,
            PastWindow::RateScaled(l) => {
                let m1 = self.pi1.as_ref().map_or(0.0, |s| s.mass);
                (m0 * self.horizon + m1 * l) * lam
            }
            PastWindow::Auto => f64::NAN,
        }
    }

    fn jump<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let lam = self.jump_rate();
        if rng.random::<f64>() * lam < self.pos.mass {
            self.pos.sample(rng)
        } else {
            -self.neg.sample(rng)
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PointSet> {
        let lam = self.jump_rate();
        let t = self.horizon;
        let mut points = Vec::new();
        if lam > 0.0 {
            match self.window {
                PastWindow::Uniform(s) => {
                    let pi0 = self.pi0.as_ref().expect("uniform window has a rate sampler");
                    let n = poisson(pi0.mass * (t + s) * lam, rng)?;
                    points.reserve(n);
                    for _ in 0..n {
                        let xi = pi0.sample(rng);
                        let tau = t - (t + s) * rng.random::<f64>();
                        let zeta = self.jump(rng);
                        points.push(PointTriple { xi, tau, zeta });
                    }
                }
                PastWindow::RateScaled(l) => {
                    let pi0 = self.pi0.as_ref().expect("rate window has a rate sampler");
                    let pi1 = self.pi1.as_ref().expect("rate window has a weighted sampler");
                    let n1 = poisson(pi0.mass * t * lam, rng)?;
                    let n2 = poisson(pi1.mass * l * lam, rng)?;
                    points.reserve(n1 + n2);
                    for _ in 0..n1 {
                        let xi = pi0.sample(rng);
                        let tau = t * (1.0 - rng.random::<f64>());
                        let zeta = self.jump(rng);
                        points.push(PointTriple { xi, tau, zeta });
                    }
                    for _ in 0..n2 {
                        let xi = pi1.sample(rng);
                        let tau = -(l / xi) * rng.random::<f64>();
                        let zeta = self.jump(rng);
                        points.push(PointTriple { xi, tau, zeta });
                    }
                }
                PastWindow::Auto => unreachable!("resolved in new"),
            }
        }
        Ok(PointSet {
            points,
            horizon: t,
            cutoff: self.cutoff,
            window: self.window,
        })
    }
}

fn poisson<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> Result<usize> {
    if mean == 0.0 {
        return Ok(0);
    }
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::Unsupported(format!("expected point count {mean} is not finite")));
    }
    if mean > 1e9 {
        return Err(Error::Unsupported(format!(
            "expected point count {mean:e} exceeds the simulation budget; raise the cutoff"
        )));
    }
    let d = Poisson::new(mean).map_err(|e| Error::Numeric(format!("poisson({mean}): {e}")))?;
    Ok(d.sample(rng) as usize)
}
