use rand::Rng;

use super::config::{PastWindow, SimConfig, SmallJumpMode};
use super::gaussian::GaussianSampler;
use super::path::{point_sum, PathSample};
use super::points::{PointSampler, PointSet};
use super::rng::RngStream;
use super::truncation::{past_mass, resolve_window, truncation_error, ErrorCertificate};
use crate::error::{Error, Result};
use crate::extreal::ExtReal;
use crate::measures::{GeneratingQuadruple, Region};

/// Everything about a `(q, cfg)` pair that does not depend on the random
/// draws: grid, samplers, deterministic drift term, Gaussian factor and
/// error certificate.
#[derive(Debug, Clone)]
pub struct SimPlan {
    cfg: SimConfig,
    times: Vec<f64>,
    window: PastWindow,
    sampler: PointSampler,
    deterministic: Vec<f64>,
    gaussian: Option<GaussianSampler>,
    certificate: ErrorCertificate,
    record: bool,
}

impl SimPlan {
    pub fn new(q: &GeneratingQuadruple, cfg: &SimConfig) -> Result<Self> {
        cfg.validate()?;
        let times = cfg.grid.times(cfg.horizon)?;
        let window = resolve_window(q, cfg)?;
        let sampler = PointSampler::new(q, cfg, window)?;
        let certificate = truncation_error(q, cfg)?;
        let eps = cfg.small_jump_cutoff;
        let lam = q.lam();
        let m1 = q.m_minus1();

        let deterministic = match cfg.small_jump_mode {
            SmallJumpMode::Drop => {
                let c = finite(lam.signed_first_moment(Region::UNIT)?).ok_or_else(|| {
                    Error::Configuration(
                        "small-jump mode `drop` needs finite variation: the integral of |z| over |z| <= 1 diverges"
                            .into(),
                    )
                })?;
                let k = q.a() - c;
                times.iter().map(|t| if k == 0.0 { 0.0 } else { k * t * m1 }).collect()
            }
            SmallJumpMode::CompensateOnly | SmallJumpMode::GaussianRefine => {
                let c = if eps < 1.0 {
                    finite(lam.signed_first_moment(Region::new(eps, 1.0)?)?).ok_or_else(|| {
                        Error::Numeric(format!("compensator over ({eps}, 1] is not finite"))
                    })?
                } else {
                    0.0
                };
                times
                    .iter()
                    .map(|&t| {
                        let full = t * m1;
                        let comp = if c == 0.0 {
                            0.0
                        } else {
                            c * (full - past_mass(q.pi(), window, t).value)
                        };
                        q.a() * full - comp
                    })
                    .collect()
            }
        };

        let mut b = q.b();
        if cfg.small_jump_mode == SmallJumpMode::GaussianRefine && eps > 0.0 {
            b += finite(lam.abs_moment(2.0, Region::new(0.0, eps)?)?).unwrap_or(0.0);
        }
        let gaussian = if b > 0.0 {
            Some(GaussianSampler::new(q.pi(), b, &times)?)
        } else {
            None
        };
        let record = cfg.record_decomposition && lam.is_one_sided();

        Ok(SimPlan {
            cfg: cfg.clone(),
            times,
            window,
            sampler,
            deterministic,
            gaussian,
            certificate,
            record,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// The resolved past window.
    pub fn window(&self) -> PastWindow {
        self.window
    }

    pub fn certificate(&self) -> ErrorCertificate {
        self.certificate
    }

    pub fn point_sampler(&self) -> &PointSampler {
        &self.sampler
    }

    /// Drift and compensator part of `X*(t_k)`.
    pub fn deterministic(&self) -> &[f64] {
        &self.deterministic
    }

    pub fn has_gaussian(&self) -> bool {
        self.gaussian.is_some()
    }

    pub fn sample_points<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PointSet> {
        self.sampler.sample(rng)
    }

    pub fn sample_gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<f64>> {
        self.gaussian.as_ref().map(|g| g.sample(rng))
    }

    pub fn evaluate(&self, points: &PointSet, gauss: Option<&[f64]>) -> Result<PathSample> {
        if points.horizon != self.cfg.horizon
            || points.cutoff != self.cfg.small_jump_cutoff
            || points.window != self.window
        {
            return Err(Error::Usage(format!(
                "points were sampled for (T={}, eps={}, window={}), plan has (T={}, eps={}, window={})",
                points.horizon, points.cutoff, points.window, self.cfg.horizon, self.cfg.small_jump_cutoff, self.window
            )));
        }
        if let Some(g) = gauss {
            if g.len() != self.times.len() {
                return Err(Error::Usage(format!(
                    "gaussian path has {} values for {} grid times",
                    g.len(),
                    self.times.len()
                )));
            }
        }
        let (mut values, decomposition) = point_sum(&points.points, &self.times, self.record);
        for (k, v) in values.iter_mut().enumerate() {
            *v += self.deterministic[k] + gauss.map_or(0.0, |g| g[k]);
        }
        Ok(PathSample {
            path_id: 0,
            times: self.times.clone(),
            values,
            decomposition,
            certificate: self.certificate,
        })
    }

    /// Path `i` from the stream `(seed, i)`: points first, then the
    /// Gaussian vector.
    pub fn simulate_path(&self, path_id: u64) -> Result<PathSample> {
        let mut rng = RngStream::new(self.cfg.seed, path_id).rng();
        let points = self.sample_points(&mut rng)?;
        let gauss = self.sample_gaussian(&mut rng);
        let mut p = self.evaluate(&points, gauss.as_deref())?;
        p.path_id = path_id;
        Ok(p)
    }
}

fn finite(x: ExtReal) -> Option<f64> {
    x.value()
}

/// Samples the Poisson random measure on the window of `cfg`.
pub fn sample_points<R: Rng + ?Sized>(q: &GeneratingQuadruple, cfg: &SimConfig, rng: &mut R) -> Result<PointSet> {
    cfg.validate()?;
    let window = resolve_window(q, cfg)?;
    PointSampler::new(q, cfg, window)?.sample(rng)
}

/// `X*(t_k)` from sampled points, drift, compensator and an optional
/// Gaussian path.
pub fn evaluate_integrated(
    points: &PointSet,
    q: &GeneratingQuadruple,
    cfg: &SimConfig,
    gauss: Option<&[f64]>,
) -> Result<PathSample> {
    SimPlan::new(q, cfg)?.evaluate(points, gauss)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{Drift, JumpLaw, LevyFamily, LevyPart, MeasureFamily};
    use crate::simulator::config::TimeGrid;
    use crate::simulator::points::PointTriple;

    fn cp(rate: f64, jumps: JumpLaw) -> GeneratingQuadruple {
        GeneratingQuadruple::new(
            Drift::Natural,
            0.0,
            LevyFamily::positive(LevyPart::CompoundPoisson { rate, jumps }).unwrap(),
            MeasureFamily::point_mass(1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn empty_point_set_gives_zero() {
        let q = cp(1.0, JumpLaw::Uniform { lo: 1.5, hi: 2.0 });
        let cfg = SimConfig::new(10.0, TimeGrid::List(vec![1.0, 5.0, 10.0]));
        let plan = SimPlan::new(&q, &cfg).unwrap();
        let empty = PointSet {
            points: vec![],
            horizon: 10.0,
            cutoff: cfg.small_jump_cutoff,
            window: plan.window(),
        };
        let p = plan.evaluate(&empty, None).unwrap();
        assert!(p.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_point_without_compensation() {
        let q = cp(1.0, JumpLaw::Fixed { size: 1.0 });
        let mut cfg = SimConfig::new(1.0, TimeGrid::List(vec![1.0]));
        cfg.small_jump_mode = SmallJumpMode::Drop;
        let plan = SimPlan::new(&q, &cfg).unwrap();
        let set = PointSet {
            points: vec![PointTriple { xi: 1.0, tau: 0.0, zeta: 1.0 }],
            horizon: 1.0,
            cutoff: cfg.small_jump_cutoff,
            window: plan.window(),
        };
        let p = plan.evaluate(&set, None).unwrap();
        assert!((p.values[0] - (1.0 - (-1f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn mismatched_points_are_rejected() {
        let q = cp(1.0, JumpLaw::Fixed { size: 1.0 });
        let cfg = SimConfig::new(10.0, TimeGrid::List(vec![10.0]));
        let plan = SimPlan::new(&q, &cfg).unwrap();
        let mut set = plan.sample_points(&mut RngStream::new(0, 0).rng()).unwrap();
        set.horizon = 5.0;
        assert!(matches!(plan.evaluate(&set, None), Err(Error::Usage(_))));
        let set = plan.sample_points(&mut RngStream::new(0, 0).rng()).unwrap();
        assert!(matches!(plan.evaluate(&set, Some(&[1.0, 2.0])), Err(Error::Usage(_))));
    }

    #[test]
    fn drop_needs_finite_variation() {
        let q = GeneratingQuadruple::new(
            Drift::Natural,
            0.0,
            LevyFamily::positive(LevyPart::StableLike { beta0: 1.5, c: 1.0 }).unwrap(),
            MeasureFamily::point_mass(1.0).unwrap(),
        )
        .unwrap();
        let mut cfg = SimConfig::new(10.0, TimeGrid::List(vec![10.0]));
        cfg.small_jump_mode = SmallJumpMode::Drop;
        assert!(matches!(SimPlan::new(&q, &cfg), Err(Error::Configuration(_))));
    }

    #[test]
    fn decomposition_identity_in_drop_mode() {
        let q = GeneratingQuadruple::new(
            Drift::Natural,
            0.0,
            LevyFamily::positive(LevyPart::StableLike { beta0: 0.6, c: 1.0 }).unwrap(),
            MeasureFamily::gamma(2.0, 1.0).unwrap(),
        )
        .unwrap();
        let mut cfg = SimConfig::new(100.0, TimeGrid::Log { t0: 0.5, ratio: 1.5 });
        cfg.small_jump_mode = SmallJumpMode::Drop;
        cfg.record_decomposition = true;
        let plan = SimPlan::new(&q, &cfg).unwrap();
        assert!(plan.deterministic().iter().all(|&d| d == 0.0));
        for i in 0..5 {
            let p = plan.simulate_path(i).unwrap();
            let d = p.decomposition.as_ref().unwrap();
            for k in 0..p.times.len() {
                let scale = d.x_minus[k].abs() + d.x_plus1[k].abs() + d.x_plus2[k].abs();
                assert!((p.values[k] - d.recombine(k)).abs() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn simulate_is_reproducible() {
        let q = cp(1.0, JumpLaw::Exponential { rate: 1.0 });
        let cfg = SimConfig::new(50.0, TimeGrid::Log { t0: 1.0, ratio: 2.0 });
        let plan = SimPlan::new(&q, &cfg).unwrap();
        assert_eq!(plan.simulate_path(3).unwrap(), plan.simulate_path(3).unwrap());
        assert_ne!(plan.simulate_path(3).unwrap().values, plan.simulate_path(4).unwrap().values);
    }
}
