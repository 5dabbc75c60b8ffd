use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::analytics::covariance;
use crate::error::{Error, Result};
use crate::measures::{GeneratingQuadruple, MeasureFamily};

/// Largest grid for which the covariance matrix is factorised.
pub const MAX_GAUSSIAN_GRID: usize = 4096;

/// Centered Gaussian vector `b · Cov(t_i, t_j)` on a fixed grid.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    factor: DMatrix<f64>,
    /// Diagonal jitter that was needed, 0 if none.
    pub jitter: f64,
}

impl GaussianSampler {
    pub fn new(pi: &MeasureFamily, b: f64, times: &[f64]) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::Domain(format!("gaussian path needs b > 0, got {b}")));
        }
        let g = times.len();
        if g == 0 || g > MAX_GAUSSIAN_GRID {
            return Err(Error::Unsupported(format!(
                "gaussian grid size {g} outside 1..={MAX_GAUSSIAN_GRID}"
            )));
        }
        let mut c = DMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..=i {
                let v = b * covariance(pi, times[i], times[j]).value;
                c[(i, j)] = v;
                c[(j, i)] = v;
            }
        }
        if let Some(ch) = c.clone().cholesky() {
            return Ok(GaussianSampler {
                factor: ch.l(),
                jitter: 0.0,
            });
        }
        let jitter = 1e-12 * c.diagonal().mean();
        let mut cj = c.clone();
        for i in 0..g {
            cj[(i, i)] += jitter;
        }
        match cj.cholesky() {
            Some(ch) => Ok(GaussianSampler {
                factor: ch.l(),
                jitter,
            }),
            None => {
                let ev = c.symmetric_eigenvalues();
                let (lo, hi) = ev.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, z), &v| {
                    (a.min(v), z.max(v))
                });
                Err(Error::Numeric(format!(
                    "covariance not positive definite after jitter {jitter:e}: eigenvalues in [{lo:e}, {hi:e}], condition {:e}",
                    hi / lo.abs()
                )))
            }
        }
    }

    pub fn len(&self) -> usize {
        self.factor.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let z = DVector::from_fn(self.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        (&self.factor * z).iter().copied().collect()
    }
}

/// One Gaussian path of `X*` at `times` for the Gaussian part of `q`.
pub fn sample_gaussian_path<R: Rng + ?Sized>(
    q: &GeneratingQuadruple,
    times: &[f64],
    rng: &mut R,
) -> Result<Vec<f64>> {
    Ok(GaussianSampler::new(q.pi(), q.b(), times)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::gaussian_variance;
    use crate::measures::{Drift, LevyFamily};
    use crate::simulator::rng::RngStream;
    use approx::assert_relative_eq;

    #[test]
    fn covariance_matrix_is_consistent() {
        let pi = MeasureFamily::power_density(0.5).unwrap();
        let q = GeneratingQuadruple::new(Drift::Natural, 2.0, LevyFamily::zero(), pi.clone()).unwrap();
        let ts = [0.5, 1.0, 3.0, 10.0, 40.0];
        for &t in &ts {
            let v = 2.0 * covariance(&pi, t, t).value;
            assert_relative_eq!(v, gaussian_variance(&q, t).unwrap().value, max_relative = 1e-8);
        }
        for &a in &ts {
            for &b in &ts {
                let c = covariance(&pi, a, b).value;
                let bound = (covariance(&pi, a, a).value * covariance(&pi, b, b).value).sqrt();
                assert!(c <= bound * (1.0 + 1e-12));
            }
        }
        let s = GaussianSampler::new(&pi, 2.0, &ts).unwrap();
        assert_eq!(s.len(), 5);
        let x = s.sample(&mut RngStream::new(0, 0).rng());
        assert!(x.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn rejects_bad_input() {
        let pi = MeasureFamily::point_mass(1.0).unwrap();
        assert!(GaussianSampler::new(&pi, 0.0, &[1.0]).is_err());
        assert!(GaussianSampler::new(&pi, 1.0, &[]).is_err());
    }
}
