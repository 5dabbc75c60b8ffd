use super::points::PointTriple;
use super::truncation::ErrorCertificate;
use crate::error::{Error, Result};
use crate::numerics::one_minus_exp;

/// Beyond this `1 - e^{-y}` rounds to exactly 1.
const FREEZE: f64 = 40.0;
/// Beyond this `e^{-y}` underflows.
const UNDERFLOW: f64 = 745.0;

/// `(X*₋, X*₊,₁, X*₊,₂)` of the point sum, one entry per grid time.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub x_minus: Vec<f64>,
    pub x_plus1: Vec<f64>,
    pub x_plus2: Vec<f64>,
}

impl Decomposition {
    /// `X*₋ + X*₊,₁ − X*₊,₂` at grid index `k`.
    pub fn recombine(&self, k: usize) -> f64 {
        self.x_minus[k] + self.x_plus1[k] - self.x_plus2[k]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    pub path_id: u64,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub decomposition: Option<Decomposition>,
    pub certificate: ErrorCertificate,
}

/// `Σ ζ f_t(ξ, τ)` at every grid time, and the decomposition if asked.
///
/// Each point is walked forward from its first active grid time until its
/// kernel saturates; the saturated value is then carried by a difference
/// array, so the cost per point is the number of unsaturated grid times.
pub(crate) fn point_sum(points: &[PointTriple], times: &[f64], record: bool) -> (Vec<f64>, Option<Decomposition>) {
    let g = times.len();
    let mut vals = vec![0.0; g];
    let mut carry = vec![0.0; g + 1];
    let mut dec = record.then(|| Decomposition {
        x_minus: vec![0.0; g],
        x_plus1: vec![0.0; g],
        x_plus2: vec![0.0; g],
    });
    let mut minus_carry = vec![0.0; if record { g + 1 } else { 0 }];
    let mut plus1_carry = vec![0.0; if record { g + 1 } else { 0 }];

    for p in points {
        let amp = p.zeta / p.xi;
        if p.tau <= 0.0 {
            let c = amp * (p.xi * p.tau).exp();
            if c == 0.0 {
                continue;
            }
            for (k, &t) in times.iter().enumerate() {
                let y = p.xi * t;
                if y >= FREEZE {
                    carry[k] += c;
                    if record {
                        minus_carry[k] += c;
                    }
                    break;
                }
                let v = c * one_minus_exp(y);
                vals[k] += v;
                if let Some(d) = dec.as_mut() {
                    d.x_minus[k] += v;
                }
            }
        } else {
            let k0 = times.partition_point(|&t| t < p.tau);
            if k0 == g {
                continue;
            }
            if record {
                plus1_carry[k0] += amp;
            }
            let mut frozen = false;
            for k in k0..g {
                let y = p.xi * (times[k] - p.tau);
                if !frozen {
                    if y >= FREEZE {
                        carry[k] += amp;
                        frozen = true;
                        if !record {
                            break;
                        }
                    } else {
                        vals[k] += amp * one_minus_exp(y);
                    }
                }
                if let Some(d) = dec.as_mut() {
                    if y > UNDERFLOW {
                        break;
                    }
                    d.x_plus2[k] += amp * (-y).exp();
                }
            }
        }
    }

    let mut acc = 0.0;
    for k in 0..g {
        acc += carry[k];
        vals[k] += acc;
    }
    if let Some(d) = dec.as_mut() {
        let (mut m, mut p1) = (0.0, 0.0);
        for k in 0..g {
            m += minus_carry[k];
            p1 += plus1_carry[k];
            d.x_minus[k] += m;
            d.x_plus1[k] = p1;
        }
    }
    (vals, dec)
}

/// `(X*₋(t), X*₊,₁(t), X*₊,₂(t))` for a set of positive-jump points.
pub fn decompose(points: &[PointTriple], t: f64) -> Result<(f64, f64, f64)> {
    if points.iter().any(|p| p.zeta < 0.0) {
        return Err(Error::Usage("decomposition needs a positive jump measure".into()));
    }
    let (mut xm, mut p1, mut p2) = (0.0, 0.0, 0.0);
    for p in points {
        let amp = p.zeta / p.xi;
        if p.tau <= 0.0 {
            xm += amp * one_minus_exp(p.xi * t) * (p.xi * p.tau).exp();
        } else if p.tau <= t {
            p1 += amp;
            p2 += amp * (-p.xi * (t - p.tau)).exp();
        }
    }
    Ok((xm, p1, p2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(xi: f64, tau: f64, zeta: f64) -> PointTriple {
        PointTriple { xi, tau, zeta }
    }

    #[test]
    fn single_point_kernel() {
        let (v, _) = point_sum(&[pt(1.0, 0.0, 1.0)], &[1.0], false);
        assert_relative_eq!(v[0], 1.0 - (-1f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn hand_decomposition() {
        let (xm, p1, p2) = decompose(&[pt(1.0, 0.5, 2.0)], 1.0).unwrap();
        assert_eq!(xm, 0.0);
        assert_eq!(p1, 2.0);
        assert_relative_eq!(p2, 2.0 * (-0.5f64).exp(), max_relative = 1e-15);
        assert_eq!(decompose(&[pt(1.0, 2.0, 1.0)], 1.0).unwrap(), (0.0, 0.0, 0.0));
        assert!(decompose(&[pt(1.0, 0.5, -1.0)], 1.0).is_err());
    }

    #[test]
    fn grid_sum_matches_direct_evaluation() {
        let pts = vec![
            pt(0.01, -30.0, 1.5),
            pt(3.0, -0.2, 0.7),
            pt(0.2, 0.3, 2.0),
            pt(50.0, 1.0, 1.0),
            pt(1e-3, 7.5, 0.4),
            pt(2.0, 9.9, 3.0),
        ];
        let times: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        let (v, d) = point_sum(&pts, &times, true);
        let d = d.unwrap();
        for (k, &t) in times.iter().enumerate() {
            let (xm, p1, p2) = decompose(&pts, t).unwrap();
            let direct: f64 = pts
                .iter()
                .map(|p| {
                    let amp = p.zeta / p.xi;
                    if p.tau <= 0.0 {
                        amp * (p.xi * p.tau).exp() * one_minus_exp(p.xi * t)
                    } else if p.tau <= t {
                        amp * one_minus_exp(p.xi * (t - p.tau))
                    } else {
                        0.0
                    }
                })
                .sum();
            assert_relative_eq!(v[k], direct, max_relative = 1e-13, epsilon = 1e-300);
            assert_relative_eq!(d.x_minus[k], xm, max_relative = 1e-13);
            assert_relative_eq!(d.x_plus1[k], p1, max_relative = 1e-13);
            assert_relative_eq!(d.x_plus2[k], p2, max_relative = 1e-13, epsilon = 1e-300);
            let scale = xm.abs() + p1.abs() + p2.abs();
            assert!((v[k] - d.recombine(k)).abs() <= 1e-12 * scale.max(1e-300));
        }
    }
}
