use crate::error::{Error, Result};
use crate::measures::{gamma_condition, Drift, GeneratingQuadruple, LevyFamily, LevyPart, MeasureFamily, PiVariant};

#[derive(Debug, Clone, PartialEq)]
pub struct ExoticRow {
    pub gamma: f64,
    pub finite: bool,
    /// `γ < 2(1+a) − b` when `γ < b`, else `γ < 1+a`.
    pub expected: bool,
    /// Same as `expected` under the threshold `2(1+a) − b` alone.
    pub threshold_rule: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExoticReport {
    pub a: f64,
    pub b: f64,
    pub alpha0: f64,
    pub beta0: f64,
    pub threshold: f64,
    pub rows: Vec<ExoticRow>,
    /// Partial sums of `Σ_n a_{n-1}^{2(1+a-γ)+γ-b}` just below the threshold.
    pub partial_sums: Vec<f64>,
}

impl ExoticReport {
    pub fn indices_ok(&self) -> bool {
        self.alpha0 == self.a && self.beta0 == self.b
    }

    pub fn sums_ok(&self) -> bool {
        let s = &self.partial_sums;
        s.windows(2).all(|w| w[1] > w[0] || (w[1] == w[0] && w[0] > 0.0))
            && s.last().is_some_and(|v| v.is_finite())
    }

    pub fn passed(&self) -> bool {
        self.indices_ok() && self.sums_ok() && self.rows.iter().all(|r| r.finite == r.expected)
    }
}

/// The quadruple built from the dyadic π with exponent `a` and the dyadic
/// λ with exponent `b`. Existence checks are skipped.
pub fn exotic_quadruple(a: f64, b: f64) -> Result<GeneratingQuadruple> {
    let pi = MeasureFamily::new_unchecked(PiVariant::DyadicExotic { a })?;
    let lam = LevyFamily::new_unchecked(LevyPart::DyadicExotic { b }, LevyPart::zero())?;
    GeneratingQuadruple::new_unchecked(Drift::Explicit(0.0), 0.0, lam, pi)
}

/// Checks the indices and the γ-integrability threshold of the dyadic pair.
pub fn verify_exotic(a: f64, b: f64, gammas: &[f64]) -> Result<ExoticReport> {
    if !(a >= 0.0) || !(b > 0.0) {
        return Err(Error::InvalidParameter(format!("need a >= 0 and b > 0, got ({a}, {b})")));
    }
    let q = exotic_quadruple(a, b)?;
    let ix = q.indices();
    let threshold = 2.0 * (1.0 + a) - b;
    let rows = gammas
        .iter()
        .map(|&g| {
            let finite = gamma_condition(&q, g, false)?.is_finite();
            let expected = if g < b { g < threshold } else { g < 1.0 + a };
            Ok(ExoticRow {
                gamma: g,
                finite,
                expected,
                threshold_rule: g < threshold,
            })
        })
        .collect::<Result<_>>()?;

    // exponent 2(1+a−γ)+γ−b = threshold − γ > 0 below the threshold
    let g = (threshold - 0.05).max(threshold / 2.0);
    let p = threshold - g;
    let mut partial_sums = Vec::new();
    let mut s = 0.0;
    for n in 1..=8 {
        // a_{n-1} = 2^{-2^{n-1}}
        s += (-p * 2f64.powi(n - 1)).exp2();
        partial_sums.push(s);
    }
    Ok(ExoticReport {
        a,
        b,
        alpha0: ix.alpha.value,
        beta0: ix.beta.value,
        threshold,
        rows,
        partial_sums,
    })
}
