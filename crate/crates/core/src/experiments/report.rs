use std::fmt;

use sha2::{Digest, Sha256};

use super::stats::LineFit;

/// One pass/fail check of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub statistic: f64,
    /// Acceptance region, human readable.
    pub accept: String,
    pub pass: bool,
}

impl Criterion {
    pub fn new(name: &str, statistic: f64, accept: String, pass: bool) -> Self {
        Criterion {
            name: name.to_string(),
            statistic,
            accept,
            pass: pass && statistic.is_finite(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStats {
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("pass"),
            Verdict::Fail => f.write_str("fail"),
            Verdict::Skipped(r) => write!(f, "skipped ({r})"),
        }
    }
}

/// Outcome of a growth experiment on one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub experiment: &'static str,
    pub config_digest: String,
    pub label: String,
    pub times: Vec<f64>,
    /// Last decade of the grid.
    pub tail_times: Vec<f64>,
    /// `R(t) = log|X*(t) - center(t)| / log t` per path on the tail window.
    pub rates: Vec<Vec<f64>>,
    /// Per-path summary statistic of the experiment.
    pub per_path: Vec<f64>,
    pub slope: Option<LineFit>,
    pub envelope_ratios: Option<RatioStats>,
    pub criteria: Vec<Criterion>,
    /// Every path equals its center; growth is undefined.
    pub degenerate: bool,
    pub skipped: Option<String>,
    pub notes: Vec<String>,
}

impl GrowthReport {
    pub(crate) fn new(experiment: &'static str, config_digest: String, label: String) -> Self {
        GrowthReport {
            experiment,
            config_digest,
            label,
            times: Vec::new(),
            tail_times: Vec::new(),
            rates: Vec::new(),
            per_path: Vec::new(),
            slope: None,
            envelope_ratios: None,
            criteria: Vec::new(),
            degenerate: false,
            skipped: None,
            notes: Vec::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        if let Some(r) = &self.skipped {
            return Verdict::Skipped(r.clone());
        }
        if self.criteria.iter().all(|c| c.pass) {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() != Verdict::Fail
    }
}

/// Hex SHA-256 of a textual description of a configuration.
pub fn digest(text: &str) -> String {
    let h = Sha256::digest(text.as_bytes());
    h.iter().map(|b| format!("{b:02x}")).collect()
}
