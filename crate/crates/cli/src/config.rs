//! The JSON run document and its conversion into toolkit types.

use serde::{Deserialize, Serialize};
use supou::experiments::Tolerances;
use supou::measures::{
    Atom, Drift, GeneratingQuadruple, JumpLaw, LevyFamily, LevyPart, MeasureFamily, PiVariant, Segment,
};
use supou::simulator::{PastWindow, SimConfig, SmallJumpMode, TimeGrid};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSpec,
    #[serde(default)]
    pub sim: SimSpec,
    #[serde(default)]
    pub experiment: ExperimentSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    #[serde(default)]
    pub a: DriftSpec,
    #[serde(default)]
    pub b: f64,
    #[serde(default)]
    pub lambda: LambdaSpec,
    pub pi: PiSpec,
}

/// `"natural"` or an explicit number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(try_from = "DriftRepr", into = "DriftRepr")]
pub enum DriftSpec {
    #[default]
    Natural,
    Explicit(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum DriftRepr {
    Num(f64),
    Tag(String),
}

impl TryFrom<DriftRepr> for DriftSpec {
    type Error = String;

    fn try_from(r: DriftRepr) -> Result<Self, String> {
        match r {
            DriftRepr::Num(a) => Ok(DriftSpec::Explicit(a)),
            DriftRepr::Tag(s) if s == "natural" => Ok(DriftSpec::Natural),
            DriftRepr::Tag(s) => Err(format!("expected \"natural\" or a number, got \"{s}\"")),
        }
    }
}

impl From<DriftSpec> for DriftRepr {
    fn from(d: DriftSpec) -> Self {
        match d {
            DriftSpec::Natural => DriftRepr::Tag("natural".into()),
            DriftSpec::Explicit(a) => DriftRepr::Num(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive: Option<LevySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative: Option<LevySpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum LevySpec {
    CompoundPoisson { rate: f64, jumps: JumpSpec },
    StableLike { beta0: f64, c: f64 },
    TemperedStable { beta0: f64, theta: f64, c: f64 },
    ParetoTail { eta: f64, scale: f64 },
    DyadicExotic { b: f64 },
    Scaled { factor: f64, inner: Box<LevySpec> },
    Sum { parts: Vec<LevySpec> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", deny_unknown_fields)]
pub enum JumpSpec {
    Fixed { size: f64 },
    Discrete { atoms: Vec<(f64, f64)> },
    Uniform { lo: f64, hi: f64 },
    Exponential { rate: f64 },
    ShiftedExponential { shift: f64, rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum PiSpec {
    PointMass { x0: f64 },
    PowerDensity { a: f64 },
    Gamma { shape: f64, rate: f64 },
    DyadicExotic { a: f64 },
    Tabulated {
        #[serde(default)]
        atoms: Vec<AtomSpec>,
        #[serde(default)]
        segments: Vec<SegmentSpec>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomSpec {
    pub x: f64,
    pub mass: f64,
}

/// Density `coef · x^power` on `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub lo: f64,
    pub hi: f64,
    pub coef: f64,
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    /// `n` log-spaced points from `t0` to `t1`.
    LogPoints { t0: f64, t1: f64, n: usize },
    Log { t0: f64, ratio: f64 },
    List(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PastSpec {
    #[default]
    Auto,
    Uniform(f64),
    RateScaled(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModeSpec {
    Drop,
    #[default]
    CompensateOnly,
    GaussianRefine,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSpec {
    pub horizon: f64,
    pub grid: GridSpec,
    pub past: PastSpec,
    pub small_jump_cutoff: f64,
    pub small_jump_mode: ModeSpec,
    pub seed: u64,
    pub n_paths: usize,
    pub record_decomposition: bool,
}

impl Default for SimSpec {
    fn default() -> Self {
        SimSpec {
            horizon: 100.0,
            grid: GridSpec::LogPoints { t0: 1.0, t1: 100.0, n: 20 },
            past: PastSpec::Auto,
            small_jump_cutoff: 0.01,
            small_jump_mode: ModeSpec::CompensateOnly,
            seed: 0,
            n_paths: 10,
            record_decomposition: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Tail,
    Mz,
    Lil,
    Sweep,
    Exotic,
    Cutoff,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Tail => "tail",
            Suite::Mz => "mz",
            Suite::Lil => "lil",
            Suite::Sweep => "sweep",
            Suite::Exotic => "exotic",
            Suite::Cutoff => "cutoff",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExoticSpec {
    pub a: f64,
    pub b: f64,
    pub gammas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    /// Exponent of the MZ normalisation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    /// Time of the tail check; defaults to the horizon.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Tail levels, also used by `analyze`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub levels: Vec<f64>,
    /// Moment orders for `analyze`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub betas: Vec<f64>,
    /// Models of the sweep; the main model when empty.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<ModelSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub exotic: Vec<ExoticSpec>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub cutoffs: Vec<f64>,
    pub tolerances: ToleranceSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ToleranceSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mz_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mz_excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lil_t_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lil_max_band: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lil_median_band: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep_t_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope_se_mult: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_excess: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail_se_mult: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_slope: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: String,
    pub formats: Vec<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: "out".into(),
            formats: vec!["csv".into()],
        }
    }
}

/// Parses a run document; errors carry the JSON path of the offending field.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("{path}: {}", e.into_inner()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn field(path: &str) -> impl Fn(supou::Error) -> CliError + '_ {
    move |e| CliError::Config(format!("{path}: {e}"))
}

impl RunConfig {
    /// Checks everything that does not need a computation.
    pub fn validate(&self) -> Result<(), CliError> {
        self.model.build("model")?;
        self.sim_config()?;
        for (i, m) in self.experiment.models.iter().enumerate() {
            m.build(&format!("experiment.models[{i}]"))?;
        }
        if self.output.formats.iter().any(|f| f != "csv") {
            return Err(CliError::Config("output.formats: only \"csv\" is supported".into()));
        }
        Ok(())
    }

    pub fn quadruple(&self) -> Result<GeneratingQuadruple, CliError> {
        self.model.build("model")
    }

    pub fn sim_config(&self) -> Result<SimConfig, CliError> {
        let s = &self.sim;
        let grid = match &s.grid {
            GridSpec::LogPoints { t0, t1, n } => {
                if *n < 2 || !(t0 > &0.0 && t1 > t0) {
                    return Err(CliError::Config(format!(
                        "sim.grid: log_points needs 0 < t0 < t1 and n >= 2, got ({t0}, {t1}, {n})"
                    )));
                }
                TimeGrid::log_points(*t0, *t1, *n)
            }
            GridSpec::Log { t0, ratio } => TimeGrid::Log { t0: *t0, ratio: *ratio },
            GridSpec::List(v) => TimeGrid::List(v.clone()),
        };
        let mut cfg = SimConfig::new(s.horizon, grid);
        cfg.past = match s.past {
            PastSpec::Auto => PastWindow::Auto,
            PastSpec::Uniform(v) => PastWindow::Uniform(v),
            PastSpec::RateScaled(v) => PastWindow::RateScaled(v),
        };
        cfg.small_jump_cutoff = s.small_jump_cutoff;
        cfg.small_jump_mode = match s.small_jump_mode {
            ModeSpec::Drop => SmallJumpMode::Drop,
            ModeSpec::CompensateOnly => SmallJumpMode::CompensateOnly,
            ModeSpec::GaussianRefine => SmallJumpMode::GaussianRefine,
        };
        cfg.seed = s.seed;
        cfg.n_paths = s.n_paths;
        cfg.record_decomposition = s.record_decomposition;
        cfg.validate().map_err(field("sim"))?;
        Ok(cfg)
    }

    pub fn tolerances(&self) -> Tolerances {
        let o = &self.experiment.tolerances;
        let mut t = Tolerances::default();
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = o.$f { t.$f = v; } )* };
        }
        set!(
            mz_ratio,
            mz_excess,
            lil_t_min,
            lil_max_band,
            lil_median_band,
            sweep_t_min,
            slope_margin,
            slope_se_mult,
            probe_excess,
            probe_ratio,
            tail_se_mult,
            cutoff_slope
        );
        t
    }

    /// Canonical JSON of everything that affects results; the output
    /// block is left out so a run hashes the same wherever it is written.
    pub fn canonical(&self) -> String {
        serde_json::to_string(&(&self.model, &self.sim, &self.experiment)).expect("run config serializes")
    }
}

impl ModelSpec {
    pub fn build(&self, path: &str) -> Result<GeneratingQuadruple, CliError> {
        if !(self.b >= 0.0) {
            return Err(CliError::Config(format!("{path}.b: must be >= 0, got {}", self.b)));
        }
        let drift = match self.a {
            DriftSpec::Natural => Drift::Natural,
            DriftSpec::Explicit(a) => Drift::Explicit(a),
        };
        let pi_path = format!("{path}.pi");
        let pi = self.pi.build().map_err(field(&pi_path))?;
        let lam_path = format!("{path}.lambda");
        let part = |p: &Option<LevySpec>| p.as_ref().map(LevySpec::build).unwrap_or_else(LevyPart::zero);
        let lam = LevyFamily::new(part(&self.lambda.positive), part(&self.lambda.negative))
            .map_err(field(&lam_path))?;
        GeneratingQuadruple::new(drift, self.b, lam, pi).map_err(field(path))
    }
}

impl LevySpec {
    fn build(&self) -> LevyPart {
        match self {
            LevySpec::CompoundPoisson { rate, jumps } => LevyPart::CompoundPoisson {
                rate: *rate,
                jumps: jumps.build(),
            },
            LevySpec::StableLike { beta0, c } => LevyPart::StableLike { beta0: *beta0, c: *c },
            LevySpec::TemperedStable { beta0, theta, c } => LevyPart::TemperedStable {
                beta0: *beta0,
                theta: *theta,
                c: *c,
            },
            LevySpec::ParetoTail { eta, scale } => LevyPart::ParetoTail { eta: *eta, scale: *scale },
            LevySpec::DyadicExotic { b } => LevyPart::DyadicExotic { b: *b },
            LevySpec::Scaled { factor, inner } => LevyPart::Scaled {
                factor: *factor,
                inner: Box::new(inner.build()),
            },
            LevySpec::Sum { parts } => LevyPart::Sum(parts.iter().map(LevySpec::build).collect()),
        }
    }
}

impl JumpSpec {
    fn build(&self) -> JumpLaw {
        match self {
            JumpSpec::Fixed { size } => JumpLaw::Fixed { size: *size },
            JumpSpec::Discrete { atoms } => JumpLaw::Discrete { atoms: atoms.clone() },
            JumpSpec::Uniform { lo, hi } => JumpLaw::Uniform { lo: *lo, hi: *hi },
            JumpSpec::Exponential { rate } => JumpLaw::Exponential { rate: *rate },
            JumpSpec::ShiftedExponential { shift, rate } => JumpLaw::ShiftedExponential {
                shift: *shift,
                rate: *rate,
            },
        }
    }
}

impl PiSpec {
    fn build(&self) -> supou::Result<MeasureFamily> {
        MeasureFamily::new(match self {
            PiSpec::PointMass { x0 } => PiVariant::PointMass { x0: *x0 },
            PiSpec::PowerDensity { a } => PiVariant::PowerDensity { a: *a },
            PiSpec::Gamma { shape, rate } => PiVariant::GammaDensity {
                shape: *shape,
                rate: *rate,
            },
            PiSpec::DyadicExotic { a } => PiVariant::DyadicExotic { a: *a },
            PiSpec::Tabulated { atoms, segments } => PiVariant::Tabulated {
                atoms: atoms.iter().map(|a| Atom { x: a.x, mass: a.mass }).collect(),
                segments: segments
                    .iter()
                    .map(|s| Segment {
                        lo: s.lo,
                        hi: s.hi,
                        coef: s.coef,
                        power: s.power,
                    })
                    .collect(),
            },
        })
    }
}
