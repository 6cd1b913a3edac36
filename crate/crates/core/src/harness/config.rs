//! Experiment configuration: a single TOML file of `key = value` sections,
//! every default overridable.

use crate::error::{Error, Result};
use crate::params::RegimeParams;
use crate::timeint::Method;
use serde::{Deserialize, Serialize};

/// How `mu` is derived from `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeKind {
    /// `mu = epsilon`.
    #[serde(rename = "long-wave")]
    LongWave,
    /// `mu = epsilon^2` (larger-amplitude waves).
    #[serde(rename = "camassa-holm")]
    CamassaHolm,
}

impl RegimeKind {
    pub fn mu(&self, epsilon: f64) -> f64 {
        match self {
            RegimeKind::LongWave => epsilon,
            RegimeKind::CamassaHolm => epsilon * epsilon,
        }
    }
}

/// Depth/density ratio preset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioPreset {
    /// `delta = 0.8`, `gamma = delta^2` (computed, so `delta^2 - gamma` is
    /// exactly zero in floating point).
    Critical,
    /// `gamma = 0.9`, `delta = 0.5`.
    NonCritical,
    /// Take `gamma`/`delta` from the config file.
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DataKind {
    /// Gaussian right-mover plus 2/3-amplitude left-mover.
    GaussianLocalized,
    /// Algebraically decaying profile `(1 + 10 x^2)^(-1/3)`; slow decay, so
    /// the periodic-tail check does not apply.
    AlgebraicNonlocalized,
    /// Deformation-only data with the velocity slaved by the reconstruction
    /// formula.
    UnidirectionalCompatible,
}

impl DataKind {
    /// Half-width used by the domain-sizing rule (where the profile falls
    /// below 1e-12 for localized kinds; a fixed budget for the algebraic one).
    pub fn support_halfwidth(&self) -> f64 {
        match self {
            DataKind::GaussianLocalized | DataKind::UnidirectionalCompatible => 11.0,
            DataKind::AlgebraicNonlocalized => 20.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "kebab-case")]
pub enum ModelSelect {
    Gn,
    Ib,
    Kdv,
    Ekdv,
    Cl,
    WeaklyCoupled,
    Unidirectional,
}

impl ModelSelect {
    pub fn label(&self) -> &'static str {
        match self {
            ModelSelect::Gn => "gn",
            ModelSelect::Ib => "ib",
            ModelSelect::Kdv => "kdv",
            ModelSelect::Ekdv => "ekdv",
            ModelSelect::Cl => "cl",
            ModelSelect::WeaklyCoupled => "weakly-coupled",
            ModelSelect::Unidirectional => "unidirectional",
        }
    }
}

/// Final time of a run. Named horizons scale with epsilon; `Fixed` is an
/// absolute time (used e.g. to compare plateau onsets across epsilon).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Horizon {
    Named(NamedHorizon),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedHorizon {
    #[serde(rename = "t10")]
    T10,
    #[serde(rename = "inv-eps")]
    InvEps,
    #[serde(rename = "eps-3/2")]
    EpsPow32,
}

impl Horizon {
    pub fn t_end(&self, epsilon: f64) -> f64 {
        match self {
            Horizon::Named(NamedHorizon::T10) => 10.0,
            Horizon::Named(NamedHorizon::InvEps) => 1.0 / epsilon,
            Horizon::Named(NamedHorizon::EpsPow32) => epsilon.powf(-1.5),
            Horizon::Fixed(t) => *t,
        }
    }
}

/// Nominal checkpoint times `{10, 1/eps, eps^(-3/2)}` clipped to the horizon,
/// with their tags.
pub fn checkpoints(epsilon: f64, t_end: f64) -> Vec<(&'static str, f64)> {
    let all = [
        ("t10", 10.0),
        ("inv-eps", 1.0 / epsilon),
        ("eps-3/2", epsilon.powf(-1.5)),
    ];
    all.into_iter().filter(|(_, t)| *t <= t_end * (1.0 + 1e-9)).collect()
}

fn default_models() -> Vec<ModelSelect> {
    vec![
        ModelSelect::Gn,
        ModelSelect::Ib,
        ModelSelect::Kdv,
        ModelSelect::Ekdv,
        ModelSelect::Cl,
    ]
}

fn default_epsilons() -> Vec<f64> {
    vec![0.1, 0.08, 0.065, 0.05, 0.035]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegimeSection {
    pub kind: RegimeKind,
    pub epsilon: f64,
    pub theta: f64,
    pub lambda: f64,
}

impl Default for RegimeSection {
    fn default() -> Self {
        RegimeSection { kind: RegimeKind::CamassaHolm, epsilon: 0.05, theta: 0.5, lambda: 0.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatioSection {
    pub kind: RatioPreset,
    pub gamma: Option<f64>,
    pub delta: Option<f64>,
}

impl Default for RatioSection {
    fn default() -> Self {
        RatioSection { kind: RatioPreset::Critical, gamma: None, delta: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub kind: DataKind,
}

impl Default for DataSection {
    fn default() -> Self {
        DataSection { kind: DataKind::GaussianLocalized }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelsSection {
    pub include: Vec<ModelSelect>,
}

impl Default for ModelsSection {
    fn default() -> Self {
        ModelsSection { include: default_models() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ErrorSection {
    /// Sobolev index used for rate fits; 0 (L2) or 1 (H1). Both are always
    /// recorded.
    pub sobolev_index: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    pub dx: f64,
    pub dealias: bool,
}

impl Default for GridSection {
    fn default() -> Self {
        GridSection { dx: crate::spectral::DEFAULT_DX, dealias: false }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TimeSection {
    pub horizon: Horizon,
    pub samples: usize,
    pub cfl: f64,
    pub method: Method,
    pub blowup_threshold: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        TimeSection {
            horizon: Horizon::Named(NamedHorizon::EpsPow32),
            samples: 200,
            cfl: 0.5,
            method: Method::Abm4,
            blowup_threshold: 1e6,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub epsilons: Vec<f64>,
}

impl Default for SweepSection {
    fn default() -> Self {
        SweepSection { epsilons: default_epsilons() }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub regime: RegimeSection,
    pub ratio: RatioSection,
    pub data: DataSection,
    pub models: ModelsSection,
    pub error: ErrorSection,
    pub grid: GridSection,
    pub time: TimeSection,
    pub sweep: SweepSection,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.error.sobolev_index > 1 {
            return fail("error.sobolev_index must be 0 (L2) or 1 (H1)".into());
        }
        if !(self.grid.dx > 0.0) {
            return fail(format!("grid.dx = {} must be > 0", self.grid.dx));
        }
        if !(self.time.cfl > 0.0 && self.time.cfl <= 1.0) {
            return fail(format!("time.cfl = {} must be in (0, 1]", self.time.cfl));
        }
        if self.time.samples < 2 {
            return fail("time.samples must be >= 2".into());
        }
        if let Horizon::Fixed(t) = self.time.horizon {
            if !(t > 0.0) {
                return fail(format!("time.horizon = {t} must be > 0"));
            }
        }
        if self.models.include.is_empty() {
            return fail("models.include must not be empty".into());
        }
        if self.sweep.epsilons.is_empty() {
            return fail("sweep.epsilons must not be empty".into());
        }
        for &e in std::iter::once(&self.regime.epsilon).chain(&self.sweep.epsilons) {
            if !(e > 0.0 && e <= 1.0) {
                return fail(format!("epsilon = {e} outside (0, 1]"));
            }
        }
        if self.ratio.kind == RatioPreset::Custom
            && (self.ratio.gamma.is_none() || self.ratio.delta.is_none())
        {
            return fail("ratio.kind = custom requires ratio.gamma and ratio.delta".into());
        }
        // parameter-box check at the largest epsilon of the sweep
        let eps = self
            .sweep
            .epsilons
            .iter()
            .chain(std::iter::once(&self.regime.epsilon))
            .fold(0.0f64, |a, &b| a.max(b));
        self.params_for(eps)?;
        Ok(())
    }

    pub fn gamma_delta(&self) -> (f64, f64) {
        match self.ratio.kind {
            RatioPreset::Critical => (0.8 * 0.8, 0.8),
            RatioPreset::NonCritical => (0.9, 0.5),
            RatioPreset::Custom => (
                self.ratio.gamma.expect("validated"),
                self.ratio.delta.expect("validated"),
            ),
        }
    }

    /// Regime parameters for one epsilon of a run or sweep.
    pub fn params_for(&self, epsilon: f64) -> Result<RegimeParams> {
        let (gamma, delta) = self.gamma_delta();
        let mu = self.regime.kind.mu(epsilon);
        Ok(RegimeParams::new(epsilon, mu, gamma, delta)?
            .with_weights(self.regime.theta, self.regime.lambda))
    }

    /// Commented template with every key at its default.
    pub fn template() -> String {
        TEMPLATE.to_string()
    }
}

const TEMPLATE: &str = r#"# Experiment configuration. Every key is optional; the values below are
# the defaults.

[regime]
# "long-wave" (mu = eps) or "camassa-holm" (mu = eps^2)
kind = "camassa-holm"
# epsilon used by `run`, `dispersion` and `ztov` (sweeps use [sweep].epsilons)
epsilon = 0.05
# BBM-trick weight; theta = 1/2 spreads the dispersion evenly
theta = 0.5
# near-identity change-of-variable weight
lambda = 0.0

[ratio]
# "critical" (delta = 0.8, gamma = delta^2), "non-critical" (gamma = 0.9,
# delta = 0.5) or "custom" (set gamma/delta below)
kind = "critical"
# gamma = 0.64
# delta = 0.8

[data]
# "gaussian-localized", "algebraic-nonlocalized" or
# "unidirectional-compatible"
kind = "gaussian-localized"

[models]
# subset of "gn", "ib", "kdv", "ekdv", "cl", "weakly-coupled",
# "unidirectional"
include = ["gn", "ib", "kdv", "ekdv", "cl"]

[error]
# Sobolev index used for rate fits: 0 (L2) or 1 (H1); both are recorded
sobolev_index = 0

[grid]
dx = 0.2
# 2/3-rule zero-padding of nonlinear products
dealias = false

[time]
# "t10", "inv-eps", "eps-3/2", or a number for a fixed final time
horizon = "eps-3/2"
# time-series sample count
samples = 200
cfl = 0.5
# "abm4" or "rk4"
method = "abm4"
blowup_threshold = 1e6

[sweep]
epsilons = [0.1, 0.08, 0.065, 0.05, 0.035]
"#;
