//! Experiment configuration: a key-value file merged with command-line overrides.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use spaqt_core::chainsim::DEFAULT_DIM_CAP;
use spaqt_core::linalg::vec3::{self, V3};
use thiserror::Error;

/// Environment variable overriding the Hilbert-space dimension cap.
pub const DIM_CAP_ENV: &str = "SPAQT_DIM_CAP";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Scenario {
    Groups,
    Reps,
    Gates,
    Elementary,
    Transistor,
    Holonomy,
    TwoQubit,
    Universality,
    VerifyAll,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Groups => "groups",
            Scenario::Reps => "reps",
            Scenario::Gates => "gates",
            Scenario::Elementary => "elementary",
            Scenario::Transistor => "transistor",
            Scenario::Holonomy => "holonomy",
            Scenario::TwoQubit => "two_qubit",
            Scenario::Universality => "universality",
            Scenario::VerifyAll => "verify_all",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Overrides of the per-assertion defaults. Unset fields keep the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Largest accepted `1 − F` of an extracted gate.
    pub infidelity: Option<f64>,
    /// Bound on algebraic residuals (group laws, fixed points, compositions).
    pub residual: Option<f64>,
    /// Bound on commutators with conserved operators.
    pub symmetry: Option<f64>,
    /// Largest accepted step-doubling change of a transported gate.
    pub convergence: Option<f64>,
}

impl Tolerances {
    fn merge(self, over: Tolerances) -> Tolerances {
        Tolerances {
            infidelity: over.infidelity.or(self.infidelity),
            residual: over.residual.or(self.residual),
            symmetry: over.symmetry.or(self.symmetry),
            convergence: over.convergence.or(self.convergence),
        }
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("infidelity", self.infidelity), ("residual", self.residual), ("symmetry", self.symmetry), ("convergence", self.convergence)] {
            if let Some(v) = v {
                if !(v.is_finite() && v > 0.0) {
                    return Err(ConfigError::Invalid(format!("tolerance `{name}` must be positive and finite, got {v}")));
                }
            }
        }
        Ok(())
    }
}

/// A partial configuration, as read from a file or collected from flags.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub scenario: Option<Scenario>,
    pub n: Option<usize>,
    pub beta: Option<f64>,
    pub axis: Option<String>,
    pub perp: Option<String>,
    pub steps: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub embeddings: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub parallel: Option<bool>,
    #[serde(default)]
    pub tol: Tolerances,
}

impl ConfigFile {
    /// Parse `key = value` lines; `#` starts a comment and `[tol]` opens
    /// the tolerance keys.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.message().to_string()))
    }

    pub fn read(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.display().to_string(), e.to_string()))?;
        Self::parse(&text)
    }

    /// Fields set in `over` win.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            scenario: over.scenario.or(self.scenario),
            n: over.n.or(self.n),
            beta: over.beta.or(self.beta),
            axis: over.axis.or(self.axis),
            perp: over.perp.or(self.perp),
            steps: over.steps.or(self.steps),
            samples: over.samples.or(self.samples),
            seed: over.seed.or(self.seed),
            embeddings: over.embeddings.or(self.embeddings),
            out: over.out.or(self.out),
            format: over.format.or(self.format),
            parallel: over.parallel.or(self.parallel),
            tol: self.tol.merge(over.tol),
        }
    }

    /// Fill scenario defaults and validate.
    pub fn resolve(self, dim_cap: usize) -> Result<ExperimentConfig, ConfigError> {
        let scenario = self.scenario.ok_or(ConfigError::MissingScenario)?;
        let defaults = Defaults::for_scenario(scenario);
        let axis = parse_axis(self.axis.as_deref().unwrap_or("z"))?;
        let perp = match self.perp.as_deref() {
            Some(s) => parse_axis(s)?,
            None => default_perpendicular(axis),
        };
        if scenario == Scenario::Holonomy && vec3::dot(axis, perp).abs() > 1e-9 {
            return Err(ConfigError::Invalid(format!("perp {perp:?} is not orthogonal to axis {axis:?}")));
        }
        let cfg = ExperimentConfig {
            scenario,
            n: self.n.unwrap_or(defaults.n),
            beta: self.beta.unwrap_or(-1.0 / 3.0),
            axis,
            perp,
            steps: self.steps.unwrap_or(defaults.steps),
            samples: self.samples.unwrap_or(65),
            seed: self.seed.unwrap_or(DEFAULT_SEED),
            embeddings: self.embeddings.unwrap_or_else(|| String::from("four")),
            out: self.out,
            format: self.format.unwrap_or_default(),
            parallel: self.parallel.unwrap_or(false),
            tol: self.tol,
            dim_cap,
            warnings: Vec::new(),
        };
        cfg.validate()
    }
}

pub const DEFAULT_SEED: u64 = 0x5eed;

struct Defaults {
    n: usize,
    steps: usize,
}

impl Defaults {
    fn for_scenario(s: Scenario) -> Self {
        match s {
            Scenario::TwoQubit => Defaults { n: 3, steps: 256 },
            Scenario::Transistor => Defaults { n: 4, steps: 256 },
            _ => Defaults { n: 4, steps: 512 },
        }
    }
}

/// A validated configuration with every parameter filled in.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    /// Spin-1 sites per chain.
    pub n: usize,
    pub beta: f64,
    pub axis: V3,
    /// Second field axis of the holonomy loop.
    pub perp: V3,
    pub steps: usize,
    /// Gap-profile samples.
    pub samples: usize,
    pub seed: u64,
    /// `four`, `three`, `standard`, or a path to an embedding file.
    pub embeddings: String,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub parallel: bool,
    pub tol: Tolerances,
    pub dim_cap: usize,
    pub warnings: Vec<String>,
}

impl ExperimentConfig {
    /// Defaults for `scenario` under the default dimension cap.
    pub fn new(scenario: Scenario) -> Self {
        ConfigFile { scenario: Some(scenario), ..Default::default() }.resolve(DEFAULT_DIM_CAP).expect("defaults are valid")
    }

    /// Hilbert-space dimension the scenario diagonalizes.
    pub fn dimension(&self) -> Option<usize> {
        let chain = 3usize.checked_pow(self.n as u32)?.checked_mul(2)?;
        match self.scenario {
            Scenario::Elementary | Scenario::Transistor | Scenario::Holonomy => Some(chain),
            Scenario::TwoQubit => chain.checked_mul(chain),
            // The acceptance suite's largest system is the two-chain N = 3 run.
            Scenario::VerifyAll => Some(54 * 54),
            _ => Some(1),
        }
    }

    fn validate(mut self) -> Result<Self, ConfigError> {
        self.tol.validate()?;
        if self.steps < 2 {
            return Err(ConfigError::Invalid(format!("steps must be at least 2, got {}", self.steps)));
        }
        if self.samples < 2 {
            return Err(ConfigError::Invalid(format!("samples must be at least 2, got {}", self.samples)));
        }
        if !self.beta.is_finite() {
            return Err(ConfigError::Invalid(format!("beta must be finite, got {}", self.beta)));
        }
        let min_n = if self.scenario == Scenario::Elementary { 2 } else { 1 };
        if matches!(self.scenario, Scenario::Elementary | Scenario::Transistor | Scenario::Holonomy | Scenario::TwoQubit) && self.n < min_n {
            return Err(ConfigError::Invalid(format!("n must be at least {min_n} for {}", self.scenario.name())));
        }
        match self.dimension() {
            Some(d) if d <= self.dim_cap => {}
            d => {
                return Err(ConfigError::DimensionCap {
                    dim: d.map_or_else(|| String::from("overflow"), |d| d.to_string()),
                    cap: self.dim_cap,
                })
            }
        }
        if !(-1.0 < self.beta && self.beta < 1.0) {
            self.warnings.push(format!("beta = {} lies outside (−1, 1), where the chain need not be in the Haldane phase", self.beta));
        }
        Ok(self)
    }
}

/// `x`, `y`, `z` (optionally signed) or three comma-separated components.
pub fn parse_axis(s: &str) -> Result<V3, ConfigError> {
    let t = s.trim();
    let (sign, name) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    let named = match name {
        "x" => Some(vec3::X),
        "y" => Some(vec3::Y),
        "z" => Some(vec3::Z),
        _ => None,
    };
    if let Some(a) = named {
        return Ok(vec3::scale(a, sign));
    }
    let parts: Vec<f64> = t
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ConfigError::Invalid(format!("axis `{s}` is neither x, y, z nor three comma-separated numbers")))?;
    let a: V3 = parts.try_into().map_err(|_| ConfigError::Invalid(format!("axis `{s}` needs three components")))?;
    let norm = vec3::norm(a);
    if !norm.is_finite() || norm < 1e-12 {
        return Err(ConfigError::Invalid(format!("axis `{s}` has zero length")));
    }
    Ok(vec3::scale(a, 1.0 / norm))
}

/// `z → x`, `x → y`, `y → z`; any other axis gets a unit vector orthogonal to it.
pub fn default_perpendicular(a: V3) -> V3 {
    for (from, to) in [(vec3::Z, vec3::X), (vec3::X, vec3::Y), (vec3::Y, vec3::Z)] {
        if (vec3::dot(a, from).abs() - 1.0).abs() < 1e-12 {
            return to;
        }
    }
    let helper = if a[0].abs() < 0.9 { vec3::X } else { vec3::Y };
    vec3::normalized(vec3::cross(a, helper))
}

/// The dimension cap from the environment, or the library default.
pub fn dim_cap_from_env() -> Result<usize, ConfigError> {
    match std::env::var(DIM_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| ConfigError::Invalid(format!("{DIM_CAP_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(DEFAULT_DIM_CAP),
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("no scenario given; pass --scenario or set `scenario` in the config file")]
    MissingScenario,
    #[error("cannot read config file {0}: {1}")]
    Io(String, String),
    #[error("config file: {0}")]
    Parse(String),
    #[error("{0}")]
    Invalid(String),
    #[error("Hilbert-space dimension {dim} exceeds the cap {cap}; lower n or raise {}", DIM_CAP_ENV)]
    DimensionCap { dim: String, cap: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let file = ConfigFile::parse("scenario = \"elementary\"\nn = 3\nbeta = 0.5\n# comment\n[tol]\ninfidelity = 1e-5\n").unwrap();
        let flags = ConfigFile { n: Some(4), tol: Tolerances { symmetry: Some(1e-9), ..Default::default() }, ..Default::default() };
        let cfg = file.merge(flags).resolve(DEFAULT_DIM_CAP).unwrap();
        assert_eq!(cfg.scenario, Scenario::Elementary);
        assert_eq!(cfg.n, 4);
        assert_eq!(cfg.beta, 0.5);
        assert_eq!(cfg.steps, 512);
        assert_eq!(cfg.tol.infidelity, Some(1e-5));
        assert_eq!(cfg.tol.symmetry, Some(1e-9));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(ConfigFile::parse("scenaro = \"groups\""), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn validation() {
        let base = |f: ConfigFile| ConfigFile { scenario: Some(Scenario::Elementary), ..f }.resolve(DEFAULT_DIM_CAP);
        assert!(matches!(base(ConfigFile { steps: Some(1), ..Default::default() }), Err(ConfigError::Invalid(_))));
        assert!(matches!(base(ConfigFile { n: Some(12), ..Default::default() }), Err(ConfigError::DimensionCap { .. })));
        assert!(matches!(base(ConfigFile { n: Some(200), ..Default::default() }), Err(ConfigError::DimensionCap { .. })));
        assert_eq!(base(ConfigFile { beta: Some(1.5), ..Default::default() }).unwrap().warnings.len(), 1);
        assert!(matches!(ConfigFile::default().resolve(10), Err(ConfigError::MissingScenario)));
        let small = ConfigFile { scenario: Some(Scenario::TwoQubit), ..Default::default() }.resolve(1000);
        assert!(matches!(small, Err(ConfigError::DimensionCap { .. })));
    }

    #[test]
    fn axes() {
        assert_eq!(parse_axis("z").unwrap(), vec3::Z);
        assert_eq!(parse_axis("-x").unwrap(), [-1.0, 0.0, 0.0]);
        let a = parse_axis("1, 0, 1").unwrap();
        assert!((a[0] - a[2]).abs() < 1e-15 && (vec3::norm(a) - 1.0).abs() < 1e-15);
        assert!(parse_axis("0,0,0").is_err());
        assert!(parse_axis("w").is_err());
        for a in [vec3::X, vec3::Y, vec3::Z, [0.6, 0.0, 0.8], [1.0, 0.0, 0.0]] {
            assert!(vec3::dot(a, default_perpendicular(a)).abs() < 1e-12);
        }
        assert_eq!(default_perpendicular(vec3::Z), vec3::X);
    }
}
