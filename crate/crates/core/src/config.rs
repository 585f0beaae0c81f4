//! Run configuration: a flat `key = value` file with dotted section keys.
//!
//! ```text
//! # comments run to the end of the line
//! problem.alpha   = 0.5
//! problem.preset  = lipschitz-hat
//! problem.source  = sin(pi*x) * t      # overrides the preset's f
//! grid.n_cells    = 128
//! solver.dt_safety = 0.9
//! probes          = max_principle, envelope
//! ```
//!
//! Every key is optional except `problem.alpha`; unknown keys and unknown
//! probe names are rejected with the offending line and field.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::analysis::{LimitReference, RlFunction};
use crate::expr::Expr;
use crate::order::FracOrder;
use crate::problem::{Preset, ProblemSpec};
use crate::solver::ApplyMode;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: field `{field}`: {message}")]
    Field {
        line: usize,
        field: String,
        message: String,
    },
    /// A field whose value is only invalid in combination with others.
    #[error("field `{field}`: {message}")]
    Invalid { field: String, message: String },
}

/// Probes the `probe` command can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProbeKind {
    MaxPrinciple,
    Contraction,
    AlphaLimit,
    RlLimit,
    Regularity,
    Envelope,
}

impl ProbeKind {
    pub const ALL: [ProbeKind; 6] = [
        ProbeKind::MaxPrinciple,
        ProbeKind::Contraction,
        ProbeKind::AlphaLimit,
        ProbeKind::RlLimit,
        ProbeKind::Regularity,
        ProbeKind::Envelope,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProbeKind::MaxPrinciple => "max_principle",
            ProbeKind::Contraction => "contraction",
            ProbeKind::AlphaLimit => "alpha_limit",
            ProbeKind::RlLimit => "rl_limit",
            ProbeKind::Regularity => "regularity",
            ProbeKind::Envelope => "envelope",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for ProbeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Data of the problem; `source`/`boundary` override the preset's.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub alpha: f64,
    pub length: f64,
    pub horizon: f64,
    pub preset: Preset,
    pub source: Option<Expr>,
    pub boundary: Option<Expr>,
    pub lipschitz: Option<f64>,
}

impl ProblemConfig {
    /// Builds the problem. Errors carry the config field they stem from.
    pub fn build(&self) -> Result<ProblemSpec, ConfigError> {
        let invalid = |field: &str, e: crate::Error| ConfigError::Invalid {
            field: field.into(),
            message: e.to_string(),
        };
        let order = FracOrder::new(self.alpha).map_err(|e| invalid("problem.alpha", e))?;
        let mut spec = self
            .preset
            .build(order, self.length, self.horizon)
            .map_err(|e| invalid("problem.preset", e))?;
        let mut name = self.preset.name().to_string();
        if self.source.is_some() || self.boundary.is_some() {
            let f = match &self.source {
                Some(e) => e.clone().into_fn(),
                None => spec.source().clone(),
            };
            let g = match &self.boundary {
                Some(e) => e.clone().into_fn(),
                None => spec.boundary().clone(),
            };
            let field = if self.boundary.is_some() { "problem.boundary" } else { "problem.source" };
            spec = ProblemSpec::new(order, self.length, self.horizon, f, g).map_err(|e| invalid(field, e))?;
            name = "custom".into();
        }
        if let Some(lg) = self.lipschitz {
            spec = spec.with_lipschitz(lg).map_err(|e| invalid("problem.lipschitz", e))?;
        }
        Ok(spec.with_name(name))
    }
}

/// Probe-specific settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSettings {
    /// Field checked by `max_principle`; random concave fields if absent.
    pub max_principle_field: Option<Expr>,
    pub max_principle_samples: usize,
    /// Data of the second problem in `contraction`; the first problem's if
    /// absent.
    pub contraction_source: Option<Expr>,
    pub contraction_boundary: Option<Expr>,
    pub alpha_limit_references: Vec<LimitReference>,
    pub alpha_limit_to_zero: Vec<f64>,
    pub alpha_limit_to_one: Vec<f64>,
    pub rl_function: RlFunction,
    pub rl_to_zero: Vec<f64>,
    pub rl_to_one: Vec<f64>,
    pub regularity_tolerance: f64,
}

impl Default for ProbeSettings {
    fn default() -> Self {
        Self {
            max_principle_field: None,
            max_principle_samples: 100,
            contraction_source: None,
            contraction_boundary: None,
            alpha_limit_references: vec![LimitReference::Advection, LimitReference::Heat],
            alpha_limit_to_zero: vec![0.2, 0.1, 0.05],
            alpha_limit_to_one: vec![0.8, 0.9, 0.95],
            rl_function: RlFunction::Cubic,
            rl_to_zero: vec![0.2, 0.1, 0.05, 0.02, 0.01],
            rl_to_one: vec![0.8, 0.9, 0.95, 0.98, 0.99],
            regularity_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub sizes: Vec<usize>,
    pub repeats: usize,
}

impl Default for BenchSettings {
    fn default() -> Self {
        Self {
            sizes: vec![1024, 4096, 16384],
            repeats: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub problem: ProblemConfig,
    pub n_cells: usize,
    /// Fraction of the stability bound used as time step. Values above 1
    /// pass parsing and are rejected by the solver.
    pub dt_safety: f64,
    pub apply_mode: ApplyMode,
    pub probes: Vec<ProbeKind>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub probe: ProbeSettings,
    pub bench: BenchSettings,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        text.parse()
    }
}

impl FromStr for RunConfig {
    type Err = ConfigError;

    fn from_str(text: &str) -> Result<Self, ConfigError> {
        let mut alpha = None;
        let mut problem = ProblemConfig {
            alpha: f64::NAN,
            length: 1.0,
            horizon: 0.25,
            preset: Preset::Zero,
            source: None,
            boundary: None,
            lipschitz: None,
        };
        let mut cfg = RunConfig {
            problem: problem.clone(),
            n_cells: 128,
            dt_safety: 0.9,
            apply_mode: ApplyMode::Auto,
            probes: Vec::new(),
            output_dir: PathBuf::from("out"),
            seed: 0,
            probe: ProbeSettings::default(),
            bench: BenchSettings::default(),
        };
        let mut seen = BTreeSet::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    message: format!("expected `key = value`, got `{content}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(field_err(line, key, "given more than once"));
            }
            let v = Value { line, key, text: value };
            match key {
                "problem.alpha" => {
                    let a = v.float()?;
                    if !(a > 0.0 && a < 1.0) {
                        return Err(v.error(format!("order must lie in (0, 1), got {a}")));
                    }
                    alpha = Some(a);
                }
                "problem.length" => problem.length = v.positive()?,
                "problem.horizon" => problem.horizon = v.positive()?,
                "problem.preset" => {
                    problem.preset = Preset::from_name(value).ok_or_else(|| {
                        v.error(format!(
                            "unknown preset `{value}` (expected one of {})",
                            Preset::ALL.map(Preset::name).join(", ")
                        ))
                    })?
                }
                "problem.source" => problem.source = Some(v.expr()?),
                "problem.boundary" => problem.boundary = Some(v.expr()?),
                "problem.lipschitz" => {
                    let lg = v.float()?;
                    if !(lg >= 0.0) {
                        return Err(v.error(format!("must be nonnegative, got {lg}")));
                    }
                    problem.lipschitz = Some(lg);
                }
                "grid.n_cells" => {
                    let n = v.uint()?;
                    if n < 4 {
                        return Err(v.error(format!("need at least 4 cells, got {n}")));
                    }
                    cfg.n_cells = n;
                }
                "solver.dt_safety" => cfg.dt_safety = v.positive()?,
                "solver.apply_mode" => {
                    cfg.apply_mode = ApplyMode::from_name(value)
                        .ok_or_else(|| v.error(format!("expected naive, fast or auto, got `{value}`")))?
                }
                "probes" => {
                    cfg.probes = v
                        .list()
                        .map(|name| {
                            ProbeKind::from_name(name).ok_or_else(|| {
                                v.error(format!(
                                    "unknown probe `{name}` (expected one of {})",
                                    ProbeKind::ALL.map(ProbeKind::name).join(", ")
                                ))
                            })
                        })
                        .collect::<Result<_, _>>()?
                }
                "output.dir" => cfg.output_dir = PathBuf::from(value),
                "seed" => cfg.seed = v.parse("an unsigned integer")?,
                "probe.max_principle.field" => cfg.probe.max_principle_field = Some(v.expr()?),
                "probe.max_principle.samples" => cfg.probe.max_principle_samples = v.uint()?,
                "probe.contraction.source" => cfg.probe.contraction_source = Some(v.expr()?),
                "probe.contraction.boundary" => cfg.probe.contraction_boundary = Some(v.expr()?),
                "probe.alpha_limit.references" => {
                    cfg.probe.alpha_limit_references = v
                        .list()
                        .map(|name| {
                            LimitReference::from_name(name)
                                .ok_or_else(|| v.error(format!("expected advection or heat, got `{name}`")))
                        })
                        .collect::<Result<_, _>>()?
                }
                "probe.alpha_limit.to_zero" => cfg.probe.alpha_limit_to_zero = v.orders()?,
                "probe.alpha_limit.to_one" => cfg.probe.alpha_limit_to_one = v.orders()?,
                "probe.rl_limit.function" => {
                    cfg.probe.rl_function = RlFunction::from_name(value)
                        .ok_or_else(|| v.error(format!("expected cubic, square or zero, got `{value}`")))?
                }
                "probe.rl_limit.to_zero" => cfg.probe.rl_to_zero = v.orders()?,
                "probe.rl_limit.to_one" => cfg.probe.rl_to_one = v.orders()?,
                "probe.regularity.tolerance" => {
                    let tol = v.float()?;
                    if !(tol >= 0.0) {
                        return Err(v.error(format!("must be nonnegative, got {tol}")));
                    }
                    cfg.probe.regularity_tolerance = tol;
                }
                "bench.sizes" => {
                    cfg.bench.sizes = v
                        .list()
                        .map(|s| {
                            s.parse::<usize>()
                                .ok()
                                .filter(|&n| n >= 4)
                                .ok_or_else(|| v.error(format!("expected cell counts >= 4, got `{s}`")))
                        })
                        .collect::<Result<_, _>>()?
                }
                "bench.repeats" => {
                    let r = v.uint()?;
                    if r == 0 {
                        return Err(v.error("need at least one repeat"));
                    }
                    cfg.bench.repeats = r;
                }
                _ => return Err(field_err(line, key, "unknown key")),
            }
        }
        problem.alpha = alpha.ok_or_else(|| ConfigError::Invalid {
            field: "problem.alpha".into(),
            message: "required".into(),
        })?;
        cfg.problem = problem;
        Ok(cfg)
    }
}

fn field_err(line: usize, field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        line,
        field: field.to_string(),
        message: message.into(),
    }
}

struct Value<'a> {
    line: usize,
    key: &'a str,
    text: &'a str,
}

impl<'a> Value<'a> {
    fn error(&self, message: impl Into<String>) -> ConfigError {
        field_err(self.line, self.key, message)
    }

    fn parse<T: FromStr>(&self, what: &str) -> Result<T, ConfigError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, got `{}`", self.text)))
    }

    fn float(&self) -> Result<f64, ConfigError> {
        let v: f64 = self.parse("a number")?;
        if !v.is_finite() {
            return Err(self.error(format!("must be finite, got {v}")));
        }
        Ok(v)
    }

    fn positive(&self) -> Result<f64, ConfigError> {
        let v = self.float()?;
        if !(v > 0.0) {
            return Err(self.error(format!("must be positive, got {v}")));
        }
        Ok(v)
    }

    fn uint(&self) -> Result<usize, ConfigError> {
        self.parse("an unsigned integer")
    }

    fn expr(&self) -> Result<Expr, ConfigError> {
        Expr::parse(self.text).map_err(|e| self.error(e.to_string()))
    }

    fn list(&self) -> impl Iterator<Item = &'a str> {
        self.text.split(',').map(str::trim).filter(|s| !s.is_empty())
    }

    fn orders(&self) -> Result<Vec<f64>, ConfigError> {
        let out: Vec<f64> = self
            .list()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|a| *a > 0.0 && *a < 1.0)
                    .ok_or_else(|| self.error(format!("expected orders in (0, 1), got `{s}`")))
            })
            .collect::<Result<_, _>>()?;
        if out.len() < 2 {
            return Err(self.error("need at least two orders"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg: RunConfig = "
            # demo
            problem.alpha = 0.5
            problem.preset = lipschitz-hat   # g = hat
            problem.horizon = 0.1
            grid.n_cells = 64
            solver.dt_safety = 0.8
            solver.apply_mode = fast
            probes = max_principle, envelope
            output.dir = results
            seed = 7
            probe.alpha_limit.references = heat
        "
        .parse()
        .unwrap();
        assert_eq!(cfg.problem.alpha, 0.5);
        assert_eq!(cfg.problem.preset, Preset::LipschitzHat);
        assert_eq!(cfg.n_cells, 64);
        assert_eq!(cfg.apply_mode, ApplyMode::Fast);
        assert_eq!(cfg.probes, vec![ProbeKind::MaxPrinciple, ProbeKind::Envelope]);
        assert_eq!(cfg.output_dir, PathBuf::from("results"));
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.probe.alpha_limit_references, vec![LimitReference::Heat]);
        let spec = cfg.problem.build().unwrap();
        assert_eq!(spec.name(), "lipschitz-hat");
    }

    #[test]
    fn errors_name_line_and_field() {
        let e = "problem.alpha = 1.5".parse::<RunConfig>().unwrap_err();
        assert!(matches!(&e, ConfigError::Field { line: 1, field, .. } if field == "problem.alpha"), "{e}");
        assert!(e.to_string().contains("problem.alpha"));
        let e = "problem.alpha = 0.5\nprobes = contraction, unknown".parse::<RunConfig>().unwrap_err();
        assert!(matches!(&e, ConfigError::Field { line: 2, field, .. } if field == "probes"), "{e}");
        let e = "problem.alpha = 0.5\nproblem.alhpa = 0.5".parse::<RunConfig>().unwrap_err();
        assert!(e.to_string().contains("unknown key"));
        let e = "grid.n_cells = 64".parse::<RunConfig>().unwrap_err();
        assert!(e.to_string().contains("problem.alpha"));
        assert!("problem.alpha 0.5".parse::<RunConfig>().is_err());
        assert!("problem.alpha = 0.5\nproblem.source = x +".parse::<RunConfig>().is_err());
    }

    #[test]
    fn inline_data_override_the_preset() {
        let cfg: RunConfig = "problem.alpha = 0.25\nproblem.preset = smooth-sine\nproblem.source = 2*t"
            .parse()
            .unwrap();
        let spec = cfg.problem.build().unwrap();
        assert_eq!(spec.f(0.3, 0.5), 1.0);
        assert!((spec.g(0.5, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(spec.name(), "custom");
    }

    #[test]
    fn safety_above_one_parses() {
        let cfg: RunConfig = "problem.alpha = 0.5\nsolver.dt_safety = 1.5".parse().unwrap();
        assert_eq!(cfg.dt_safety, 1.5);
    }
}
