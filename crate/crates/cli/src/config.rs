//! Flat `key = value` experiment configuration.
//!
//! Lines starting with `#` are comments. Every key is optional and falls back
//! to the default shown by [`ExperimentConfig::canonical`]; unknown keys and
//! malformed values are errors.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use bbig_core::machine::{EstimatorBackend, DEFAULT_EXACT_CAP, MAX_ENUMERATION_BITS};
use bbig_core::runner::RelayPolicy;
use bbig_core::Fraction;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("key `{0}` given twice")]
    Duplicate(String),
    #[error("invalid value for `{key}`: {message}")]
    Value { key: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Graph family used for every population size.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSpec {
    StaticComplete,
    StaticRing,
    /// Random small-diameter family, temporal diameter at most `⌈k·lg N⌉`.
    SmallDiameter(f64),
    /// No edges before the gate, complete snapshots from it on.
    GatedComplete(usize),
    File(PathBuf),
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::StaticComplete => f.write_str("static_complete"),
            GraphSpec::StaticRing => f.write_str("static_ring"),
            GraphSpec::SmallDiameter(k) => write!(f, "small_diameter({k})"),
            GraphSpec::GatedComplete(t) => write!(f, "gated_complete({t})"),
            GraphSpec::File(p) => write!(f, "file({})", p.display()),
        }
    }
}

fn call_arg<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')').map(str::trim)
}

impl FromStr for GraphSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static_complete" => return Ok(GraphSpec::StaticComplete),
            "static_ring" => return Ok(GraphSpec::StaticRing),
            "small_diameter" => return Ok(GraphSpec::SmallDiameter(3.0)),
            _ => {}
        }
        if let Some(k) = call_arg(s, "small_diameter") {
            let k: f64 = k.parse().map_err(|_| format!("bad diameter factor `{k}`"))?;
            if !(k.is_finite() && k > 0.0) {
                return Err("diameter factor must be positive".into());
            }
            return Ok(GraphSpec::SmallDiameter(k));
        }
        if let Some(t) = call_arg(s, "gated_complete") {
            return t
                .parse()
                .map(GraphSpec::GatedComplete)
                .map_err(|_| format!("bad gate instant `{t}`"));
        }
        if let Some(p) = call_arg(s, "file") {
            if p.is_empty() {
                return Err("empty path".into());
            }
            return Ok(GraphSpec::File(PathBuf::from(p)));
        }
        Err(format!(
            "unknown graph `{s}` (static_complete | static_ring | small_diameter(k) | gated_complete(t) | file(path))"
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub n_grid: Vec<usize>,
    pub instants: usize,
    pub graph: GraphSpec,
    pub degree: f64,
    pub tau: Fraction,
    pub budget: u64,
    pub binding_samples: usize,
    pub estimator: EstimatorBackend,
    pub exact_cap: u32,
    pub omega_samples: usize,
    pub epsilon: f64,
    pub c0: u64,
    pub w: u64,
    pub seeds: usize,
    pub relay: RelayPolicy,
    pub traces: bool,
    pub validate_graphs: usize,
    pub validate_runs: usize,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 1,
            n_grid: vec![16, 64, 256, 1024],
            instants: 32,
            graph: GraphSpec::SmallDiameter(3.0),
            degree: 2.0,
            tau: Fraction::from_integer(1),
            budget: 10_000,
            binding_samples: 8,
            estimator: EstimatorBackend::CompressProxy,
            exact_cap: DEFAULT_EXACT_CAP,
            omega_samples: 2_000,
            epsilon: 0.01,
            c0: 0,
            w: 0,
            seeds: 20,
            relay: RelayPolicy::Relay,
            traces: false,
            validate_graphs: 2_000,
            validate_runs: 500,
            out_dir: PathBuf::from("out"),
        }
    }
}

const KEYS: &[&str] = &[
    "seed",
    "n_grid",
    "instants",
    "graph",
    "degree",
    "tau",
    "budget",
    "binding_samples",
    "estimator",
    "exact_cap",
    "omega_samples",
    "epsilon",
    "c0",
    "w",
    "seeds",
    "relay",
    "traces",
    "validate_graphs",
    "validate_runs",
    "out_dir",
];

fn value_err(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key: key.to_string(),
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T, ConfigError> {
    v.parse().map_err(|_| value_err(key, format!("`{v}` is not a valid number")))
}

fn parse_fraction(key: &str, v: &str) -> Result<Fraction, ConfigError> {
    match v.split_once('/') {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (parse_num(key, a.trim())?, parse_num(key, b.trim())?);
            if b == 0 {
                return Err(value_err(key, "zero denominator"));
            }
            Ok(Fraction::new(a, b))
        }
        None => Ok(Fraction::from_integer(parse_num(key, v)?)),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<usize>, ConfigError> {
    let inner = v.trim().trim_start_matches('[').trim_end_matches(']');
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_num(key, s))
        .collect()
}

fn relay_name(r: RelayPolicy) -> &'static str {
    match r {
        RelayPolicy::Relay => "relay",
        RelayPolicy::Silent => "silent",
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line: i + 1,
                    message: format!("expected `key = value`, found `{line}`"),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if seen.contains(&key) {
                return Err(ConfigError::Duplicate(key.to_string()));
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey(key.to_string()));
            }
            seen.push(key);
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        ExperimentConfig::parse(&text)
    }

    fn set(&mut self, key: &str, v: &str) -> Result<(), ConfigError> {
        match key {
            "seed" => self.seed = parse_num(key, v)?,
            "n_grid" => self.n_grid = parse_list(key, v)?,
            "instants" => self.instants = parse_num(key, v)?,
            "graph" => self.graph = v.parse().map_err(|m| value_err(key, m))?,
            "degree" => self.degree = parse_num(key, v)?,
            "tau" => self.tau = parse_fraction(key, v)?,
            "budget" => self.budget = parse_num(key, v)?,
            "binding_samples" => self.binding_samples = parse_num(key, v)?,
            "estimator" => self.estimator = v.parse().map_err(|m| value_err(key, m))?,
            "exact_cap" => self.exact_cap = parse_num(key, v)?,
            "omega_samples" => self.omega_samples = parse_num(key, v)?,
            "epsilon" => self.epsilon = parse_num(key, v)?,
            "c0" => self.c0 = parse_num(key, v)?,
            "w" => self.w = parse_num(key, v)?,
            "seeds" => self.seeds = parse_num(key, v)?,
            "relay" => {
                self.relay = match v {
                    "relay" => RelayPolicy::Relay,
                    "silent" => RelayPolicy::Silent,
                    _ => return Err(value_err(key, "expected `relay` or `silent`")),
                }
            }
            "traces" => {
                self.traces = v
                    .parse()
                    .map_err(|_| value_err(key, "expected `true` or `false`"))?
            }
            "validate_graphs" => self.validate_graphs = parse_num(key, v)?,
            "validate_runs" => self.validate_runs = parse_num(key, v)?,
            "out_dir" => self.out_dir = PathBuf::from(v),
            other => return Err(ConfigError::UnknownKey(other.to_string())),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_grid.is_empty() {
            return Err(value_err("n_grid", "empty grid"));
        }
        if self.n_grid.contains(&0) {
            return Err(value_err("n_grid", "population sizes must be at least 1"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(value_err("n_grid", "sizes must be strictly ascending"));
        }
        if self.instants == 0 {
            return Err(value_err("instants", "need at least one instant"));
        }
        if !(self.degree.is_finite() && self.degree > 0.0) {
            return Err(value_err("degree", "must be positive"));
        }
        if self.tau == Fraction::from_integer(0) || self.tau > Fraction::from_integer(1) {
            return Err(value_err("tau", "must lie in (0, 1]"));
        }
        for (key, v) in [
            ("budget", self.budget),
            ("binding_samples", self.binding_samples as u64),
            ("omega_samples", self.omega_samples as u64),
            ("seeds", self.seeds as u64),
        ] {
            if v == 0 {
                return Err(value_err(key, "must be at least 1"));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(value_err("epsilon", "must be positive"));
        }
        if self.exact_cap > MAX_ENUMERATION_BITS {
            return Err(value_err("exact_cap", format!("at most {MAX_ENUMERATION_BITS}")));
        }
        if self.out_dir.as_os_str().is_empty() {
            return Err(value_err("out_dir", "empty path"));
        }
        Ok(())
    }

    /// Every setting in a fixed order; hashed into the run manifest. The
    /// output directory is left out so that relocated runs hash alike.
    pub fn canonical(&self) -> String {
        let grid: Vec<String> = self.n_grid.iter().map(usize::to_string).collect();
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        put("seed", self.seed.to_string());
        put("n_grid", grid.join(","));
        put("instants", self.instants.to_string());
        put("graph", self.graph.to_string());
        put("degree", self.degree.to_string());
        put("tau", self.tau.to_string());
        put("budget", self.budget.to_string());
        put("binding_samples", self.binding_samples.to_string());
        put("estimator", self.estimator.to_string());
        put("exact_cap", self.exact_cap.to_string());
        put("omega_samples", self.omega_samples.to_string());
        put("epsilon", self.epsilon.to_string());
        put("c0", self.c0.to_string());
        put("w", self.w.to_string());
        put("seeds", self.seeds.to_string());
        put("relay", relay_name(self.relay).to_string());
        put("traces", self.traces.to_string());
        put("validate_graphs", self.validate_graphs.to_string());
        put("validate_runs", self.validate_runs.to_string());
        debug_assert_eq!(s.lines().count(), KEYS.len() - 1);
        s
    }
}
