//! Run configuration: one JSON document fully determines a run.
//!
//! ```json
//! {"family": "power", "alpha": 1.0, "commands": ["analyze", "boundary"], "N": 4096}
//! ```
//!
//! Recognised keys are the family and its parameters (`alpha` for `power`,
//! `a`/`b` for `uniform`, `table_kind`/`points` for `user_table`), the
//! command list, the numeric overrides `N`, `M`, `dt`, `n_paths`, `seed`,
//! `excision`, `max_steps`, `workers`, and `formats`. Anything else is
//! rejected with a pointer to the offending key.

use std::fmt;
use std::path::PathBuf;

use mudomain_core::distribution::DistributionSpec;
use mudomain_core::montecarlo::SimulationConfig;
use serde_json::{Map, Value};

pub const DEFAULT_N: usize = 4096;
pub const DEFAULT_M: usize = 1024;
pub const DEFAULT_DT: f64 = 1e-4;
pub const DEFAULT_PATHS: usize = 10_000;
pub const DEFAULT_EXCISION: f64 = 1e-3;

const FAMILIES: [&str; 5] = ["uniform", "power", "flatexp", "two_interval_uniform", "user_table"];
const COMMON_KEYS: [&str; 12] = [
    "family", "commands", "N", "M", "dt", "n_paths", "seed", "excision", "max_steps", "workers", "formats",
    "output_dir",
];

/// A config problem, located by a JSON pointer (`/alpha`) or, for syntax
/// errors, by line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub location: String,
    pub message: String,
}

impl ConfigError {
    fn at(key: &str, message: impl Into<String>) -> Self {
        Self { location: format!("/{key}"), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command {
    Analyze,
    Boundary,
    Simulate,
    Report,
}

impl Command {
    pub const ALL: [Command; 4] = [Command::Analyze, Command::Boundary, Command::Simulate, Command::Report];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Analyze => "analyze",
            Self::Boundary => "boundary",
            Self::Simulate => "simulate",
            Self::Report => "report",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self { csv: true, json: true }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spec: DistributionSpec,
    /// The document as given, echoed into the report.
    pub source: Value,
    /// Requested stages in pipeline order.
    pub commands: Vec<Command>,
    /// Fourier truncation order.
    pub n: usize,
    /// Boundary base grid size.
    pub m: usize,
    pub sim: SimulationConfig,
    pub excision: f64,
    /// Rayon worker count for simulation; `None` uses the global pool.
    pub workers: Option<usize>,
    pub output_dir: PathBuf,
    pub formats: Formats,
}

impl RunConfig {
    pub fn has(&self, c: Command) -> bool {
        self.commands.contains(&c)
    }
}

fn number(obj: &Map<String, Value>, key: &str) -> Result<Option<f64>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_f64()
            .map(Some)
            .ok_or_else(|| ConfigError::at(key, format!("expected a number, found {v}"))),
    }
}

fn count(obj: &Map<String, Value>, key: &str) -> Result<Option<u64>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v
            .as_u64()
            .map(Some)
            .ok_or_else(|| ConfigError::at(key, format!("expected a non-negative integer, found {v}"))),
    }
}

fn string<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<Option<&'a str>, ConfigError> {
    match obj.get(key) {
        None => Ok(None),
        Some(v) => v.as_str().map(Some).ok_or_else(|| ConfigError::at(key, format!("expected a string, found {v}"))),
    }
}

fn required(obj: &Map<String, Value>, key: &str, family: &str) -> Result<f64, ConfigError> {
    number(obj, key)?.ok_or_else(|| ConfigError::at(key, format!("family \"{family}\" requires parameter `{key}`")))
}

fn family_keys(family: &str) -> &'static [&'static str] {
    match family {
        "uniform" => &["a", "b"],
        "power" => &["alpha"],
        "user_table" => &["table_kind", "points"],
        _ => &[],
    }
}

fn table_points(obj: &Map<String, Value>) -> Result<Vec<(f64, f64)>, ConfigError> {
    let arr = obj
        .get("points")
        .ok_or_else(|| ConfigError::at("points", "family \"user_table\" requires `points`"))?
        .as_array()
        .ok_or_else(|| ConfigError::at("points", "expected an array of [x, value] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, p)| {
            let pair = p.as_array().filter(|a| a.len() == 2);
            match pair.and_then(|a| Some((a[0].as_f64()?, a[1].as_f64()?))) {
                Some(xy) => Ok(xy),
                None => Err(ConfigError::at(&format!("points/{i}"), "expected a pair of numbers")),
            }
        })
        .collect()
}

fn build_spec(obj: &Map<String, Value>, family: &str) -> Result<DistributionSpec, ConfigError> {
    let spec = match family {
        "uniform" => {
            let a = number(obj, "a")?.unwrap_or(-1.0);
            let b = number(obj, "b")?.unwrap_or(1.0);
            DistributionSpec::uniform(a, b).map_err(|e| ConfigError::at("b", e.to_string()))?
        }
        "power" => {
            let alpha = required(obj, "alpha", family)?;
            DistributionSpec::power(alpha).map_err(|e| ConfigError::at("alpha", e.to_string()))?
        }
        "flatexp" => DistributionSpec::flat_exp(),
        "two_interval_uniform" => DistributionSpec::two_interval_uniform(),
        "user_table" => {
            let kind = string(obj, "table_kind")?
                .ok_or_else(|| ConfigError::at("table_kind", "family \"user_table\" requires `table_kind`"))?;
            let points = table_points(obj)?;
            let built = match kind {
                "cdf" => DistributionSpec::from_cdf_points(points),
                "quantile" => DistributionSpec::from_quantile_points(points),
                other => {
                    return Err(ConfigError::at(
                        "table_kind",
                        format!("unknown table kind \"{other}\", expected \"cdf\" or \"quantile\""),
                    ))
                }
            };
            built.map_err(|e| ConfigError::at("points", e.to_string()))?
        }
        other => {
            return Err(ConfigError::at(
                "family",
                format!("unknown family \"{other}\", expected one of {}", FAMILIES.join(", ")),
            ))
        }
    };
    Ok(spec)
}

fn parse_commands(obj: &Map<String, Value>) -> Result<Vec<Command>, ConfigError> {
    let Some(v) = obj.get("commands") else {
        return Ok(Command::ALL.to_vec());
    };
    let arr = v.as_array().ok_or_else(|| ConfigError::at("commands", "expected an array of command names"))?;
    let mut out = Vec::with_capacity(arr.len());
    for (i, c) in arr.iter().enumerate() {
        let cmd = c.as_str().and_then(Command::parse).ok_or_else(|| {
            ConfigError::at(&format!("commands/{i}"), format!("unknown command {c}, expected analyze, boundary, simulate or report"))
        })?;
        out.push(cmd);
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(ConfigError::at("commands", "at least one command is required"));
    }
    if out.contains(&Command::Simulate) && !out.contains(&Command::Boundary) {
        return Err(ConfigError::at("commands", "simulate requires boundary"));
    }
    Ok(out)
}

fn parse_formats(obj: &Map<String, Value>) -> Result<Formats, ConfigError> {
    let Some(v) = obj.get("formats") else {
        return Ok(Formats::default());
    };
    let arr = v.as_array().ok_or_else(|| ConfigError::at("formats", "expected an array such as [\"csv\", \"json\"]"))?;
    let mut f = Formats { csv: false, json: false };
    for (i, x) in arr.iter().enumerate() {
        match x.as_str() {
            Some("csv") => f.csv = true,
            Some("json") => f.json = true,
            _ => return Err(ConfigError::at(&format!("formats/{i}"), format!("unknown format {x}"))),
        }
    }
    Ok(f)
}

/// Parse and validate a config document, filling defaults
/// (N = 4096, M = 1024, dt = 1e-4, n_paths = 10⁴, seed = 0, excision = 1e-3,
/// max_steps = ⌈100/dt⌉).
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let source: Value = serde_json::from_str(text).map_err(|e| ConfigError {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    let obj = source
        .as_object()
        .ok_or_else(|| ConfigError { location: "/".into(), message: "expected a JSON object".into() })?;

    let family = string(obj, "family")?.ok_or_else(|| ConfigError::at("family", "missing required key `family`"))?;
    let spec = build_spec(obj, family)?;
    let allowed = family_keys(family);
    if let Some(k) = obj.keys().find(|k| !COMMON_KEYS.contains(&k.as_str()) && !allowed.contains(&k.as_str())) {
        return Err(ConfigError::at(k, format!("`{k}` is not a recognised key for family \"{family}\"")));
    }

    let n = count(obj, "N")?.unwrap_or(DEFAULT_N as u64) as usize;
    if n == 0 {
        return Err(ConfigError::at("N", "truncation order must be at least 1"));
    }
    let m = count(obj, "M")?.unwrap_or(DEFAULT_M as u64) as usize;
    if m < 64 {
        return Err(ConfigError::at("M", "boundary grid needs at least 64 points"));
    }
    let dt = number(obj, "dt")?.unwrap_or(DEFAULT_DT);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ConfigError::at("dt", format!("step size must be positive, got {dt}")));
    }
    let n_paths = count(obj, "n_paths")?.unwrap_or(DEFAULT_PATHS as u64) as usize;
    if n_paths == 0 {
        return Err(ConfigError::at("n_paths", "at least one path is required"));
    }
    let seed = count(obj, "seed")?.unwrap_or(0);
    let excision = number(obj, "excision")?.unwrap_or(DEFAULT_EXCISION);
    if !(0.0..0.5).contains(&excision) {
        return Err(ConfigError::at("excision", format!("excision must lie in [0, 0.5), got {excision}")));
    }
    let mut sim = SimulationConfig::new(dt, n_paths, seed).map_err(|e| ConfigError::at("dt", e.to_string()))?;
    if let Some(ms) = count(obj, "max_steps")? {
        if ms == 0 {
            return Err(ConfigError::at("max_steps", "max_steps must be at least 1"));
        }
        sim.max_steps = ms;
    }
    let workers = match count(obj, "workers")? {
        Some(0) => return Err(ConfigError::at("workers", "worker count must be at least 1")),
        w => w.map(|w| w as usize),
    };
    let output_dir = PathBuf::from(string(obj, "output_dir")?.unwrap_or("mudomain-out"));

    Ok(RunConfig {
        spec,
        commands: parse_commands(obj)?,
        formats: parse_formats(obj)?,
        source,
        n,
        m,
        sim,
        excision,
        workers,
        output_dir,
    })
}
