//! Run configuration: one JSON file plus command-line overrides.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use wigner_lab::grid::MIN_POINTS;

use crate::error::{CliError, ConfigInvalid};

/// Grid size written `NxM`: `N` samples in `q`, `M` in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridSpec {
    pub n_q: usize,
    pub n_p: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (n, m) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NxM, got {s:?}"))?;
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("expected NxM with positive integers, got {s:?}"))
        };
        let spec = GridSpec {
            n_q: parse(n)?,
            n_p: parse(m)?,
        };
        if spec.n_q < MIN_POINTS || spec.n_p < MIN_POINTS {
            return Err(format!(
                "each axis needs at least {MIN_POINTS} points, got {s}"
            ));
        }
        Ok(spec)
    }
}

impl TryFrom<String> for GridSpec {
    type Error = String;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_q, self.n_p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub sigma: f64,
    pub a: f64,
    pub grid: GridSpec,
    pub q_range: [f64; 2],
    pub p_range: [f64; 2],
    pub out: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sigma: 1.0,
            a: 3.0,
            grid: GridSpec { n_q: 301, n_p: 351 },
            q_range: [-1.5, 1.5],
            p_range: [1.5, 5.0],
            out: PathBuf::from("."),
        }
    }
}

/// Values given on the command line; each one replaces the file's value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub grid: Option<GridSpec>,
    pub sigma: Option<f64>,
    pub a: Option<f64>,
    pub out: Option<PathBuf>,
}

impl Config {
    /// Parses a JSON config; diagnostics name the file, line and field.
    pub fn from_json(text: &str, source: &str) -> Result<Self, ConfigInvalid> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: Config = serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let inner = e.into_inner();
            let line = key_line(text, &field).or(Some(inner.line()));
            ConfigInvalid {
                source: source.to_string(),
                field: if field == "." { "<root>".into() } else { field },
                line,
                message: inner.to_string(),
            }
        })?;
        cfg.validate().map_err(|mut e| {
            e.source = source.to_string();
            e.line = key_line(text, &e.field);
            e
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(ConfigInvalid {
                source: path.display().to_string(),
                field: "<file>".into(),
                line: None,
                message: e.to_string(),
            })
        })?;
        Ok(Self::from_json(&text, &path.display().to_string())?)
    }

    /// File values (or defaults) with command-line flags on top.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Self, CliError> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Config::default(),
        };
        if let Some(g) = overrides.grid {
            cfg.grid = g;
        }
        if let Some(s) = overrides.sigma {
            cfg.sigma = s;
        }
        if let Some(a) = overrides.a {
            cfg.a = a;
        }
        if let Some(o) = &overrides.out {
            cfg.out = o.clone();
        }
        cfg.validate().map_err(|mut e| {
            e.source = "command line".into();
            e
        })?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigInvalid> {
        let bad = |field: &str, message: String| ConfigInvalid {
            source: String::new(),
            field: field.into(),
            line: None,
            message,
        };
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(bad(
                "sigma",
                format!("must be positive and finite, got {}", self.sigma),
            ));
        }
        if !(self.a.is_finite() && self.a > 0.0) {
            return Err(bad(
                "a",
                format!("must be positive and finite, got {}", self.a),
            ));
        }
        for (name, [lo, hi]) in [("q_range", self.q_range), ("p_range", self.p_range)] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(bad(
                    name,
                    format!("needs finite bounds with lo < hi, got [{lo}, {hi}]"),
                ));
            }
        }
        if self.grid.n_q < MIN_POINTS || self.grid.n_p < MIN_POINTS {
            return Err(bad(
                "grid",
                format!("each axis needs at least {MIN_POINTS} points"),
            ));
        }
        Ok(())
    }
}

/// Line of the first `"key"` occurrence, for diagnostics on valid JSON.
fn key_line(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.lines()
        .position(|l| l.contains(&needle))
        .map(|i| i + 1)
}
