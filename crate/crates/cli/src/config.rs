//! Run configuration: defaults, `key = value` files and the thread override.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use numlab::{Error, Result};
use serde::{Deserialize, Serialize};

pub const THREADS_ENV: &str = "NUMLAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::Input(format!("unknown format '{other}'"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Markdown => "markdown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    pub tau_geom: f64,
    pub tau_pair: f64,
    /// Agreement tolerance between index estimates.
    pub search_tol: f64,
    /// Overrides the per-dimension multistart defaults when set.
    pub starts: Option<usize>,
    pub evals: Option<usize>,
    pub grid_density: usize,
    pub threads: usize,
    pub format: Format,
    /// Off: runtimes are left out of reports, making them byte-stable.
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            tau_geom: numlab::TAU_GEOM,
            tau_pair: numlab::TAU_PAIR,
            search_tol: numlab::numindex::INDEX_TOL,
            starts: None,
            evals: None,
            grid_density: numlab::numindex::DEFAULT_GRID_DENSITY,
            threads: 1,
            format: Format::Json,
            timing: true,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau_geom", self.tau_geom),
            ("tau_pair", self.tau_pair),
            ("search_tol", self.search_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.threads == 0 {
            return Err(Error::Input("threads must be at least 1".into()));
        }
        if self.starts == Some(0) || self.evals == Some(0) || self.grid_density == 0 {
            return Err(Error::Input("budgets must be positive".into()));
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Input(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value.trim())
                .map_err(|e| Error::Input(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Input(format!("bad value '{v}' for {key}")))
        }
        match key {
            "seed" => self.seed = num(key, value)?,
            "tau_geom" => self.tau_geom = num(key, value)?,
            "tau_pair" => self.tau_pair = num(key, value)?,
            "search_tol" => self.search_tol = num(key, value)?,
            "starts" => self.starts = Some(num(key, value)?),
            "evals" => self.evals = Some(num(key, value)?),
            "grid_density" => self.grid_density = num(key, value)?,
            "threads" => self.threads = num(key, value)?,
            "format" => self.format = value.parse()?,
            "timing" => self.timing = num(key, value)?,
            _ => return Err(Error::Input(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::default();
        cfg.apply_text(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// `NUMLAB_THREADS`, when set, wins over the file and the flags.
    pub fn apply_env(&mut self) -> Result<()> {
        if let Ok(v) = std::env::var(THREADS_ENV) {
            self.threads = v
                .trim()
                .parse()
                .map_err(|_| Error::Input(format!("{THREADS_ENV}: bad thread count '{v}'")))?;
        }
        self.validate()
    }
}
