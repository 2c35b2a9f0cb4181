//! Flat `key = value` run configuration.

use std::path::PathBuf;

use menger_core::energy::{SearchOptions, BRUTE_BUDGET};
use menger_core::flatness::FlatnessOptions;
use menger_core::tol::{TOL_GEOM, TOL_LINALG};
use menger_core::{Error, Result};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tol_linalg: f64,
    pub tol_geom: f64,
    pub beta_restarts: usize,
    pub beta_max_iters: usize,
    pub beta_certify: bool,
    pub theta_disk_grid: usize,
    pub theta_evals: usize,
    pub mc_samples: u64,
    pub mc_batch: u64,
    pub brute_max_tuples: f64,
    pub search_delta: f64,
    pub search_point_tol: f64,
    pub search_max_stages: usize,
    pub search_frames: usize,
    pub seed: u64,
    pub output_report: Option<PathBuf>,
    pub output_table: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flat = FlatnessOptions::default();
        let search = SearchOptions::default();
        RunConfig {
            tol_linalg: TOL_LINALG,
            tol_geom: TOL_GEOM,
            beta_restarts: flat.restarts,
            beta_max_iters: flat.max_iters,
            beta_certify: flat.certify,
            theta_disk_grid: flat.disk_grid,
            theta_evals: flat.theta_evals,
            mc_samples: 100_000,
            mc_batch: 1000,
            brute_max_tuples: BRUTE_BUDGET,
            search_delta: search.delta,
            search_point_tol: search.point_tol,
            search_max_stages: search.max_stages,
            search_frames: search.frames,
            seed: 0,
            output_report: None,
            output_table: None,
        }
    }
}

pub const KEYS: [&str; 17] = [
    "tol.linalg",
    "tol.geom",
    "beta.restarts",
    "beta.max_iters",
    "beta.certify",
    "theta.disk_grid",
    "theta.evals",
    "mc.samples",
    "mc.batch",
    "brute.max_tuples",
    "search.delta",
    "search.point_tol",
    "search.max_stages",
    "search.frames",
    "seed",
    "output.report",
    "output.table",
];

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::InvalidInput(format!("config key {key}: cannot parse {v:?}")))
}

impl RunConfig {
    /// Defaults overridden by the lines of a config file. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::ParseError { line: i + 1, msg: format!("expected key = value, got {line:?}") })?;
            c.set(k.trim(), v.trim())?;
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("cannot read config {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn set(&mut self, key: &str, v: &str) -> Result<()> {
        match key {
            "tol.linalg" => self.tol_linalg = num(key, v)?,
            "tol.geom" => self.tol_geom = num(key, v)?,
            "beta.restarts" => self.beta_restarts = num(key, v)?,
            "beta.max_iters" => self.beta_max_iters = num(key, v)?,
            "beta.certify" => self.beta_certify = num(key, v)?,
            "theta.disk_grid" => self.theta_disk_grid = num(key, v)?,
            "theta.evals" => self.theta_evals = num(key, v)?,
            "mc.samples" => self.mc_samples = num(key, v)?,
            "mc.batch" => self.mc_batch = num(key, v)?,
            "brute.max_tuples" => self.brute_max_tuples = num(key, v)?,
            "search.delta" => self.search_delta = num(key, v)?,
            "search.point_tol" => self.search_point_tol = num(key, v)?,
            "search.max_stages" => self.search_max_stages = num(key, v)?,
            "search.frames" => self.search_frames = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "output.report" => self.output_report = Some(PathBuf::from(v)),
            "output.table" => self.output_table = Some(PathBuf::from(v)),
            _ => {
                return Err(Error::InvalidInput(format!("unknown config key {key:?}; known keys: {}", KEYS.join(", "))))
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("tol.linalg", self.tol_linalg),
            ("tol.geom", self.tol_geom),
            ("brute.max_tuples", self.brute_max_tuples),
            ("search.point_tol", self.search_point_tol),
        ];
        for (k, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{k} must be positive, got {v}")));
            }
        }
        let counts = [
            ("beta.restarts", self.beta_restarts as u64),
            ("beta.max_iters", self.beta_max_iters as u64),
            ("theta.disk_grid", self.theta_disk_grid as u64),
            ("theta.evals", self.theta_evals as u64),
            ("mc.samples", self.mc_samples),
            ("mc.batch", self.mc_batch),
            ("search.max_stages", self.search_max_stages as u64),
            ("search.frames", self.search_frames as u64),
        ];
        for (k, v) in counts {
            if v == 0 {
                return Err(Error::InvalidInput(format!("{k} must be positive")));
            }
        }
        if !(self.search_delta > 0.0 && self.search_delta < 1.0) {
            return Err(Error::InvalidInput(format!("search.delta must lie in (0,1), got {}", self.search_delta)));
        }
        Ok(())
    }

    pub fn flatness(&self) -> FlatnessOptions {
        FlatnessOptions {
            restarts: self.beta_restarts,
            max_iters: self.beta_max_iters,
            disk_grid: self.theta_disk_grid,
            certify: self.beta_certify,
            theta_evals: self.theta_evals,
            seed: self.seed,
        }
    }

    pub fn search(&self) -> SearchOptions {
        SearchOptions {
            delta: self.search_delta,
            point_tol: self.search_point_tol,
            max_stages: self.search_max_stages,
            frames: self.search_frames,
            seed: self.seed,
            ..SearchOptions::default()
        }
    }

    /// Every key with its resolved value.
    pub fn to_json(&self) -> Value {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        json!({
            "tol.linalg": self.tol_linalg,
            "tol.geom": self.tol_geom,
            "beta.restarts": self.beta_restarts,
            "beta.max_iters": self.beta_max_iters,
            "beta.certify": self.beta_certify,
            "theta.disk_grid": self.theta_disk_grid,
            "theta.evals": self.theta_evals,
            "mc.samples": self.mc_samples,
            "mc.batch": self.mc_batch,
            "brute.max_tuples": self.brute_max_tuples,
            "search.delta": self.search_delta,
            "search.point_tol": self.search_point_tol,
            "search.max_stages": self.search_max_stages,
            "search.frames": self.search_frames,
            "seed": self.seed,
            "output.report": path(&self.output_report),
            "output.table": path(&self.output_table),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_defaults() {
        let c = RunConfig::parse("# budgets\nmc.samples = 5000\n\nseed=9  # trailing\nbeta.certify = false\n").unwrap();
        assert_eq!(c.mc_samples, 5000);
        assert_eq!(c.seed, 9);
        assert!(!c.beta_certify);
        assert_eq!(c.theta_disk_grid, RunConfig::default().theta_disk_grid);
        assert_eq!(c.to_json().as_object().unwrap().len(), KEYS.len());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(RunConfig::parse("nonsense"), Err(Error::ParseError { line: 1, .. })));
        assert!(RunConfig::parse("mc.samples = 0").is_err());
        assert!(RunConfig::parse("search.delta = 1.5").is_err());
        assert!(RunConfig::parse("what = 1").is_err());
        assert!(RunConfig::parse("seed = -1").is_err());
    }
}
