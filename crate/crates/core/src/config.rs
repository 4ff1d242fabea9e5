//! Tolerances and optimizer settings.
//!
//! Defaults are compiled in. A `key = value` file named by the
//! `GIELAB_CONFIG` environment variable overrides individual keys.

use crate::error::{Error, Result};
use std::path::Path;

pub const CONFIG_ENV: &str = "GIELAB_CONFIG";

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    /// Max entry of `S Ω Sᵀ - Ω` accepted as symplectic.
    pub symplectic_tol: f64,
    /// Max entry of `S γ Sᵀ - D` accepted from a Williamson decomposition.
    pub williamson_tol: f64,
    /// Slack on the uncertainty relation `ν ≥ 1`.
    pub physical_tol: f64,
    /// Slack on `ν ≥ 1` for conditional states, whose purity is only as
    /// accurate as the conditioning of Eve's seed.
    pub conditional_tol: f64,
    /// A state is separable when its partially transposed `ν₋ ≥ 1 - separable_tol`.
    pub separable_tol: f64,
    /// Symplectic eigenvalues above `1 + purification_cutoff` get a purifying mode.
    pub purification_cutoff: f64,
    /// Relative eigenvalue cutoff of the pseudoinverse.
    pub pinv_cutoff: f64,
    /// Coarse grid points per parameter.
    pub grid: usize,
    /// Largest finite squeezing `r` scanned by the conditional mutual information search.
    pub r_max: f64,
    /// Largest finite squeezing `t` of Eve's single-mode seeds.
    pub t_max: f64,
    /// Largest `ln τ` of Eve's single-mode seeds.
    pub ln_tau_max: f64,
    /// Eigenvalues of the two-mode seed block run over `[e^-x, e^x]`.
    pub ln_lambda_max: f64,
    /// Coordinate descent stops once every step is below this.
    pub refine_tol: f64,
    pub max_refine_sweeps: usize,
    /// Upper end of the proven validity domain (`a` or `√(ab)`).
    pub validity_threshold: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            symplectic_tol: 1e-9,
            williamson_tol: 1e-8,
            physical_tol: 1e-9,
            conditional_tol: 1e-7,
            separable_tol: 1e-10,
            purification_cutoff: 1e-9,
            pinv_cutoff: 1e-12,
            grid: 33,
            r_max: 12.0,
            t_max: 12.0,
            ln_tau_max: 6.0,
            ln_lambda_max: 24.0,
            refine_tol: 1e-8,
            max_refine_sweeps: 20_000,
            validity_threshold: 2.41,
        }
    }
}

impl Config {
    /// Defaults, overridden by the file in `GIELAB_CONFIG` when that is set.
    pub fn from_env() -> Result<Config> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => Config::from_file(Path::new(&path)),
            None => Ok(Config::default()),
        }
    }

    pub fn from_file(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) =
                line.split_once('=').ok_or_else(|| Error::InvalidInput(format!("config line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim()).map_err(|e| Error::InvalidInput(format!("config line {}: {e}", lineno + 1)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let float = |v: &str| v.parse::<f64>().map_err(|e| format!("{key}: {e}"));
        match key {
            "symplectic_tol" => self.symplectic_tol = float(value)?,
            "williamson_tol" => self.williamson_tol = float(value)?,
            "physical_tol" => self.physical_tol = float(value)?,
            "conditional_tol" => self.conditional_tol = float(value)?,
            "separable_tol" => self.separable_tol = float(value)?,
            "purification_cutoff" => self.purification_cutoff = float(value)?,
            "pinv_cutoff" => self.pinv_cutoff = float(value)?,
            "grid" => self.grid = value.parse().map_err(|e| format!("{key}: {e}"))?,
            "r_max" => self.r_max = float(value)?,
            "t_max" => self.t_max = float(value)?,
            "ln_tau_max" => self.ln_tau_max = float(value)?,
            "ln_lambda_max" => self.ln_lambda_max = float(value)?,
            "refine_tol" => self.refine_tol = float(value)?,
            "max_refine_sweeps" => self.max_refine_sweeps = value.parse().map_err(|e| format!("{key}: {e}"))?,
            "validity_threshold" => self.validity_threshold = float(value)?,
            _ => return Err(format!("unknown key `{key}`")),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("symplectic_tol", self.symplectic_tol),
            ("williamson_tol", self.williamson_tol),
            ("physical_tol", self.physical_tol),
            ("conditional_tol", self.conditional_tol),
            ("separable_tol", self.separable_tol),
            ("purification_cutoff", self.purification_cutoff),
            ("pinv_cutoff", self.pinv_cutoff),
            ("r_max", self.r_max),
            ("t_max", self.t_max),
            ("ln_tau_max", self.ln_tau_max),
            ("ln_lambda_max", self.ln_lambda_max),
            ("refine_tol", self.refine_tol),
            ("validity_threshold", self.validity_threshold),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite")));
            }
        }
        if self.grid < 2 {
            return Err(Error::InvalidInput("grid must be at least 2".into()));
        }
        Ok(())
    }

    pub fn with_grid(mut self, grid: usize) -> Result<Config> {
        self.grid = grid;
        self.validate()?;
        Ok(self)
    }
}
