use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cubedirac::continuum_limit::dyadic_meshes;
use cubedirac::{WindowFunction, C64};
use serde::Deserialize;

/// Values read from `--config`; every field is optional.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub n: Option<usize>,
    #[serde(rename = "N")]
    pub period: Option<usize>,
    pub h_list: Option<Vec<f64>>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub window: Option<WindowConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowConfig {
    pub kind: String,
    pub delta: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Flag values; `None` falls back to the config file, then to the default.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub n: Option<usize>,
    pub period: Option<usize>,
    pub h_list: Option<Vec<f64>>,
    pub z_re: Option<f64>,
    pub z_im: Option<f64>,
    pub grid: Option<usize>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub period: usize,
    pub z: C64,
    pub h_list: Vec<f64>,
    pub grid: usize,
    pub window: WindowFunction,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

pub struct Defaults {
    pub n: usize,
    pub grid: usize,
    pub h_list: Vec<f64>,
}

impl ExperimentConfig {
    pub fn resolve(flags: Overrides, file: FileConfig, defaults: Defaults) -> Result<Self> {
        let window = match file.window {
            None => cubedirac::continuum_limit::build_window(),
            Some(w) if w.kind == "meyer" => match w.delta {
                Some(d) => WindowFunction::meyer(d)?,
                None => cubedirac::continuum_limit::build_window(),
            },
            Some(w) => bail!("unknown window kind `{}` (expected `meyer`)", w.kind),
        };
        let cfg = Self {
            n: flags.n.or(file.n).unwrap_or(defaults.n),
            period: flags.period.or(file.period).unwrap_or(4),
            z: C64::new(
                flags.z_re.or(file.z_re).unwrap_or(0.0),
                flags.z_im.or(file.z_im).unwrap_or(1.0),
            ),
            h_list: flags.h_list.or(file.h_list).unwrap_or(defaults.h_list),
            grid: flags.grid.or(file.grid).unwrap_or(defaults.grid),
            window,
            out: flags.out.or(file.out),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            bail!("--n must be at least 1");
        }
        if self.z.im == 0.0 || !self.z.im.is_finite() || !self.z.re.is_finite() {
            bail!(
                "spectral parameter must have nonzero imaginary part (got z = {})",
                self.z
            );
        }
        if self.h_list.is_empty() {
            bail!("--h-list must not be empty");
        }
        if self.h_list.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
            bail!("mesh sizes must be finite and positive");
        }
        if self.h_list.windows(2).any(|w| w[1] >= w[0]) {
            bail!("--h-list must be strictly decreasing");
        }
        if self.grid < 16 {
            bail!("--grid must be at least 16 (got {})", self.grid);
        }
        Ok(())
    }
}

pub fn default_meshes() -> Vec<f64> {
    dyadic_meshes(3, 10)
}
