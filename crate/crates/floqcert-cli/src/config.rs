//! Run configuration: a single JSON document per run, with every flag having
//! a config-file equivalent; flags override the file.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub problem: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub ellipse_s: Option<f64>,
    pub period: Option<f64>,
    /// Solve only: when set, double N until err_sup < tol (cap 512).
    pub tol: Option<f64>,
    /// Use sampled ellipse data instead of the registry closed forms.
    #[serde(default)]
    pub numeric_data: bool,
    /// Collocation degree for bootstrap fundamental-solution bounds.
    pub bound_n: Option<usize>,
    pub bounds: Option<BoundsConfig>,
    pub chart: Option<ChartFileConfig>,
    pub workers: Option<usize>,
}

/// User-supplied constants; each overrides the corresponding computed value.
#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub c_a: Option<f64>,
    pub a_e: Option<f64>,
    pub b_e: Option<f64>,
    pub c_lambda: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChartFileConfig {
    pub x: Option<String>,
    pub y: Option<String>,
    pub x_range: Option<[f64; 2]>,
    pub y_range: Option<[f64; 2]>,
    pub resolution: Option<[usize; 2]>,
}

/// The fully resolved configuration embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct Effective {
    pub problem: String,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub delta: f64,
    pub ellipse_s: f64,
    pub period: f64,
    pub tol: Option<f64>,
    pub numeric_data: bool,
    pub bound_n: usize,
    pub bounds: BoundsConfig,
    pub chart: Option<ChartEffective>,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChartEffective {
    pub x: String,
    pub y: String,
    pub x_range: [f64; 2],
    pub y_range: [f64; 2],
    pub resolution: [usize; 2],
}

pub fn load_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("stage: config (reading {})", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("stage: config (parsing {})", path.display()))
}

/// Merge `--param k=v` pairs over the file params.
pub fn apply_param_flags(cfg: &mut FileConfig, params: &[String]) -> Result<()> {
    for kv in params {
        let Some((k, v)) = kv.split_once('=') else {
            bail!("stage: config (--param wants key=value, got {kv:?})");
        };
        let value: f64 = v
            .parse()
            .with_context(|| format!("stage: config (--param {k}: bad number {v:?})"))?;
        cfg.params.insert(k.to_string(), value);
    }
    Ok(())
}
