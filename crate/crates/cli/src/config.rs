//! Experiment configuration: TOML file plus flat CLI flags, flags override
//! file values. Everything needed to rerun an experiment byte-identically
//! lives in one resolved config.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use qflow_core::calculus::DensityField;
use qflow_core::space::{build_space, MetricMeasureSpace, SpaceFile, SpaceSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FlowSelector {
    Heat,
    Jko,
    #[default]
    Both,
}

impl std::str::FromStr for FlowSelector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "heat" => Ok(Self::Heat),
            "jko" => Ok(Self::Jko),
            "both" => Ok(Self::Both),
            other => Err(format!("unknown flow selector '{other}' (heat|jko|both)")),
        }
    }
}

/// Weight V(x) = max(floor, scale * d(x, base_vertex)).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WeightSpec {
    pub floor: f64,
    pub scale: f64,
    #[serde(default)]
    pub base_vertex: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// space description: path:N, cycle:N, grid2d:NXxNY, unit:N or file:PATH
    pub space: String,
    pub p: f64,
    #[serde(default)]
    pub flow: FlowSelector,
    #[serde(default = "default_t")]
    pub t_final: f64,
    /// step sweep, strictly decreasing when more than one entry
    #[serde(default = "default_tau")]
    pub tau: Vec<f64>,
    /// uniform | bump | spike | two-bumps | file:PATH
    #[serde(default = "default_initial")]
    pub initial: String,
    #[serde(default)]
    pub weight: Option<WeightSpec>,
    /// verification suites to run after the flows
    #[serde(default)]
    pub suites: Vec<String>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

fn default_t() -> f64 {
    0.1
}

fn default_tau() -> Vec<f64> {
    vec![1e-2]
}

fn default_initial() -> String {
    "bump".into()
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("config file {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("config file {}: {e}", path.display()))
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.p > 1.0 && self.p < 3.0) {
            return Err(format!("p out of (1,3): {}", self.p));
        }
        if !(self.t_final > 0.0) {
            return Err(format!("t_final must be positive, got {}", self.t_final));
        }
        if self.tau.is_empty() {
            return Err("tau sweep is empty".into());
        }
        for t in &self.tau {
            if !(*t > 0.0) {
                return Err(format!("tau must be positive, got {t}"));
            }
        }
        for w in self.tau.windows(2) {
            if w[1] >= w[0] {
                return Err(format!(
                    "tau sweep must be strictly decreasing, got {:?}",
                    self.tau
                ));
            }
        }
        if let Some(w) = &self.weight {
            if !(w.floor > 0.0) || !(w.scale >= 0.0) {
                return Err("weight needs floor > 0 and scale >= 0".into());
            }
        }
        if let Some(path) = self.space.strip_prefix("file:") {
            if !Path::new(path).exists() {
                return Err(format!("space file not found: {path}"));
            }
        }
        if let Some(path) = self.initial.strip_prefix("file:") {
            if !Path::new(path).exists() {
                return Err(format!("initial density file not found: {path}"));
            }
        }
        parse_space_spec(&self.space)?;
        Ok(())
    }

    pub fn build_space(&self) -> Result<Arc<MetricMeasureSpace>, String> {
        let spec = parse_space_spec(&self.space)?;
        build_space(&spec).map_err(|e| e.to_string())
    }

    /// Initial density, normalized to unit mass for the measure flows.
    pub fn build_initial(&self, space: &Arc<MetricMeasureSpace>) -> Result<DensityField, String> {
        let f = initial_preset(&self.initial, space)?;
        let mass = f.mass();
        if !(mass > 0.0) {
            return Err("initial density has nonpositive mass".into());
        }
        Ok(f.scale(1.0 / mass))
    }

    pub fn build_weight(&self, space: &Arc<MetricMeasureSpace>) -> Option<DensityField> {
        self.weight.as_ref().map(|w| {
            DensityField::from_fn(space.clone(), |i| {
                (w.scale * space.distance(i, w.base_vertex)).max(w.floor)
            })
            .expect("weight is finite")
        })
    }
}

pub fn parse_space_spec(text: &str) -> Result<SpaceSpec, String> {
    if let Some(path) = text.strip_prefix("file:") {
        let data = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let file: SpaceFile =
            serde_json::from_str(&data).map_err(|e| format!("{path}: {e}"))?;
        return Ok(SpaceSpec::Custom(file));
    }
    let (kind, params) = text
        .split_once(':')
        .ok_or_else(|| format!("space spec '{text}' (expected kind:params)"))?;
    let parse_n = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| format!("space spec '{text}': bad size '{s}'"))
    };
    match kind {
        "path" => Ok(SpaceSpec::Path {
            n: parse_n(params)?,
            length: 1.0,
            mu: 1.0,
        }),
        "cycle" => Ok(SpaceSpec::Cycle {
            n: parse_n(params)?,
            length: 1.0,
            mu: 1.0,
        }),
        "grid2d" => {
            let (nx, ny) = params
                .split_once('x')
                .ok_or_else(|| format!("space spec '{text}' (expected grid2d:NXxNY)"))?;
            Ok(SpaceSpec::Grid2d {
                nx: parse_n(nx)?,
                ny: parse_n(ny)?,
                length: 1.0,
                mu: 1.0,
            })
        }
        "unit" => Ok(SpaceSpec::UnitInterval { n: parse_n(params)? }),
        other => Err(format!("unknown space kind '{other}'")),
    }
}

/// Position of vertex i on [0,1]: grid coordinate when available, otherwise
/// normalized metric distance from vertex 0.
fn relative_position(space: &MetricMeasureSpace, i: usize) -> f64 {
    if let Some(pos) = space.positions() {
        return pos[i];
    }
    let max = (0..space.len())
        .map(|j| space.distance(0, j))
        .fold(0.0f64, f64::max);
    if max > 0.0 {
        space.distance(0, i) / max
    } else {
        0.0
    }
}

pub fn initial_preset(
    name: &str,
    space: &Arc<MetricMeasureSpace>,
) -> Result<DensityField, String> {
    use std::f64::consts::PI;
    if let Some(path) = name.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
        let values: Vec<f64> =
            serde_json::from_str(&text).map_err(|e| format!("{path}: {e}"))?;
        return DensityField::new(space.clone(), values).map_err(|e| e.to_string());
    }
    let field = match name {
        "uniform" => DensityField::constant(space.clone(), 1.0),
        // strictly positive single bump; the 0.8 amplitude keeps the
        // density bounded away from zero as the flow preconditions require
        "bump" => DensityField::from_fn(space.clone(), |i| {
            1.0 + 0.8 * (2.0 * PI * (relative_position(space, i) - 0.5)).cos()
        })
        .expect("finite"),
        "spike" => {
            let center = space.len() / 2;
            DensityField::from_fn(space.clone(), |i| if i == center { 1.0 } else { 0.0 })
                .expect("finite")
        }
        "two-bumps" => DensityField::from_fn(space.clone(), |i| {
            let x = relative_position(space, i);
            let g = |c: f64| (-((x - c) / 0.1).powi(2)).exp();
            1.0 + g(0.3) + g(0.7)
        })
        .expect("finite"),
        other => return Err(format!("unknown initial preset '{other}'")),
    };
    Ok(field)
}
