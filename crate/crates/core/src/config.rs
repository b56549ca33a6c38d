//! Run configuration: a single JSON document with fail-closed validation.
//!
//! `train` writes a `run.json` envelope holding the resolved configuration
//! plus derived quantities; [`load_config`] accepts either a bare
//! configuration or such an envelope, so a recorded run can be replayed
//! directly.

use crate::env::{Cell, GridWorld};
use crate::learn::{Hyperparams, RewardSpec, Schedule, Variant};
use crate::stl::{parse_formula, Region, TaskSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid formula: {0}")]
    Formula(#[from] crate::stl::Error),
    #[error("invalid workspace: {0}")]
    Workspace(#[from] crate::env::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub workspace: WorkspaceConfig,
    pub task: TaskConfig,
    pub train: TrainConfig,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceConfig {
    pub n: u16,
    pub regions: BTreeMap<String, RegionConfig>,
    pub p_slip: f64,
    pub start: [u16; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionConfig {
    pub lo_x: f64,
    pub hi_x: f64,
    pub lo_y: f64,
    pub hi_y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    pub formula: String,
    pub delta: u32,
    pub variant: Variant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub beta: f64,
    pub gamma: f64,
    pub episodes: usize,
    pub alpha: AlphaConfig,
    pub epsilon: EpsilonConfig,
    #[serde(default = "default_exp_clamp")]
    pub exp_clamp: f64,
    #[serde(default = "default_rho_scale")]
    pub rho_scale: f64,
}

fn default_exp_clamp() -> f64 {
    700.0
}

fn default_rho_scale() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaConfig {
    pub a0: f64,
    pub decay: f64,
    pub floor: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonConfig {
    pub e0: f64,
    pub decay: f64,
    pub floor: f64,
}

/// Everything `train` records next to its outputs; re-feeding this file as
/// a config reproduces the run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub config: RunConfig,
    pub tau: usize,
    pub horizon: usize,
    pub formula: String,
    pub q_entries: usize,
    pub clamp_events: u64,
}

/// A validated configuration turned into domain objects.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub grid: GridWorld,
    pub task: TaskSpec,
    pub reward: RewardSpec,
    pub hyper: Hyperparams,
    pub seed: u64,
    /// Canonical (parse-then-print) formula text, used for Q-table headers.
    pub formula: String,
}

impl RunConfig {
    pub fn resolve(&self) -> Result<ResolvedRun, ConfigError> {
        let regions: BTreeMap<String, Region> = self
            .workspace
            .regions
            .iter()
            .map(|(name, r)| {
                (
                    name.clone(),
                    Region::new([r.lo_x, r.lo_y], [r.hi_x, r.hi_y]),
                )
            })
            .collect();
        let grid = GridWorld::new(
            self.workspace.n,
            regions,
            self.workspace.p_slip,
            Cell::new(self.workspace.start[0], self.workspace.start[1]),
        )?;
        let parsed = parse_formula(&self.task.formula)?;
        let resolved = parsed.resolve(grid.regions())?;
        let task = TaskSpec::new(&resolved, self.task.delta)?;

        let t = &self.train;
        check_unit_open("train.gamma", t.gamma)?;
        if t.beta <= 0.0 {
            return Err(ConfigError::Invalid("train.beta must be positive".into()));
        }
        if t.exp_clamp <= 0.0 {
            return Err(ConfigError::Invalid(
                "train.exp_clamp must be positive".into(),
            ));
        }
        if t.rho_scale <= 0.0 {
            return Err(ConfigError::Invalid(
                "train.rho_scale must be positive".into(),
            ));
        }
        let alpha = Schedule {
            init: t.alpha.a0,
            decay: t.alpha.decay,
            floor: t.alpha.floor,
        };
        let epsilon = Schedule {
            init: t.epsilon.e0,
            decay: t.epsilon.decay,
            floor: t.epsilon.floor,
        };
        check_schedule("train.alpha", &alpha)?;
        check_schedule("train.epsilon", &epsilon)?;

        let hyper = Hyperparams {
            beta: t.beta,
            gamma: t.gamma,
            episodes: t.episodes,
            alpha,
            epsilon,
            exp_clamp: t.exp_clamp,
            rho_scale: t.rho_scale,
        };
        let reward = RewardSpec::from_task(&task, self.task.variant, t.beta, t.rho_scale);
        Ok(ResolvedRun {
            grid,
            task,
            reward,
            hyper,
            seed: self.seed,
            formula: resolved.to_string(),
        })
    }
}

fn check_unit_open(name: &str, v: f64) -> Result<(), ConfigError> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!("{name} must lie in (0, 1]")))
    }
}

fn check_schedule(name: &str, s: &Schedule) -> Result<(), ConfigError> {
    check_unit_open(&format!("{name} initial value"), s.init)?;
    check_unit_open(&format!("{name} decay"), s.decay)?;
    if s.floor < 0.0 || s.floor > s.init {
        return Err(ConfigError::Invalid(format!(
            "{name} floor must lie in [0, initial value]"
        )));
    }
    Ok(())
}

/// Loads a configuration file, accepting either a bare [`RunConfig`] or a
/// [`RunRecord`] envelope produced by a previous run.
pub fn load_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    if value.get("config").is_some() {
        let record: RunRecord = serde_json::from_value(value)?;
        Ok(record.config)
    } else {
        Ok(serde_json::from_value(value)?)
    }
}
