use crate::algorithm::{Algorithm, ParamValues, Variant};
use crate::instance::{generate_random_instance, parse_instance, CoordRange, Instance, InstanceError, Rounding};
use crate::tuner::{preset, ParamSpace, TunerError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("plan syntax: {0}")]
    Parse(String),
    #[error("instance {path}: {source}")]
    Instance { path: PathBuf, source: InstanceError },
    #[error("invalid plan: {0}")]
    Invalid(String),
    #[error(transparent)]
    Tuner(#[from] TunerError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    BestCost,
    Runtime,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InstanceSource {
    File {
        path: PathBuf,
    },
    Random {
        n: usize,
        seed: u64,
        #[serde(default = "default_lo")]
        lo: f64,
        #[serde(default = "default_hi")]
        hi: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

fn default_lo() -> f64 {
    0.0
}

fn default_hi() -> f64 {
    100.0
}

/// One algorithm/variant/configuration to run on every instance.
///
/// Parameters come from `params` when given, otherwise from the preset
/// column `preset`, otherwise from the variant's default column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_id: Option<String>,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, variant: Variant) -> Self {
        RunSpec {
            algorithm,
            variant,
            preset: None,
            params: None,
            config_id: None,
        }
    }

    pub(crate) fn resolve_params(&self) -> Result<(String, ParamValues), PlanError> {
        if !self.algorithm.is_stochastic() {
            return Ok((self.config_id.clone().unwrap_or_else(|| "none".into()), ParamValues::new()));
        }
        if let Some(values) = &self.params {
            ParamSpace::for_algorithm(self.algorithm)?.check(values)?;
            return Ok((self.config_id.clone().unwrap_or_else(|| "custom".into()), values.clone()));
        }
        let column = self
            .preset
            .clone()
            .unwrap_or_else(|| self.algorithm.default_column(self.variant).to_string());
        let cfg = preset(self.algorithm, &column)?;
        Ok((self.config_id.clone().unwrap_or_else(|| cfg.id()), cfg.values))
    }
}

/// A benchmark campaign, usually read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub instances: Vec<InstanceSource>,
    pub runs: Vec<RunSpec>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_time_scale")]
    pub time_scale: f64,
    /// Summary metric; unset means runtime for branch and bound and best
    /// cost for everything else.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Metric>,
    #[serde(default)]
    pub rounding: Rounding,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_evaluations: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Directory relative instance paths resolve against.
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

fn default_repetitions() -> usize {
    1
}

fn default_time_scale() -> f64 {
    1.0
}

impl ExperimentPlan {
    pub fn new(instances: Vec<InstanceSource>, runs: Vec<RunSpec>) -> Self {
        ExperimentPlan {
            instances,
            runs,
            repetitions: default_repetitions(),
            base_seed: 0,
            time_scale: default_time_scale(),
            metric: None,
            rounding: Rounding::None,
            max_evaluations: None,
            workers: None,
            base_dir: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, PlanError> {
        let plan: ExperimentPlan = toml::from_str(text).map_err(|e| PlanError::Parse(e.to_string()))?;
        plan.validate()?;
        Ok(plan)
    }

    pub fn from_file(path: &Path) -> Result<Self, PlanError> {
        let text = std::fs::read_to_string(path).map_err(|e| PlanError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut plan = Self::from_toml(&text)?;
        plan.base_dir = path.parent().map(Path::to_path_buf);
        Ok(plan)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("plan serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        let invalid = |m: String| Err(PlanError::Invalid(m));
        if self.instances.is_empty() {
            return invalid("no instances".into());
        }
        if self.runs.is_empty() {
            return invalid("no runs".into());
        }
        if self.repetitions == 0 {
            return invalid("repetitions must be at least 1".into());
        }
        if !(self.time_scale > 0.0 && self.time_scale.is_finite()) {
            return invalid(format!("time_scale must be positive, got {}", self.time_scale));
        }
        for src in &self.instances {
            if let InstanceSource::Random { n, lo, hi, .. } = src {
                if *n < 2 || !(lo <= hi) {
                    return invalid(format!("random instance needs n >= 2 and lo <= hi, got n={n} [{lo}, {hi}]"));
                }
            }
        }
        for spec in &self.runs {
            if !spec.algorithm.variants().contains(&spec.variant) {
                return invalid(format!("{} has no variant {}", spec.algorithm, spec.variant));
            }
        }
        Ok(())
    }

    pub(crate) fn load_instances(&self) -> Result<Vec<Instance>, PlanError> {
        let mut out = Vec::with_capacity(self.instances.len());
        for src in &self.instances {
            let inst = match src {
                InstanceSource::File { path } => {
                    let full = match &self.base_dir {
                        Some(dir) if path.is_relative() => dir.join(path),
                        _ => path.clone(),
                    };
                    let text = std::fs::read_to_string(&full).map_err(|e| PlanError::Io {
                        path: full.clone(),
                        message: e.to_string(),
                    })?;
                    parse_instance(&text).map_err(|source| PlanError::Instance { path: full, source })?
                }
                InstanceSource::Random { n, seed, lo, hi, name } => {
                    let mut inst = generate_random_instance(*n, *seed, CoordRange { lo: *lo, hi: *hi });
                    if let Some(name) = name {
                        inst.name = name.clone();
                    }
                    inst
                }
            };
            out.push(inst);
        }
        let mut names = BTreeSet::new();
        for inst in &out {
            if !names.insert(inst.name.as_str()) {
                return Err(PlanError::Invalid(format!("duplicate instance name '{}'", inst.name)));
            }
        }
        Ok(out)
    }
}
