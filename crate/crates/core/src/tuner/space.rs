use super::TunerError;
use crate::algorithm::{Algorithm, ParamValues};
use crate::rng::seeded_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    Integer,
    Real,
}

/// One parameter with an inclusive range, sampled on a linear scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub name: String,
    pub kind: ParamKind,
    pub lo: f64,
    pub hi: f64,
}

impl ParamSpec {
    fn new(name: &str, kind: ParamKind, lo: f64, hi: f64) -> Self {
        ParamSpec {
            name: name.to_string(),
            kind,
            lo,
            hi,
        }
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lo && value <= self.hi && (self.kind == ParamKind::Real || value.fract() == 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSpace {
    pub algorithm: Algorithm,
    pub params: Vec<ParamSpec>,
}

impl ParamSpace {
    /// Tuning ranges for the seven stochastic algorithms.
    pub fn for_algorithm(algorithm: Algorithm) -> Result<ParamSpace, TunerError> {
        use ParamKind::{Integer, Real};
        let rl = |episodes_lo, episodes_hi| {
            vec![
                ParamSpec::new("learning_rate", Real, 0.01, 0.5),
                ParamSpec::new("discount", Real, 0.8, 0.99),
                ParamSpec::new("epsilon", Real, 0.01, 0.3),
                ParamSpec::new("episodes", Integer, episodes_lo, episodes_hi),
            ]
        };
        let params = match algorithm {
            Algorithm::Aco => vec![
                ParamSpec::new("ants", Integer, 2.0, 20.0),
                ParamSpec::new("alpha", Real, 1.0, 2.0),
                ParamSpec::new("beta", Real, 1.0, 2.0),
                ParamSpec::new("rho", Real, 0.01, 0.3),
            ],
            Algorithm::Ga => vec![
                ParamSpec::new("population_size", Integer, 5.0, 100.0),
                ParamSpec::new("mutation_rate", Real, 0.01, 0.2),
                ParamSpec::new("elite", Integer, 1.0, 5.0),
            ],
            Algorithm::Alns => vec![
                ParamSpec::new("removal_fraction", Real, 0.05, 0.3),
                ParamSpec::new("reaction", Real, 0.01, 0.3),
            ],
            Algorithm::Tabu => vec![ParamSpec::new("tenure", Integer, 3.0, 30.0)],
            Algorithm::Sa => vec![
                ParamSpec::new("t_initial", Real, 1.0, 50.0),
                ParamSpec::new("t_final", Real, 0.0001, 0.1),
                ParamSpec::new("cooling_rate", Real, 0.8, 0.99),
            ],
            Algorithm::QLearning => rl(1000.0, 10000.0),
            Algorithm::Sarsa => rl(100.0, 5000.0),
            other => return Err(TunerError::UnknownAlgorithm(other)),
        };
        Ok(ParamSpace { algorithm, params })
    }

    pub fn get(&self, name: &str) -> Option<&ParamSpec> {
        self.params.iter().find(|p| p.name == name)
    }

    /// Checks that `values` names exactly this space's parameters, each in range.
    pub fn check(&self, values: &ParamValues) -> Result<(), TunerError> {
        if let Some(extra) = values.keys().find(|k| self.get(k).is_none()) {
            return Err(TunerError::UnknownParameter(extra.clone()));
        }
        for spec in &self.params {
            let value = *values
                .get(&spec.name)
                .ok_or_else(|| TunerError::MissingParameter(spec.name.clone()))?;
            if !spec.contains(value) {
                return Err(TunerError::OutOfRange {
                    name: spec.name.clone(),
                    value,
                    lo: spec.lo,
                    hi: spec.hi,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Preset { column: String },
    Sampled { seed: u64 },
    Raced { run_id: String },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamConfig {
    pub algorithm: Algorithm,
    pub provenance: Provenance,
    pub values: ParamValues,
}

impl ParamConfig {
    /// Short label for report rows.
    pub fn id(&self) -> String {
        match &self.provenance {
            Provenance::Preset { column } => column.clone(),
            Provenance::Sampled { seed } => format!("sampled-{seed}"),
            Provenance::Raced { run_id } => run_id.clone(),
            Provenance::Custom => "custom".to_string(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn from_toml(text: &str) -> Result<ParamConfig, TunerError> {
        let cfg: ParamConfig = toml::from_str(text).map_err(|e| TunerError::Format(e.to_string()))?;
        ParamSpace::for_algorithm(cfg.algorithm)?.check(&cfg.values)?;
        Ok(cfg)
    }
}

/// Independent uniform draw per parameter; integers are inclusive-uniform.
pub fn sample_config(space: &ParamSpace, seed: u64) -> ParamConfig {
    let mut rng = seeded_rng(seed);
    let values = space
        .params
        .iter()
        .map(|p| {
            let v = match p.kind {
                ParamKind::Integer => rng.gen_range(p.lo as i64..=p.hi as i64) as f64,
                ParamKind::Real if p.lo == p.hi => p.lo,
                ParamKind::Real => rng.gen_range(p.lo..=p.hi),
            };
            (p.name.clone(), v)
        })
        .collect();
    ParamConfig {
        algorithm: space.algorithm,
        provenance: Provenance::Sampled { seed },
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithm::parameter_names;

    #[test]
    fn spaces_match_solver_parameters() {
        for a in Algorithm::STOCHASTIC {
            let space = ParamSpace::for_algorithm(a).unwrap();
            let names: Vec<&str> = space.params.iter().map(|p| p.name.as_str()).collect();
            assert_eq!(names, parameter_names(a));
            assert!(space.params.iter().all(|p| p.lo < p.hi));
        }
        assert_eq!(
            ParamSpace::for_algorithm(Algorithm::Christofides),
            Err(TunerError::UnknownAlgorithm(Algorithm::Christofides))
        );
    }

    #[test]
    fn sampling_is_deterministic_and_in_range() {
        let space = ParamSpace::for_algorithm(Algorithm::Aco).unwrap();
        assert_eq!(sample_config(&space, 1), sample_config(&space, 1));
        for seed in 0..200 {
            space.check(&sample_config(&space, seed).values).unwrap();
        }
    }

    #[test]
    fn degenerate_range_yields_its_value() {
        let space = ParamSpace {
            algorithm: Algorithm::Tabu,
            params: vec![
                ParamSpec::new("tenure", ParamKind::Integer, 7.0, 7.0),
                ParamSpec::new("x", ParamKind::Real, 0.5, 0.5),
            ],
        };
        let cfg = sample_config(&space, 9);
        assert_eq!(cfg.values["tenure"], 7.0);
        assert_eq!(cfg.values["x"], 0.5);
    }

    #[test]
    fn toml_round_trip() {
        let space = ParamSpace::for_algorithm(Algorithm::Sa).unwrap();
        let cfg = sample_config(&space, 4);
        assert_eq!(ParamConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let bad = cfg.to_toml().replace("cooling_rate", "cooling");
        assert!(ParamConfig::from_toml(&bad).is_err());
    }
}
