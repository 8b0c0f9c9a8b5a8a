//! Algorithm and variant identifiers, and a single dispatch entry point
//! used by the tuner, the benchmark harness, and the CLI.

use crate::constructive::{christofides, convex_hull_tour, HullError};
use crate::exact::{branch_and_bound, BbCap, BbVariant};
use crate::instance::{DistanceMatrix, Instance};
use crate::meta::{
    solve_aco, solve_alns, solve_ga, solve_sa, solve_tabu, AcoParams, AlnsParams, GaParams, GaVariant, SaParams,
    SaVariant, TabuParams,
};
use crate::rl::{solve_qlearning, solve_sarsa, RlParams, SarsaVariant};
use crate::solve::{SolveBudget, SolveError, SolveResult, StopReason, TrajectoryPoint};
use crate::tour::Tour;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

/// Named numeric parameter values, e.g. `{"ants": 7, "alpha": 1.34}`.
pub type ParamValues = BTreeMap<String, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgorithmError {
    #[error("unknown algorithm '{0}'")]
    UnknownAlgorithm(String),
    #[error("unknown variant '{0}'")]
    UnknownVariant(String),
    #[error("{algorithm} has no variant {variant}")]
    UnsupportedVariant { algorithm: Algorithm, variant: Variant },
    #[error("{algorithm} needs parameter '{name}'")]
    MissingParameter { algorithm: Algorithm, name: &'static str },
    #[error("parameter '{name}' must be a non-negative integer, got {value}")]
    NotAnInteger { name: &'static str, value: f64 },
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Hull(#[from] HullError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Aco,
    Ga,
    Alns,
    Tabu,
    Sa,
    QLearning,
    Sarsa,
    Christofides,
    ConvexHull,
    BranchAndBound,
}

impl Algorithm {
    pub const ALL: [Algorithm; 10] = [
        Algorithm::Aco,
        Algorithm::Ga,
        Algorithm::Alns,
        Algorithm::Tabu,
        Algorithm::Sa,
        Algorithm::QLearning,
        Algorithm::Sarsa,
        Algorithm::Christofides,
        Algorithm::ConvexHull,
        Algorithm::BranchAndBound,
    ];

    pub const STOCHASTIC: [Algorithm; 7] = [
        Algorithm::Aco,
        Algorithm::Ga,
        Algorithm::Alns,
        Algorithm::Tabu,
        Algorithm::Sa,
        Algorithm::QLearning,
        Algorithm::Sarsa,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Aco => "aco",
            Algorithm::Ga => "ga",
            Algorithm::Alns => "alns",
            Algorithm::Tabu => "tabu",
            Algorithm::Sa => "sa",
            Algorithm::QLearning => "q_learning",
            Algorithm::Sarsa => "sarsa",
            Algorithm::Christofides => "christofides",
            Algorithm::ConvexHull => "convex_hull",
            Algorithm::BranchAndBound => "branch_and_bound",
        }
    }

    pub fn is_stochastic(self) -> bool {
        Self::STOCHASTIC.contains(&self)
    }

    /// Christofides and convex hull: parameter-free and seed-independent.
    pub fn is_deterministic_heuristic(self) -> bool {
        matches!(self, Algorithm::Christofides | Algorithm::ConvexHull)
    }

    pub fn variants(self) -> &'static [Variant] {
        match self {
            Algorithm::Ga => &[Variant::Baseline, Variant::HybridR1],
            Algorithm::Sa => &[Variant::Baseline, Variant::LundyMeesR1],
            Algorithm::Sarsa => &[Variant::Baseline, Variant::BoltzmannO1],
            Algorithm::BranchAndBound => &[Variant::Baseline, Variant::EnhancedR1],
            _ => &[Variant::Baseline],
        }
    }

    /// Preset column matching a variant's origin.
    pub fn default_column(self, variant: Variant) -> &'static str {
        match variant {
            Variant::Baseline | Variant::EnhancedR1 => "original",
            Variant::HybridR1 | Variant::LundyMeesR1 => "r1",
            Variant::BoltzmannO1 => "o1",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Algorithm {
    type Err = AlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "qlearning" | "ql" | "rl_ql" => "q_learning",
            "bb" | "bnb" => "branch_and_bound",
            "hull" => "convex_hull",
            other => other,
        };
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == alias)
            .ok_or_else(|| AlgorithmError::UnknownAlgorithm(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    #[default]
    Baseline,
    HybridR1,
    LundyMeesR1,
    BoltzmannO1,
    EnhancedR1,
}

impl Variant {
    pub fn id(self) -> &'static str {
        match self {
            Variant::Baseline => "baseline",
            Variant::HybridR1 => "hybrid_r1",
            Variant::LundyMeesR1 => "lundy_mees_r1",
            Variant::BoltzmannO1 => "boltzmann_o1",
            Variant::EnhancedR1 => "enhanced_r1",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Variant {
    type Err = AlgorithmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        [
            Variant::Baseline,
            Variant::HybridR1,
            Variant::LundyMeesR1,
            Variant::BoltzmannO1,
            Variant::EnhancedR1,
        ]
        .into_iter()
        .find(|v| v.id() == key)
        .ok_or_else(|| AlgorithmError::UnknownVariant(s.to_string()))
    }
}

/// Uniform result of any solver, stochastic or not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub algorithm: Algorithm,
    pub variant: Variant,
    pub seed: u64,
    pub best: Tour,
    pub best_cost: f64,
    pub evaluations: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nodes_expanded: Option<u64>,
    pub elapsed_s: f64,
    pub stop_reason: StopReason,
    /// Exact search only: false when a cap cut the search short.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proven_optimal: Option<bool>,
    /// Christofides only: whether the matrix satisfied the triangle inequality.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub metric_input: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_rollout_cost: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub trajectory: Vec<TrajectoryPoint>,
}

impl RunOutcome {
    fn from_solve(algorithm: Algorithm, variant: Variant, r: SolveResult) -> Self {
        RunOutcome {
            algorithm,
            variant,
            seed: r.seed,
            best: r.best,
            best_cost: r.best_cost,
            evaluations: r.evaluations,
            nodes_expanded: None,
            elapsed_s: r.elapsed_s,
            stop_reason: r.stop_reason,
            proven_optimal: None,
            metric_input: None,
            final_rollout_cost: r.final_rollout_cost,
            trajectory: r.trajectory,
        }
    }

    fn deterministic(algorithm: Algorithm, seed: u64, best: Tour, d: &DistanceMatrix, started: Instant) -> Self {
        RunOutcome {
            algorithm,
            variant: Variant::Baseline,
            seed,
            best_cost: crate::tour::canonical_cost(best.order(), d),
            best,
            evaluations: 1,
            nodes_expanded: None,
            elapsed_s: started.elapsed().as_secs_f64(),
            stop_reason: StopReason::Completed,
            proven_optimal: None,
            metric_input: None,
            final_rollout_cost: None,
            trajectory: Vec::new(),
        }
    }
}

/// Parameter names each stochastic algorithm reads from [`ParamValues`].
pub fn parameter_names(algorithm: Algorithm) -> &'static [&'static str] {
    match algorithm {
        Algorithm::Aco => &["ants", "alpha", "beta", "rho"],
        Algorithm::Ga => &["population_size", "mutation_rate", "elite"],
        Algorithm::Alns => &["removal_fraction", "reaction"],
        Algorithm::Tabu => &["tenure"],
        Algorithm::Sa => &["t_initial", "t_final", "cooling_rate"],
        Algorithm::QLearning | Algorithm::Sarsa => &["learning_rate", "discount", "epsilon", "episodes"],
        _ => &[],
    }
}

struct Reader<'a> {
    algorithm: Algorithm,
    values: &'a ParamValues,
}

impl Reader<'_> {
    fn real(&self, name: &'static str) -> Result<f64, AlgorithmError> {
        self.values.get(name).copied().ok_or(AlgorithmError::MissingParameter {
            algorithm: self.algorithm,
            name,
        })
    }

    fn int(&self, name: &'static str) -> Result<usize, AlgorithmError> {
        let value = self.real(name)?;
        if value < 0.0 || value.fract() != 0.0 || !value.is_finite() {
            return Err(AlgorithmError::NotAnInteger { name, value });
        }
        Ok(value as usize)
    }
}

/// Runs one algorithm. `params` is required for stochastic algorithms and
/// ignored otherwise. The exact solver treats the budget's time limit as a
/// soft cap and ignores the evaluation limit.
pub fn run_algorithm(
    inst: &Instance,
    d: &DistanceMatrix,
    algorithm: Algorithm,
    variant: Variant,
    params: &ParamValues,
    budget: &SolveBudget,
    seed: u64,
) -> Result<RunOutcome, AlgorithmError> {
    if !algorithm.variants().contains(&variant) {
        return Err(AlgorithmError::UnsupportedVariant { algorithm, variant });
    }
    let p = Reader {
        algorithm,
        values: params,
    };
    let result = match algorithm {
        Algorithm::Aco => {
            let ap = AcoParams {
                ants: p.int("ants")?,
                alpha: p.real("alpha")?,
                beta: p.real("beta")?,
                rho: p.real("rho")?,
            };
            solve_aco(d, &ap, budget, seed)?
        }
        Algorithm::Ga => {
            let gp = GaParams {
                population_size: p.int("population_size")?,
                mutation_rate: p.real("mutation_rate")?,
                elite: p.int("elite")?,
            };
            let gv = match variant {
                Variant::HybridR1 => GaVariant::HybridR1,
                _ => GaVariant::Baseline,
            };
            solve_ga(d, &gp, budget, seed, gv)?
        }
        Algorithm::Alns => {
            let ap = AlnsParams {
                removal_fraction: p.real("removal_fraction")?,
                reaction: p.real("reaction")?,
            };
            solve_alns(d, &ap, budget, seed)?
        }
        Algorithm::Tabu => solve_tabu(d, &TabuParams { tenure: p.int("tenure")? }, budget, seed)?,
        Algorithm::Sa => {
            let sp = SaParams {
                t_initial: p.real("t_initial")?,
                t_final: p.real("t_final")?,
                cooling_rate: p.real("cooling_rate")?,
            };
            let sv = match variant {
                Variant::LundyMeesR1 => SaVariant::LundyMeesR1,
                _ => SaVariant::Baseline,
            };
            solve_sa(d, &sp, budget, seed, sv)?
        }
        Algorithm::QLearning | Algorithm::Sarsa => {
            let rp = RlParams {
                learning_rate: p.real("learning_rate")?,
                discount: p.real("discount")?,
                epsilon: p.real("epsilon")?,
                episodes: p.int("episodes")?,
            };
            if algorithm == Algorithm::QLearning {
                solve_qlearning(d, &rp, budget, seed)?
            } else {
                let sv = match variant {
                    Variant::BoltzmannO1 => SarsaVariant::BoltzmannO1,
                    _ => SarsaVariant::Baseline,
                };
                solve_sarsa(d, &rp, budget, seed, sv)?
            }
        }
        Algorithm::Christofides => {
            let started = Instant::now();
            let c = christofides(d);
            let mut out = RunOutcome::deterministic(algorithm, seed, c.tour, d, started);
            out.metric_input = Some(c.metric);
            return Ok(out);
        }
        Algorithm::ConvexHull => {
            let started = Instant::now();
            let tour = convex_hull_tour(inst, d)?;
            return Ok(RunOutcome::deterministic(algorithm, seed, tour, d, started));
        }
        Algorithm::BranchAndBound => {
            let bv = match variant {
                Variant::EnhancedR1 => BbVariant::EnhancedR1,
                _ => BbVariant::Baseline,
            };
            let cap = BbCap {
                max_nodes: None,
                time_limit_s: Some(budget.time_limit_s),
            };
            let r = branch_and_bound(d, bv, cap)?;
            return Ok(RunOutcome {
                algorithm,
                variant,
                seed,
                best_cost: r.best_cost,
                best: r.best,
                evaluations: r.nodes_expanded,
                nodes_expanded: Some(r.nodes_expanded),
                elapsed_s: r.elapsed_s,
                stop_reason: if r.proven_optimal {
                    StopReason::Completed
                } else {
                    StopReason::TimeLimit
                },
                proven_optimal: Some(r.proven_optimal),
                metric_input: None,
                final_rollout_cost: None,
                trajectory: Vec::new(),
            });
        }
    };
    Ok(RunOutcome::from_solve(algorithm, variant, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{build_distance_matrix, EdgeWeightKind, Rounding};

    #[test]
    fn ids_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.id().parse::<Algorithm>().unwrap(), a);
            for v in a.variants() {
                assert_eq!(v.id().parse::<Variant>().unwrap(), *v);
            }
        }
        assert_eq!("QLearning".parse::<Algorithm>().unwrap(), Algorithm::QLearning);
        assert!("foo".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_solves_the_triangle() {
        let inst = Instance::from_coords("t", EdgeWeightKind::Euc2d, vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).unwrap();
        let d = build_distance_matrix(&inst, Rounding::None).unwrap();
        let budget = SolveBudget::seconds(2.0).with_evaluations(200);
        let params: ParamValues = [
            ("ants", 3.0),
            ("alpha", 1.0),
            ("beta", 2.0),
            ("rho", 0.1),
            ("population_size", 10.0),
            ("mutation_rate", 0.1),
            ("elite", 2.0),
            ("removal_fraction", 0.3),
            ("reaction", 0.2),
            ("tenure", 5.0),
            ("t_initial", 10.0),
            ("t_final", 0.01),
            ("cooling_rate", 0.9),
            ("learning_rate", 0.3),
            ("discount", 0.9),
            ("epsilon", 0.1),
            ("episodes", 50.0),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
        for a in Algorithm::ALL {
            for &v in a.variants() {
                let out = run_algorithm(&inst, &d, a, v, &params, &budget, 1).unwrap();
                assert_eq!(out.best_cost, 12.0, "{a}/{v}");
            }
        }
    }

    #[test]
    fn missing_and_malformed_parameters() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let inst = Instance::from_matrix("m", 3, d.entries().to_vec()).unwrap();
        let budget = SolveBudget::seconds(1.0);
        let empty = ParamValues::new();
        assert!(matches!(
            run_algorithm(&inst, &d, Algorithm::Tabu, Variant::Baseline, &empty, &budget, 0),
            Err(AlgorithmError::MissingParameter { name: "tenure", .. })
        ));
        let frac: ParamValues = [("tenure".to_string(), 2.5)].into();
        assert!(matches!(
            run_algorithm(&inst, &d, Algorithm::Tabu, Variant::Baseline, &frac, &budget, 0),
            Err(AlgorithmError::NotAnInteger { .. })
        ));
        assert!(matches!(
            run_algorithm(&inst, &d, Algorithm::Aco, Variant::HybridR1, &empty, &budget, 0),
            Err(AlgorithmError::UnsupportedVariant { .. })
        ));
    }
}
