use super::space::{sample_config, ParamConfig, ParamSpace, Provenance};
use super::TunerError;
use crate::algorithm::{run_algorithm, Variant};
use crate::bench::time_limit_for;
use crate::instance::{build_distance_matrix, Instance, Rounding};
use crate::rng::seeded_rng;
use crate::solve::SolveBudget;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceSettings {
    pub variant: Variant,
    pub candidates: usize,
    /// Total solver runs allowed.
    pub budget: usize,
    pub seed: u64,
    /// Per-run time limit is `ceil(time_scale * n)` seconds.
    pub time_scale: f64,
    pub max_evaluations: Option<u64>,
    pub rounding: Rounding,
}

impl Default for RaceSettings {
    fn default() -> Self {
        RaceSettings {
            variant: Variant::Baseline,
            candidates: 16,
            budget: 500,
            seed: 0,
            time_scale: 1.0,
            max_evaluations: None,
            rounding: Rounding::None,
        }
    }
}

/// Bookkeeping after the final round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceState {
    /// Indices into the candidate list, in ascending order.
    pub survivors: Vec<usize>,
    /// `costs[c][r]` is candidate `c`'s cost in round `r`, for every round
    /// it took part in.
    pub costs: Vec<Vec<f64>>,
    pub runs_used: usize,
    pub budget: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceOutcome {
    pub best: ParamConfig,
    pub best_index: usize,
    pub best_mean_cost: f64,
    pub rounds: usize,
    /// Survivor count after each round.
    pub survivors_per_round: Vec<usize>,
    pub candidates: Vec<ParamConfig>,
    pub state: RaceState,
}

/// Average ranks (1 = best) of `costs`, ties sharing the mean rank.
fn ranks(costs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..costs.len()).collect();
    idx.sort_by(|&a, &b| costs[a].total_cmp(&costs[b]));
    let mut out = vec![0.0; costs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && costs[idx[j + 1]] == costs[idx[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            out[k] = rank;
        }
        i = j + 1;
    }
    out
}

/// Drops survivors whose mean paired rank difference to the current leader
/// exceeds its standard error.
fn eliminate(survivors: &[usize], costs: &[Vec<f64>], rounds: usize) -> Vec<usize> {
    let per_round: Vec<Vec<f64>> = (0..rounds)
        .map(|r| ranks(&survivors.iter().map(|&c| costs[c][r]).collect::<Vec<_>>()))
        .collect();
    let mean_rank = |s: usize| per_round.iter().map(|rk| rk[s]).sum::<f64>() / rounds as f64;
    let leader = (0..survivors.len())
        .min_by(|&a, &b| mean_rank(a).total_cmp(&mean_rank(b)))
        .expect("at least one survivor");

    let mut kept = Vec::with_capacity(survivors.len());
    for s in 0..survivors.len() {
        if s == leader {
            kept.push(survivors[s]);
            continue;
        }
        let diffs: Vec<f64> = per_round.iter().map(|rk| rk[s] - rk[leader]).collect();
        let mean = diffs.iter().sum::<f64>() / rounds as f64;
        let var = diffs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (rounds as f64 - 1.0);
        let se = (var / rounds as f64).sqrt();
        if mean <= se {
            kept.push(survivors[s]);
        }
    }
    kept
}

/// Races explicit candidates. Each round evaluates every survivor on one
/// (instance, seed) pair, cycling through instances; elimination starts once
/// `max(2, n_instances)` rounds are done. The race stops when one survivor
/// is left or the next round would exceed `budget` runs.
pub fn race_candidates<F>(
    candidates: Vec<ParamConfig>,
    n_instances: usize,
    budget: usize,
    seed: u64,
    evaluate: F,
) -> Result<RaceOutcome, TunerError>
where
    F: Fn(&ParamConfig, usize, u64) -> f64 + Sync,
{
    if candidates.len() < 2 {
        return Err(TunerError::TooFewCandidates(candidates.len()));
    }
    if n_instances == 0 {
        return Err(TunerError::NoInstances);
    }
    if candidates.iter().any(|c| c.algorithm != candidates[0].algorithm) {
        return Err(TunerError::MixedAlgorithms);
    }
    let required = candidates.len() * n_instances;
    if budget < required {
        return Err(TunerError::BudgetTooSmall { budget, required });
    }

    let min_rounds = n_instances.max(2);
    let mut rng = seeded_rng(seed);
    let mut survivors: Vec<usize> = (0..candidates.len()).collect();
    let mut costs: Vec<Vec<f64>> = vec![Vec::new(); candidates.len()];
    let mut runs_used = 0;
    let mut rounds = 0;
    let mut survivors_per_round = Vec::new();

    while survivors.len() > 1 && runs_used + survivors.len() <= budget {
        let instance = rounds % n_instances;
        let run_seed: u64 = rng.gen();
        let round: Vec<f64> = survivors
            .par_iter()
            .map(|&c| evaluate(&candidates[c], instance, run_seed))
            .collect();
        for (&c, cost) in survivors.iter().zip(round) {
            costs[c].push(if cost.is_nan() { f64::INFINITY } else { cost });
        }
        runs_used += survivors.len();
        rounds += 1;
        if rounds >= min_rounds {
            survivors = eliminate(&survivors, &costs, rounds);
        }
        survivors_per_round.push(survivors.len());
    }

    let mean_cost = |c: usize| costs[c].iter().sum::<f64>() / costs[c].len().max(1) as f64;
    let best_index = *survivors
        .iter()
        .min_by(|&&a, &&b| mean_cost(a).total_cmp(&mean_cost(b)))
        .expect("at least one survivor");
    Ok(RaceOutcome {
        best: candidates[best_index].clone(),
        best_index,
        best_mean_cost: mean_cost(best_index),
        rounds,
        survivors_per_round,
        candidates,
        state: RaceState {
            survivors,
            costs,
            runs_used,
            budget,
        },
    })
}

/// Samples `settings.candidates` configs from `space` and races them on
/// `instances` with the real solver. Failed runs count as infinite cost.
pub fn race(space: &ParamSpace, instances: &[Instance], settings: &RaceSettings) -> Result<RaceOutcome, TunerError> {
    if settings.candidates < 2 {
        return Err(TunerError::TooFewCandidates(settings.candidates));
    }
    let mut rng = seeded_rng(settings.seed);
    let candidates: Vec<ParamConfig> = (0..settings.candidates)
        .map(|_| sample_config(space, rng.gen()))
        .collect();
    let matrices = instances
        .iter()
        .map(|inst| build_distance_matrix(inst, settings.rounding))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| TunerError::Instance(e.to_string()))?;
    let algorithm = space.algorithm;
    let mut outcome = race_candidates(candidates, instances.len(), settings.budget, settings.seed, |cfg, i, run_seed| {
        let n = matrices[i].n();
        let budget = SolveBudget {
            time_limit_s: time_limit_for(n, settings.time_scale) as f64,
            max_evaluations: settings.max_evaluations,
        };
        run_algorithm(&instances[i], &matrices[i], algorithm, settings.variant, &cfg.values, &budget, run_seed)
            .map(|o| o.best_cost)
            .unwrap_or(f64::INFINITY)
    })?;
    outcome.best.provenance = Provenance::Raced {
        run_id: format!("race-{}-{}-{}", algorithm, settings.variant, settings.seed),
    };
    Ok(outcome)
}
