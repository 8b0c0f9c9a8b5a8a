//! The five metaheuristics: ant colony, genetic algorithm, adaptive large
//! neighbourhood search, tabu search and simulated annealing.

mod aco;
mod alns;
mod crossover;
mod ga;
mod sa;
mod tabu;

pub use aco::{solve_aco, AcoParams};
pub use alns::{adaptive_weight_update, cheapest_insertion_repair, solve_alns, AlnsParams, DestroyOperator};
pub use crossover::{bcr_crossover, er_crossover, ox_crossover, Crossover};
pub use ga::{initial_population, nn_seed_count, solve_ga, solve_ga_with, GaParams, GaVariant, HybridSettings, Individual, Origin};
pub use sa::{
    lundy_mees_beta, lundy_mees_step, metropolis_acceptance, solve_sa, solve_sa_traced, SaParams, SaVariant,
    DEFAULT_LM_STEPS_PER_CITY,
};
pub use tabu::{solve_tabu, TabuList, TabuParams};

use rand::seq::SliceRandom;
use rand::Rng;

/// Index drawn with probability proportional to `weights`. Falls back to a
/// uniform draw when the weights carry no usable mass.
pub(crate) fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    debug_assert!(!weights.is_empty());
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) || !total.is_finite() {
        return rng.gen_range(0..weights.len());
    }
    let mut target = rng.gen::<f64>() * total;
    let mut last_positive = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            if target < w {
                return i;
            }
            target -= w;
            last_positive = i;
        }
    }
    last_positive
}

pub(crate) fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}

pub(crate) fn check_unit_open(name: &str, v: f64) -> Result<(), crate::solve::SolveError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(crate::solve::SolveError::InvalidParams(format!("{name} must lie in (0, 1), got {v}")))
    }
}
