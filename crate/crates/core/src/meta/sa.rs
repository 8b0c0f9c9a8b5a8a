//! Simulated annealing with 2-opt moves: geometric cooling (baseline) or
//! Lundy-Mees cooling from a nearest-neighbour start.

use crate::instance::DistanceMatrix;
use crate::rng::seeded_rng;
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::two_opt::{is_proper_move, reversal_delta};
use crate::tour::{cycle_cost, nearest_neighbor_from_random_start};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Planned Lundy-Mees steps per city when no evaluation budget is given.
pub const DEFAULT_LM_STEPS_PER_CITY: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaParams {
    pub t_initial: f64,
    pub t_final: f64,
    /// Geometric cooling factor (baseline only).
    pub cooling_rate: f64,
}

impl SaParams {
    fn validate(&self) -> Result<(), SolveError> {
        if !(self.t_initial > self.t_final && self.t_final > 0.0) {
            return Err(SolveError::InvalidParams(format!(
                "need t_initial > t_final > 0, got {} and {}",
                self.t_initial, self.t_final
            )));
        }
        super::check_unit_open("cooling rate", self.cooling_rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaVariant {
    Baseline,
    LundyMeesR1,
}

/// Metropolis acceptance probability for a cost change `delta`.
pub fn metropolis_acceptance(delta: f64, temperature: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    }
}

/// One Lundy-Mees cooling step: `T / (1 + beta·T)`.
pub fn lundy_mees_step(temperature: f64, beta: f64) -> f64 {
    temperature / (1.0 + beta * temperature)
}

/// `beta` that takes the temperature from `t_initial` to `t_final` in
/// exactly `steps` Lundy-Mees steps.
pub fn lundy_mees_beta(t_initial: f64, t_final: f64, steps: u64) -> f64 {
    (t_initial - t_final) / (steps.max(1) as f64 * t_initial * t_final)
}

pub fn solve_sa(
    d: &DistanceMatrix,
    p: &SaParams,
    budget: &SolveBudget,
    seed: u64,
    variant: SaVariant,
) -> Result<SolveResult, SolveError> {
    run(d, p, budget, seed, variant, None)
}

/// Like [`solve_sa`], also returning the temperatures of the first cooling
/// schedule (at most `trace_limit` values).
pub fn solve_sa_traced(
    d: &DistanceMatrix,
    p: &SaParams,
    budget: &SolveBudget,
    seed: u64,
    variant: SaVariant,
    trace_limit: usize,
) -> Result<(SolveResult, Vec<f64>), SolveError> {
    let mut trace = Vec::new();
    let r = run(d, p, budget, seed, variant, Some((&mut trace, trace_limit)))?;
    Ok((r, trace))
}

fn run(
    d: &DistanceMatrix,
    p: &SaParams,
    budget: &SolveBudget,
    seed: u64,
    variant: SaVariant,
    mut trace: Option<(&mut Vec<f64>, usize)>,
) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    p.validate()?;
    budget.validate()?;
    let mut rng = seeded_rng(seed);
    let mut search = Search::new(d, budget);

    let mut order = match variant {
        SaVariant::Baseline => super::random_permutation(n, &mut rng),
        SaVariant::LundyMeesR1 => nearest_neighbor_from_random_start(d, &mut rng).into_inner(),
    };
    let mut cost = cycle_cost(&order, d);
    search.count(1);
    search.offer(&order);
    if n < 4 {
        return Ok(search.finish(seed, true));
    }

    // Baseline: `n` proposals per temperature level, geometric cooling.
    // Lundy-Mees: one proposal per step over a planned horizon.
    let (epoch, beta) = match variant {
        SaVariant::Baseline => (n as u64, 0.0),
        SaVariant::LundyMeesR1 => {
            let planned = budget
                .max_evaluations
                .map(|m| m.saturating_sub(1))
                .unwrap_or(DEFAULT_LM_STEPS_PER_CITY * n as u64)
                .max(1);
            (1, lundy_mees_beta(p.t_initial, p.t_final, planned))
        }
    };

    let mut temperature = p.t_initial;
    let mut tracing = true;
    let mut since_resync = 0u64;
    'outer: while !search.exhausted() {
        if let Some((t, limit)) = trace.as_mut() {
            if tracing && t.len() < *limit {
                t.push(temperature);
            }
        }
        for _ in 0..epoch {
            if search.remaining_evaluations() == Some(0) {
                break 'outer;
            }
            let (i, j) = loop {
                let x = rng.gen_range(0..n);
                let y = rng.gen_range(0..n);
                let (i, j) = (x.min(y), x.max(y));
                if is_proper_move(n, i, j) {
                    break (i, j);
                }
            };
            search.count(1);
            let delta = reversal_delta(&order, d, i, j);
            if delta <= 0.0 || rng.gen::<f64>() < metropolis_acceptance(delta, temperature) {
                order[i + 1..=j].reverse();
                cost += delta;
                if delta < 0.0 && search.offer_if_promising(&order, cost) {
                    cost = search.best_cost();
                }
            }
        }
        since_resync += epoch;
        if since_resync >= 8 * n as u64 {
            cost = cycle_cost(&order, d);
            since_resync = 0;
        }
        temperature = match variant {
            SaVariant::Baseline => temperature * p.cooling_rate,
            SaVariant::LundyMeesR1 => lundy_mees_step(temperature, beta),
        };
        // Cooling finished with budget left: restart from the best tour.
        if temperature < p.t_final * (1.0 - 1e-12) {
            temperature = p.t_initial;
            tracing = false;
            order.copy_from_slice(search.best());
            cost = search.best_cost();
        }
    }
    Ok(search.finish(seed, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lundy_mees_arithmetic() {
        assert!((lundy_mees_step(10.0, 0.05) - 20.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn beta_reaches_final_temperature() {
        let beta = lundy_mees_beta(12.0, 0.05, 1000);
        let mut t = 12.0;
        for _ in 0..1000 {
            t = lundy_mees_step(t, beta);
        }
        assert!((t - 0.05).abs() < 1e-9);
    }

    #[test]
    fn metropolis() {
        assert_eq!(metropolis_acceptance(0.0, 1.0), 1.0);
        assert_eq!(metropolis_acceptance(-3.0, 1.0), 1.0);
        assert!((metropolis_acceptance(1.0, 1.0) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn traced_temperatures_strictly_decrease() {
        let pts: Vec<(f64, f64)> = (0..20).map(|i| ((i * 37 % 23) as f64, (i * 11 % 19) as f64)).collect();
        let d = DistanceMatrix::euclidean(&pts);
        let p = SaParams {
            t_initial: 50.0,
            t_final: 0.048,
            cooling_rate: 0.88,
        };
        let b = SolveBudget::seconds(10.0).with_evaluations(5_000);
        let (_, temps) = solve_sa_traced(&d, &p, &b, 4, SaVariant::LundyMeesR1, 10_000).unwrap();
        assert!(temps.len() > 1000);
        assert!(temps.windows(2).all(|w| w[1] < w[0] && w[1] > 0.0));
    }

    #[test]
    fn rejects_inverted_temperatures() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0)]);
        let p = SaParams {
            t_initial: 0.01,
            t_final: 1.0,
            cooling_rate: 0.9,
        };
        assert!(solve_sa(&d, &p, &SolveBudget::seconds(1.0), 0, SaVariant::Baseline).is_err());
    }
}
