//! Ant System.

use super::roulette;
use crate::instance::DistanceMatrix;
use crate::rng::seeded_rng;
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::{cycle_cost, edges, nearest_neighbor_tour};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcoParams {
    pub ants: usize,
    /// Pheromone exponent.
    pub alpha: f64,
    /// Heuristic (inverse distance) exponent.
    pub beta: f64,
    /// Evaporation rate.
    pub rho: f64,
}

impl AcoParams {
    fn validate(&self) -> Result<(), SolveError> {
        if self.ants == 0 {
            return Err(SolveError::InvalidParams("ACO needs at least one ant".into()));
        }
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(SolveError::InvalidParams("ACO exponents must be non-negative".into()));
        }
        super::check_unit_open("rho", self.rho)
    }
}

/// Runs Ant System under `budget`.
///
/// Each ant starts at a random city and moves to unvisited city `j` with
/// probability proportional to `tau[i][j]^alpha * (1/d[i][j])^beta`. After
/// every colony iteration pheromone evaporates by `rho` and each ant
/// deposits `Q / L` on its edges, with `Q` the mean off-diagonal distance.
/// The first colony iteration always completes.
pub fn solve_aco(d: &DistanceMatrix, p: &AcoParams, budget: &SolveBudget, seed: u64) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    p.validate()?;
    budget.validate()?;
    let mut rng = seeded_rng(seed);
    let mut search = Search::new(d, budget);

    let mean = d.mean_off_diagonal();
    let deposit = if mean > 0.0 { mean } else { 1.0 };
    let floor = if mean > 0.0 { mean * 1e-9 } else { 1e-9 };
    let nn = nearest_neighbor_tour(d, 0);
    search.count(1);
    let nn_cost = cycle_cost(nn.order(), d).max(floor);
    let tau0 = p.ants as f64 * deposit / nn_cost;

    let mut tau = vec![tau0; n * n];
    let eta: Vec<f64> = d.entries().iter().map(|&v| (1.0 / v.max(floor)).powf(p.beta)).collect();
    let mut attraction = vec![0.0; n * n];
    let mut tours: Vec<(Vec<usize>, f64)> = Vec::with_capacity(p.ants);
    let mut weights = Vec::with_capacity(n);
    let mut candidates = Vec::with_capacity(n);
    let mut visited = vec![false; n];

    let mut first = true;
    while first || !search.exhausted() {
        first = false;
        for (a, (&t, &h)) in attraction.iter_mut().zip(tau.iter().zip(&eta)) {
            *a = t.powf(p.alpha) * h;
        }
        tours.clear();
        for _ in 0..p.ants {
            visited.iter_mut().for_each(|v| *v = false);
            let mut current = rng.gen_range(0..n);
            let mut order = Vec::with_capacity(n);
            order.push(current);
            visited[current] = true;
            for _ in 1..n {
                candidates.clear();
                weights.clear();
                let row = &attraction[current * n..(current + 1) * n];
                for (city, &w) in row.iter().enumerate() {
                    if !visited[city] {
                        candidates.push(city);
                        weights.push(w);
                    }
                }
                current = candidates[roulette(&weights, &mut rng)];
                visited[current] = true;
                order.push(current);
            }
            search.count(1);
            let cost = cycle_cost(&order, d);
            search.offer_if_promising(&order, cost);
            tours.push((order, cost));
        }

        for t in tau.iter_mut() {
            *t *= 1.0 - p.rho;
        }
        for (order, cost) in &tours {
            let amount = deposit / cost.max(floor);
            for (a, b) in edges(order) {
                tau[a * n + b] += amount;
                tau[b * n + a] += amount;
            }
        }
    }
    Ok(search.finish(seed, false))
}
