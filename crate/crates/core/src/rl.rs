//! Tabular Q-learning and SARSA tour construction.
//!
//! The state is the current city and an action is the next city; only
//! unvisited cities are eligible. Rewards are negated distances scaled by
//! the largest matrix entry, so every reward lies in `[-1, 0]`.

use crate::instance::DistanceMatrix;
use crate::rng::{seeded_rng, Rng64};
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::{canonical_cost, cycle_cost};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoltzmannError {
    #[error("empty action-value vector")]
    EmptyInput,
    #[error("non-finite action value or temperature")]
    NonFiniteInput,
    #[error("temperature must be positive, got {0}")]
    NonPositiveTemperature(f64),
}

/// Max-shifted softmax of `q / temperature`.
pub fn boltzmann_probabilities(q: &[f64], temperature: f64) -> Result<Vec<f64>, BoltzmannError> {
    if q.is_empty() {
        return Err(BoltzmannError::EmptyInput);
    }
    if !temperature.is_finite() || q.iter().any(|v| !v.is_finite()) {
        return Err(BoltzmannError::NonFiniteInput);
    }
    if temperature <= 0.0 {
        return Err(BoltzmannError::NonPositiveTemperature(temperature));
    }
    let mut out = Vec::with_capacity(q.len());
    boltzmann_into(q, temperature, &mut out);
    Ok(out)
}

fn boltzmann_into(q: &[f64], temperature: f64, out: &mut Vec<f64>) {
    let max = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.clear();
    out.extend(q.iter().map(|&v| ((v - max) / temperature).exp()));
    let sum: f64 = out.iter().sum();
    for p in out.iter_mut() {
        *p /= sum;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RlParams {
    pub learning_rate: f64,
    pub discount: f64,
    pub epsilon: f64,
    pub episodes: usize,
}

impl RlParams {
    fn validate(&self) -> Result<(), SolveError> {
        let bad = |what: &str| Err(SolveError::InvalidParams(what.to_string()));
        if !(self.learning_rate > 0.0 && self.learning_rate <= 1.0) {
            return bad("learning rate must lie in (0, 1]");
        }
        if !(0.0..1.0).contains(&self.discount) {
            return bad("discount must lie in [0, 1)");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if self.episodes == 0 {
            return bad("at least one episode is required");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SarsaVariant {
    Baseline,
    BoltzmannO1,
}

/// Action values: `get(s, a)` estimates the return of moving from city `s`
/// to city `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    n: usize,
    values: Vec<f64>,
}

impl QTable {
    pub fn zeros(n: usize) -> Self {
        QTable {
            n,
            values: vec![0.0; n * n],
        }
    }

    #[inline]
    pub fn get(&self, s: usize, a: usize) -> f64 {
        self.values[s * self.n + a]
    }

    /// Temporal-difference update toward `reward + discount·bootstrap`.
    #[inline]
    pub fn update(&mut self, s: usize, a: usize, reward: f64, bootstrap: f64, learning_rate: f64, discount: f64) {
        let q = &mut self.values[s * self.n + a];
        *q += learning_rate * (reward + discount * bootstrap - *q);
    }

    /// Highest-valued unvisited action from `s`; ties go to the lowest index.
    fn greedy(&self, s: usize, unvisited: &[usize]) -> usize {
        let mut best = unvisited[0];
        for &a in &unvisited[1..] {
            if self.get(s, a) > self.get(s, best) {
                best = a;
            }
        }
        best
    }

    fn max_over(&self, s: usize, unvisited: &[usize]) -> f64 {
        unvisited.iter().map(|&a| self.get(s, a)).fold(f64::NEG_INFINITY, f64::max)
    }
}

enum Policy {
    EpsilonGreedy(f64),
    Boltzmann(f64),
}

struct Learner<'a> {
    d: &'a DistanceMatrix,
    scale: f64,
    q: QTable,
    rng: Rng64,
    probs: Vec<f64>,
    qs: Vec<f64>,
}

impl Learner<'_> {
    fn reward(&self, s: usize, a: usize) -> f64 {
        -self.d.get(s, a) / self.scale
    }

    fn select(&mut self, s: usize, unvisited: &[usize], policy: &Policy) -> usize {
        match *policy {
            Policy::EpsilonGreedy(eps) => {
                if self.rng.gen::<f64>() < eps {
                    unvisited[self.rng.gen_range(0..unvisited.len())]
                } else {
                    self.q.greedy(s, unvisited)
                }
            }
            Policy::Boltzmann(temperature) => {
                self.qs.clear();
                self.qs.extend(unvisited.iter().map(|&a| self.q.get(s, a)));
                boltzmann_into(&self.qs, temperature, &mut self.probs);
                let idx = crate::meta::roulette(&self.probs, &mut self.rng);
                unvisited[idx]
            }
        }
    }
}

fn remove_city(unvisited: &mut Vec<usize>, city: usize) {
    let pos = unvisited.iter().position(|&c| c == city).expect("selected city is unvisited");
    unvisited.remove(pos);
}

#[derive(Clone, Copy, PartialEq)]
enum Method {
    QLearning,
    Sarsa,
}

fn train(
    d: &DistanceMatrix,
    p: &RlParams,
    budget: &SolveBudget,
    seed: u64,
    method: Method,
    boltzmann: bool,
) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    p.validate()?;
    budget.validate()?;
    let max = d.max_entry();
    let mut learner = Learner {
        d,
        scale: if max > 0.0 { max } else { 1.0 },
        q: QTable::zeros(n),
        rng: seeded_rng(seed),
        probs: Vec::with_capacity(n),
        qs: Vec::with_capacity(n),
    };
    let mut search = Search::new(d, budget);
    let (lr, df) = (p.learning_rate, p.discount);

    let mut completed = true;
    let mut route = Vec::with_capacity(n);
    let mut unvisited = Vec::with_capacity(n);
    for episode in 0..p.episodes {
        if episode > 0 && search.exhausted() {
            completed = false;
            break;
        }
        let policy = if boltzmann {
            let progress = if p.episodes > 1 {
                episode as f64 / (p.episodes - 1) as f64
            } else {
                0.0
            };
            Policy::Boltzmann(1.0 - 0.9 * progress)
        } else {
            Policy::EpsilonGreedy(p.epsilon)
        };

        let start = learner.rng.gen_range(0..n);
        route.clear();
        route.push(start);
        unvisited.clear();
        unvisited.extend((0..n).filter(|&c| c != start));

        let mut s = start;
        let mut a = learner.select(s, &unvisited, &policy);
        loop {
            let r = learner.reward(s, a);
            remove_city(&mut unvisited, a);
            route.push(a);
            let last = unvisited.is_empty();
            let (next, bootstrap) = if last {
                (start, learner.q.get(a, start))
            } else {
                match method {
                    Method::QLearning => {
                        let b = learner.q.max_over(a, &unvisited);
                        (learner.select(a, &unvisited, &policy), b)
                    }
                    Method::Sarsa => {
                        let next = learner.select(a, &unvisited, &policy);
                        (next, learner.q.get(a, next))
                    }
                }
            };
            learner.q.update(s, a, r, bootstrap, lr, df);
            if last {
                let closing = learner.reward(a, start);
                learner.q.update(a, start, closing, 0.0, lr, df);
                break;
            }
            s = a;
            a = next;
        }
        search.count(1);
        let cost = cycle_cost(&route, d);
        search.offer_if_promising(&route, cost);
    }

    let rollout = greedy_rollout(&learner.q, n);
    let mut result = search.finish(seed, completed);
    result.final_rollout_cost = Some(canonical_cost(&rollout, d));
    Ok(result)
}

fn greedy_rollout(q: &QTable, n: usize) -> Vec<usize> {
    let mut route = vec![0];
    let mut unvisited: Vec<usize> = (1..n).collect();
    while !unvisited.is_empty() {
        let next = q.greedy(*route.last().expect("non-empty"), &unvisited);
        remove_city(&mut unvisited, next);
        route.push(next);
    }
    route
}

/// Off-policy TD control with epsilon-greedy exploration. Returns the best
/// tour seen during training; stops after `episodes` or when the budget
/// runs out, whichever comes first (at least one episode always runs).
pub fn solve_qlearning(d: &DistanceMatrix, p: &RlParams, budget: &SolveBudget, seed: u64) -> Result<SolveResult, SolveError> {
    train(d, p, budget, seed, Method::QLearning, false)
}

/// On-policy TD control. The baseline explores epsilon-greedily; the
/// Boltzmann variant samples from a softmax over unvisited action values
/// with temperature annealed linearly from 1.0 to 0.1 across episodes.
pub fn solve_sarsa(
    d: &DistanceMatrix,
    p: &RlParams,
    budget: &SolveBudget,
    seed: u64,
    variant: SarsaVariant,
) -> Result<SolveResult, SolveError> {
    train(d, p, budget, seed, Method::Sarsa, variant == SarsaVariant::BoltzmannO1)
}
