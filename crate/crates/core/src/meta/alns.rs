//! Adaptive large neighbourhood search with random/worst removal and
//! greedy cheapest-insertion repair.

use super::roulette;
use crate::instance::DistanceMatrix;
use crate::rng::seeded_rng;
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::{cycle_cost, nearest_neighbor_from_random_start};
use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Operator weights never decay below this value.
const MIN_WEIGHT: f64 = 0.1;
/// Randomisation exponent of worst removal.
const WORST_REMOVAL_POWER: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlnsParams {
    /// Fraction of cities removed per iteration.
    pub removal_fraction: f64,
    /// Reaction factor of the weight update.
    pub reaction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DestroyOperator {
    Random,
    Worst,
}

impl DestroyOperator {
    pub const ALL: [DestroyOperator; 2] = [DestroyOperator::Random, DestroyOperator::Worst];
}

/// `w ← (1 − reaction)·w + reaction·score` for the chosen operator and
/// the same with score 0 for the others, floored at a small minimum.
pub fn adaptive_weight_update(weights: &mut [f64], chosen: usize, score: f64, reaction: f64) {
    for (i, w) in weights.iter_mut().enumerate() {
        let s = if i == chosen { score } else { 0.0 };
        *w = ((1.0 - reaction) * *w + reaction * s).max(MIN_WEIGHT);
    }
}

fn removal_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).clamp(1, n - 1)
}

fn destroy<R: Rng + ?Sized>(order: &[usize], d: &DistanceMatrix, q: usize, op: DestroyOperator, rng: &mut R) -> Vec<usize> {
    let n = order.len();
    match op {
        DestroyOperator::Random => sample(rng, n, q).into_iter().map(|i| order[i]).collect(),
        DestroyOperator::Worst => {
            let mut gains: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let (prev, city, next) = (order[(i + n - 1) % n], order[i], order[(i + 1) % n]);
                    (d.get(prev, city) + d.get(city, next) - d.get(prev, next), city)
                })
                .collect();
            gains.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut removed = Vec::with_capacity(q);
            for _ in 0..q {
                let y: f64 = rng.gen();
                let idx = ((y.powi(WORST_REMOVAL_POWER) * gains.len() as f64) as usize).min(gains.len() - 1);
                removed.push(gains.remove(idx).1);
            }
            removed
        }
    }
}

/// Greedy repair: repeatedly inserts the removed city with the cheapest
/// insertion anywhere in the partial cycle (ties to the lowest city
/// index), until every city is back.
/// `partial` must hold at least one city.
pub fn cheapest_insertion_repair(partial: &[usize], removed: &[usize], d: &DistanceMatrix) -> Vec<usize> {
    let n = d.n();
    assert!(!partial.is_empty(), "repair needs a non-empty partial tour");
    const NONE: usize = usize::MAX;
    let mut next = vec![NONE; n];
    for (k, &c) in partial.iter().enumerate() {
        next[c] = partial[(k + 1) % partial.len()];
    }
    let anchor = partial[0];

    let insertion_cost = |next: &[usize], a: usize, c: usize| {
        let b = next[a];
        d.get(a, c) + d.get(c, b) - d.get(a, b)
    };
    let scan = |next: &[usize], c: usize| {
        let (mut best, mut at) = (f64::INFINITY, anchor);
        let mut a = anchor;
        loop {
            let cost = insertion_cost(next, a, c);
            if cost < best {
                best = cost;
                at = a;
            }
            a = next[a];
            if a == anchor {
                break;
            }
        }
        (best, at)
    };

    let mut pending: Vec<usize> = removed.to_vec();
    pending.sort_unstable();
    let mut cache: Vec<(f64, usize)> = pending.iter().map(|&c| scan(&next, c)).collect();

    while !pending.is_empty() {
        let mut pick = 0;
        for k in 1..pending.len() {
            if cache[k].0 < cache[pick].0 {
                pick = k;
            }
        }
        let city = pending.remove(pick);
        let (_, a) = cache.remove(pick);
        let b = next[a];
        next[a] = city;
        next[city] = b;
        for (k, &c) in pending.iter().enumerate() {
            if cache[k].1 == a {
                cache[k] = scan(&next, c);
            } else {
                for from in [a, city] {
                    let cost = insertion_cost(&next, from, c);
                    if cost < cache[k].0 {
                        cache[k] = (cost, from);
                    }
                }
            }
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut c = anchor;
    loop {
        order.push(c);
        c = next[c];
        if c == anchor {
            break;
        }
    }
    order
}

/// ALNS under `budget`, starting from a nearest-neighbour tour with a
/// random start city. Candidates no worse than the current solution are
/// accepted; operator scores are 3 (new global best), 1 (accepted), 0.
pub fn solve_alns(d: &DistanceMatrix, p: &AlnsParams, budget: &SolveBudget, seed: u64) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    super::check_unit_open("removal fraction", p.removal_fraction)?;
    super::check_unit_open("reaction factor", p.reaction)?;
    budget.validate()?;
    let mut rng = seeded_rng(seed);
    let mut search = Search::new(d, budget);

    let mut current = nearest_neighbor_from_random_start(d, &mut rng).into_inner();
    let mut current_cost = cycle_cost(&current, d);
    search.count(1);
    search.offer(&current);
    if n < 3 {
        return Ok(search.finish(seed, true));
    }

    let q = removal_count(n, p.removal_fraction);
    let mut weights = [1.0; 2];
    let mut in_removed = vec![false; n];
    while !search.exhausted() {
        let op = roulette(&weights, &mut rng);
        let removed = destroy(&current, d, q, DestroyOperator::ALL[op], &mut rng);
        for &c in &removed {
            in_removed[c] = true;
        }
        let partial: Vec<usize> = current.iter().copied().filter(|&c| !in_removed[c]).collect();
        for &c in &removed {
            in_removed[c] = false;
        }
        let candidate = cheapest_insertion_repair(&partial, &removed, d);
        let cost = cycle_cost(&candidate, d);
        search.count(1);

        let score = if search.offer_if_promising(&candidate, cost) {
            3.0
        } else if cost <= current_cost {
            1.0
        } else {
            0.0
        };
        if score > 0.0 {
            current = candidate;
            current_cost = cost;
        }
        adaptive_weight_update(&mut weights, op, score, p.reaction);
    }
    Ok(search.finish(seed, false))
}
