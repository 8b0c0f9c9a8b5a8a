//! Tabu search over the 2-opt neighbourhood.

use crate::instance::DistanceMatrix;
use crate::rng::seeded_rng;
use crate::solve::{check_size, Search, SolveBudget, SolveError, SolveResult};
use crate::tour::two_opt::{is_proper_move, reversal_delta};
use crate::tour::{cycle_cost, nearest_neighbor_from_random_start};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TabuParams {
    /// Iterations a move attribute stays forbidden.
    pub tenure: usize,
}

type Edge = (usize, usize);
/// Unordered pair of unordered edges.
pub type EdgePair = (Edge, Edge);

fn edge(a: usize, b: usize) -> Edge {
    (a.min(b), a.max(b))
}

pub fn edge_pair(e1: (usize, usize), e2: (usize, usize)) -> EdgePair {
    let (x, y) = (edge(e1.0, e1.1), edge(e2.0, e2.1));
    (x.min(y), x.max(y))
}

/// Tabu memory keyed by edge pairs.
///
/// A pair recorded at iteration `k` with tenure `T` is tabu during
/// iterations `k+1 ..= k+T`.
#[derive(Debug, Default, Clone)]
pub struct TabuList {
    expiry: HashMap<EdgePair, usize>,
}

impl TabuList {
    pub fn insert(&mut self, pair: EdgePair, iteration: usize, tenure: usize) {
        self.expiry.insert(pair, iteration + tenure);
    }

    pub fn is_tabu(&self, pair: &EdgePair, iteration: usize) -> bool {
        self.expiry.get(pair).is_some_and(|&until| iteration <= until)
    }

    fn expires_at(&self, pair: &EdgePair) -> usize {
        self.expiry.get(pair).copied().unwrap_or(0)
    }

    fn prune(&mut self, iteration: usize) {
        self.expiry.retain(|_, until| *until >= iteration);
    }
}

/// Tabu search under `budget`, starting from a nearest-neighbour tour with
/// a random start city.
///
/// Each iteration applies the best admissible 2-opt move, even when it
/// worsens the tour. A move that would restore an edge pair removed within
/// the last `tenure` iterations is tabu unless it beats the global best
/// (aspiration). If every move is tabu, the one whose tabu status expires
/// first is taken.
pub fn solve_tabu(d: &DistanceMatrix, p: &TabuParams, budget: &SolveBudget, seed: u64) -> Result<SolveResult, SolveError> {
    let n = check_size(d)?;
    if p.tenure == 0 {
        return Err(SolveError::InvalidParams("tabu tenure must be at least 1".into()));
    }
    budget.validate()?;
    let mut rng = seeded_rng(seed);
    let mut search = Search::new(d, budget);

    let mut order = nearest_neighbor_from_random_start(d, &mut rng).into_inner();
    let mut cost = cycle_cost(&order, d);
    search.count(1);
    search.offer(&order);
    if n < 4 {
        return Ok(search.finish(seed, true));
    }

    let mut tabu = TabuList::default();
    let mut iteration = 0usize;
    while !search.exhausted() {
        iteration += 1;
        let best_known = search.best_cost();
        let mut admissible: Option<(f64, usize, usize)> = None;
        let mut fallback: Option<(usize, f64, usize, usize)> = None;
        let mut evaluated = 0u64;
        for i in 0..n - 2 {
            for j in (i + 2)..n {
                if !is_proper_move(n, i, j) {
                    continue;
                }
                evaluated += 1;
                let delta = reversal_delta(&order, d, i, j);
                let added = edge_pair((order[i], order[j]), (order[i + 1], order[(j + 1) % n]));
                let aspirated = cost + delta < best_known - 1e-9 * (1.0 + best_known.abs());
                if !tabu.is_tabu(&added, iteration) || aspirated {
                    if admissible.is_none_or(|(bd, _, _)| delta < bd) {
                        admissible = Some((delta, i, j));
                    }
                } else {
                    let expires = tabu.expires_at(&added);
                    if fallback.is_none_or(|(fe, fd, _, _)| (expires, delta) < (fe, fd)) {
                        fallback = Some((expires, delta, i, j));
                    }
                }
            }
        }
        search.count(evaluated);
        let (delta, i, j) = match (admissible, fallback) {
            (Some(m), _) => m,
            (None, Some((_, delta, i, j))) => (delta, i, j),
            (None, None) => break,
        };
        let removed = edge_pair((order[i], order[i + 1]), (order[j], order[(j + 1) % n]));
        tabu.insert(removed, iteration, p.tenure);
        order[i + 1..=j].reverse();
        cost += delta;
        if search.offer_if_promising(&order, cost) {
            cost = search.best_cost();
        }
        if iteration.is_multiple_of(1024) {
            tabu.prune(iteration);
            cost = cycle_cost(&order, d);
        }
    }
    Ok(search.finish(seed, false))
}
