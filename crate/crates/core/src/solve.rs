//! Budgets, results, and the best-so-far bookkeeping shared by every
//! iterative solver.

use crate::instance::DistanceMatrix;
use crate::tour::{canonical_cost, Tour};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("instance needs at least 2 cities, got {0}")]
    TooFewCities(usize),
    #[error("instance has no coordinates")]
    NoCoordinates,
}

/// Resource limits for one run. Whichever bound triggers first ends the
/// run; both are checked between solver iterations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveBudget {
    pub time_limit_s: f64,
    pub max_evaluations: Option<u64>,
}

impl SolveBudget {
    pub fn seconds(time_limit_s: f64) -> Self {
        SolveBudget {
            time_limit_s,
            max_evaluations: None,
        }
    }

    pub fn with_evaluations(mut self, max: u64) -> Self {
        self.max_evaluations = Some(max);
        self
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.time_limit_s > 0.0) || !self.time_limit_s.is_finite() {
            return Err(SolveError::InvalidParams(format!(
                "time limit must be positive, got {}",
                self.time_limit_s
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The algorithm reached its own end (episodes exhausted, search complete).
    Completed,
    TimeLimit,
    EvaluationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub elapsed_s: f64,
    pub evaluations: u64,
    pub cost: f64,
}

/// Outcome of one solver run.
///
/// `best_cost` is always `tour_length(best)`; the trajectory records every
/// strict improvement, starting with the solver's initial solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub best: Tour,
    pub best_cost: f64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub evaluations: u64,
    pub seed: u64,
    pub elapsed_s: f64,
    pub stop_reason: StopReason,
    /// Cost of a greedy rollout of the learned policy (RL solvers only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub final_rollout_cost: Option<f64>,
}

impl SolveResult {
    /// Same result with wall-clock fields zeroed, for determinism checks.
    pub fn without_timing(&self) -> SolveResult {
        let mut r = self.clone();
        r.elapsed_s = 0.0;
        for p in &mut r.trajectory {
            p.elapsed_s = 0.0;
        }
        r
    }
}

pub(crate) fn check_size(d: &DistanceMatrix) -> Result<usize, SolveError> {
    match d.n() {
        n if n < 2 => Err(SolveError::TooFewCities(n)),
        n => Ok(n),
    }
}

/// Best-so-far tracker with budget accounting.
pub(crate) struct Search<'a> {
    d: &'a DistanceMatrix,
    started: Instant,
    time_limit: Duration,
    max_evaluations: Option<u64>,
    evaluations: u64,
    best: Vec<usize>,
    best_cost: f64,
    trajectory: Vec<TrajectoryPoint>,
    stop_reason: Option<StopReason>,
}

impl<'a> Search<'a> {
    pub fn new(d: &'a DistanceMatrix, budget: &SolveBudget) -> Self {
        Search {
            d,
            started: Instant::now(),
            time_limit: Duration::from_secs_f64(budget.time_limit_s.min(1e9)),
            max_evaluations: budget.max_evaluations,
            evaluations: 0,
            best: Vec::new(),
            best_cost: f64::INFINITY,
            trajectory: Vec::new(),
            stop_reason: None,
        }
    }

    #[inline]
    pub fn count(&mut self, evaluations: u64) {
        self.evaluations += evaluations;
    }

    #[cfg(test)]
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    /// True once either budget bound is reached. Sticky.
    pub fn exhausted(&mut self) -> bool {
        if self.stop_reason.is_some() {
            return true;
        }
        if self.max_evaluations.is_some_and(|m| self.evaluations >= m) {
            self.stop_reason = Some(StopReason::EvaluationLimit);
        } else if self.started.elapsed() >= self.time_limit {
            self.stop_reason = Some(StopReason::TimeLimit);
        }
        self.stop_reason.is_some()
    }

    /// Remaining evaluation allowance, if bounded.
    pub fn remaining_evaluations(&self) -> Option<u64> {
        self.max_evaluations.map(|m| m.saturating_sub(self.evaluations))
    }

    pub fn best_cost(&self) -> f64 {
        self.best_cost
    }

    pub fn best(&self) -> &[usize] {
        &self.best
    }

    /// Records `order` if its exact cost strictly beats the incumbent.
    pub fn offer(&mut self, order: &[usize]) -> bool {
        let cost = canonical_cost(order, self.d);
        if cost < self.best_cost {
            self.best.clear();
            self.best.extend_from_slice(order);
            self.best_cost = cost;
            self.trajectory.push(TrajectoryPoint {
                elapsed_s: self.started.elapsed().as_secs_f64(),
                evaluations: self.evaluations,
                cost,
            });
            true
        } else {
            false
        }
    }

    /// `offer` behind a cheap filter: the exact cost is only computed when
    /// the caller's fast cost is within rounding distance of the incumbent.
    pub fn offer_if_promising(&mut self, order: &[usize], fast_cost: f64) -> bool {
        if fast_cost <= self.best_cost + 1e-9 * (1.0 + self.best_cost.abs()) {
            self.offer(order)
        } else {
            false
        }
    }

    pub fn finish(self, seed: u64, completed: bool) -> SolveResult {
        assert!(!self.best.is_empty(), "solver finished without a complete tour");
        let stop_reason = match (completed, self.stop_reason) {
            (true, _) | (false, None) => StopReason::Completed,
            (false, Some(r)) => r,
        };
        SolveResult {
            best: Tour::from_permutation(self.best),
            best_cost: self.best_cost,
            trajectory: self.trajectory,
            evaluations: self.evaluations,
            seed,
            elapsed_s: self.started.elapsed().as_secs_f64(),
            stop_reason,
            final_rollout_cost: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn offer_keeps_strict_improvements_only() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let mut s = Search::new(&d, &SolveBudget::seconds(10.0));
        assert!(s.offer(&[0, 2, 1, 3]));
        assert!(!s.offer(&[0, 2, 1, 3]));
        assert!(s.offer(&[0, 1, 2, 3]));
        assert!(!s.offer(&[3, 2, 1, 0]));
        let r = s.finish(5, true);
        assert_eq!(r.best_cost, 4.0);
        assert_eq!(r.trajectory.len(), 2);
        assert_eq!(r.seed, 5);
    }

    #[test]
    fn evaluation_limit() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0)]);
        let mut s = Search::new(&d, &SolveBudget::seconds(10.0).with_evaluations(3));
        s.count(2);
        assert!(!s.exhausted());
        s.count(1);
        assert!(s.exhausted());
        s.offer(&[0, 1]);
        assert_eq!(s.finish(0, false).stop_reason, StopReason::EvaluationLimit);
    }

    #[test]
    fn budget_validation() {
        assert!(SolveBudget::seconds(0.0).validate().is_err());
        assert!(SolveBudget::seconds(f64::NAN).validate().is_err());
        assert!(SolveBudget::seconds(0.5).validate().is_ok());
    }
}
