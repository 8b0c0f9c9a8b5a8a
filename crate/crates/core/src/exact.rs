//! Depth-first branch and bound with the two-smallest-edges lower bound.
//!
//! A partial path from city 0 to `last` is bounded by its weight plus half
//! of: `min1` at both path ends and `min1 + min2` at every unvisited city.
//! The common textbook update that charges `min2` at the path ends is not
//! admissible (the next edge at an end can be that city's cheapest one), so
//! it is not used.

use crate::instance::DistanceMatrix;
use crate::solve::SolveError;
use crate::tour::{canonical_cost, cycle_cost, nearest_neighbor_tour, Tour};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BbVariant {
    /// No initial incumbent, children in index order.
    Baseline,
    /// Nearest-neighbour incumbent, children by ascending edge weight.
    EnhancedR1,
}

/// Optional limits; the default is an uncapped exact search.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct BbCap {
    pub max_nodes: Option<u64>,
    pub time_limit_s: Option<f64>,
}

/// Smallest and second-smallest incident edge weight per city.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCache {
    pub min1: Vec<f64>,
    pub min2: Vec<f64>,
}

impl BoundCache {
    pub fn new(d: &DistanceMatrix) -> Self {
        let n = d.n();
        let mut min1 = vec![f64::INFINITY; n];
        let mut min2 = vec![f64::INFINITY; n];
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                let w = d.get(i, j);
                if w < min1[i] {
                    min2[i] = min1[i];
                    min1[i] = w;
                } else if w < min2[i] {
                    min2[i] = w;
                }
            }
        }
        BoundCache { min1, min2 }
    }

    pub fn root_bound(&self) -> f64 {
        self.min1.iter().zip(&self.min2).map(|(a, b)| a + b).sum::<f64>() / 2.0
    }
}

/// Lower bound on any tour: half the sum over cities of their two cheapest
/// incident edges.
pub fn root_lower_bound(d: &DistanceMatrix) -> f64 {
    BoundCache::new(d).root_bound()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub best: Tour,
    pub best_cost: f64,
    pub nodes_expanded: u64,
    pub elapsed_s: f64,
    pub proven_optimal: bool,
    /// Cost the search started with as its incumbent, if any.
    pub initial_incumbent: Option<f64>,
}

struct Search<'a> {
    d: &'a DistanceMatrix,
    cache: BoundCache,
    variant: BbVariant,
    cap: BbCap,
    started: Instant,
    nodes: u64,
    capped: bool,
    incumbent: f64,
    best: Option<Vec<usize>>,
    path: Vec<usize>,
    visited: Vec<bool>,
}

impl Search<'_> {
    fn over_cap(&mut self) -> bool {
        if self.capped {
            return true;
        }
        if self.cap.max_nodes.is_some_and(|m| self.nodes >= m) {
            self.capped = true;
        } else if let Some(t) = self.cap.time_limit_s {
            if self.nodes.is_multiple_of(1024) && self.started.elapsed().as_secs_f64() >= t {
                self.capped = true;
            }
        }
        self.capped
    }

    fn children(&self, from: usize) -> Vec<usize> {
        let mut next: Vec<usize> = (0..self.d.n()).filter(|&j| !self.visited[j]).collect();
        if self.variant == BbVariant::EnhancedR1 {
            next.sort_by(|&a, &b| self.d.get(from, a).total_cmp(&self.d.get(from, b)));
        }
        next
    }

    /// `open` is the two-min mass `min1 + min2` summed over unvisited cities.
    fn descend(&mut self, open: f64, weight: f64) {
        let n = self.d.n();
        let level = self.path.len();
        let last = self.path[level - 1];
        if level == n {
            let total = weight + self.d.get(last, self.path[0]);
            if total < self.incumbent {
                self.incumbent = total;
                self.best = Some(self.path.clone());
            }
            return;
        }
        for j in self.children(last) {
            if self.over_cap() {
                return;
            }
            self.nodes += 1;
            let w = weight + self.d.get(last, j);
            let rest = open - (self.cache.min1[j] + self.cache.min2[j]);
            // Each unvisited city still needs two edges, each path end one.
            let bound = w + (self.cache.min1[0] + self.cache.min1[j] + rest) / 2.0;
            if bound >= self.incumbent {
                continue;
            }
            self.visited[j] = true;
            self.path.push(j);
            self.descend(rest, w);
            self.path.pop();
            self.visited[j] = false;
        }
    }
}

/// Exact search rooted at city 0. When the cap fires the best tour found so
/// far (or the nearest-neighbour tour, if none) is returned with
/// `proven_optimal == false`.
pub fn branch_and_bound(d: &DistanceMatrix, variant: BbVariant, cap: BbCap) -> Result<OptResult, SolveError> {
    let n = d.n();
    if n < 2 {
        return Err(SolveError::TooFewCities(n));
    }
    let started = Instant::now();
    if n == 2 {
        let best = Tour::identity(2);
        return Ok(OptResult {
            best_cost: canonical_cost(best.order(), d),
            best,
            nodes_expanded: 0,
            elapsed_s: started.elapsed().as_secs_f64(),
            proven_optimal: true,
            initial_incumbent: None,
        });
    }

    let nn = nearest_neighbor_tour(d, 0);
    let (incumbent, best) = match variant {
        BbVariant::Baseline => (f64::INFINITY, None),
        BbVariant::EnhancedR1 => (cycle_cost(nn.order(), d), Some(nn.order().to_vec())),
    };
    let mut visited = vec![false; n];
    visited[0] = true;
    let mut search = Search {
        d,
        cache: BoundCache::new(d),
        variant,
        cap,
        started,
        nodes: 0,
        capped: false,
        incumbent,
        best,
        path: vec![0],
        visited,
    };
    let open = search.cache.min1[1..]
        .iter()
        .zip(&search.cache.min2[1..])
        .map(|(a, b)| a + b)
        .sum();
    search.descend(open, 0.0);

    let order = search.best.take().unwrap_or_else(|| nn.order().to_vec());
    let best = Tour::from_permutation(order);
    Ok(OptResult {
        best_cost: canonical_cost(best.order(), d),
        best,
        nodes_expanded: search.nodes,
        elapsed_s: search.started.elapsed().as_secs_f64(),
        proven_optimal: !search.capped,
        initial_incumbent: incumbent.is_finite().then_some(incumbent),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        for v in [BbVariant::Baseline, BbVariant::EnhancedR1] {
            let r = branch_and_bound(&d, v, BbCap::default()).unwrap();
            assert_eq!(r.best_cost, 12.0);
            assert!(r.proven_optimal);
        }
    }

    #[test]
    fn bound_cache_ordering() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0), (5.0, 5.0)]);
        let c = BoundCache::new(&d);
        assert!(c.min1.iter().zip(&c.min2).all(|(a, b)| a <= b));
        assert_eq!(c.min1[0], 3.0);
        assert_eq!(c.min2[0], 4.0);
    }

    #[test]
    fn enhanced_starts_from_nearest_neighbour() {
        let pts = [(0.0, 0.0), (1.0, 0.0), (3.0, 0.0), (2.0, 2.0), (0.0, 3.0)];
        let d = DistanceMatrix::euclidean(&pts);
        let r = branch_and_bound(&d, BbVariant::EnhancedR1, BbCap::default()).unwrap();
        let nn = nearest_neighbor_tour(&d, 0);
        assert_eq!(r.initial_incumbent, Some(cycle_cost(nn.order(), &d)));
        let base = branch_and_bound(&d, BbVariant::Baseline, BbCap::default()).unwrap();
        assert_eq!(base.initial_incumbent, None);
        assert_eq!(base.best_cost, r.best_cost);
    }

    #[test]
    fn node_cap_returns_unproven_tour() {
        let pts: Vec<(f64, f64)> = (0..9).map(|i| ((i * 7 % 11) as f64, (i * 5 % 13) as f64)).collect();
        let d = DistanceMatrix::euclidean(&pts);
        let cap = BbCap {
            max_nodes: Some(3),
            time_limit_s: None,
        };
        let r = branch_and_bound(&d, BbVariant::Baseline, cap).unwrap();
        assert!(!r.proven_optimal);
        assert_eq!(r.nodes_expanded, 3);
        assert_eq!(r.best.len(), 9);
    }

    #[test]
    fn two_cities() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0)]);
        assert_eq!(branch_and_bound(&d, BbVariant::Baseline, BbCap::default()).unwrap().best_cost, 2.0);
    }
}
