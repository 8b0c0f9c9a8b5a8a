//! Permutation crossovers: order crossover (OX), edge recombination (ER)
//! and best-cost route crossover (BCR).

use crate::instance::DistanceMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Crossover {
    Ox,
    Er,
    Bcr,
}

impl Crossover {
    pub const ALL: [Crossover; 3] = [Crossover::Ox, Crossover::Er, Crossover::Bcr];

    pub fn apply<R: Rng + ?Sized>(self, a: &[usize], b: &[usize], d: &DistanceMatrix, rng: &mut R) -> Vec<usize> {
        match self {
            Crossover::Ox => ox_crossover(a, b, rng),
            Crossover::Er => er_crossover(a, b, rng),
            Crossover::Bcr => bcr_crossover(a, b, d, rng),
        }
    }
}

fn cut_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (usize, usize) {
    let x = rng.gen_range(0..n);
    let y = rng.gen_range(0..n);
    (x.min(y), x.max(y))
}

/// Copies a random slice of `a` into place and fills the remaining
/// positions, starting after the slice, in the cyclic order of `b`.
pub fn ox_crossover<R: Rng + ?Sized>(a: &[usize], b: &[usize], rng: &mut R) -> Vec<usize> {
    let n = a.len();
    if n < 2 {
        return a.to_vec();
    }
    let (lo, hi) = cut_points(n, rng);
    let mut child = vec![usize::MAX; n];
    let mut used = vec![false; n];
    for i in lo..=hi {
        child[i] = a[i];
        used[a[i]] = true;
    }
    let mut pos = (hi + 1) % n;
    for k in 0..n {
        let city = b[(hi + 1 + k) % n];
        if !used[city] {
            child[pos] = city;
            used[city] = true;
            pos = (pos + 1) % n;
        }
    }
    child
}

/// Edge recombination: walk the union of both parents' adjacency lists,
/// always moving to the neighbour with the fewest remaining neighbours
/// (ties by lowest index), jumping to a random unvisited city when stuck.
pub fn er_crossover<R: Rng + ?Sized>(a: &[usize], b: &[usize], rng: &mut R) -> Vec<usize> {
    let n = a.len();
    if n < 3 {
        return a.to_vec();
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::with_capacity(4); n];
    for parent in [a, b] {
        for i in 0..n {
            let city = parent[i];
            for nb in [parent[(i + n - 1) % n], parent[(i + 1) % n]] {
                if !adjacency[city].contains(&nb) {
                    adjacency[city].push(nb);
                }
            }
        }
    }
    let mut visited = vec![false; n];
    let mut child = Vec::with_capacity(n);
    let mut current = a[0];
    loop {
        child.push(current);
        visited[current] = true;
        if child.len() == n {
            break;
        }
        for list in adjacency.iter_mut() {
            list.retain(|&c| c != current);
        }
        let next = adjacency[current]
            .iter()
            .copied()
            .min_by_key(|&c| (adjacency[c].len(), c));
        current = match next {
            Some(c) => c,
            None => {
                let remaining: Vec<usize> = (0..n).filter(|&c| !visited[c]).collect();
                remaining[rng.gen_range(0..remaining.len())]
            }
        };
    }
    child
}

/// Removes a random segment of `b` from `a`, then reinserts its cities (in
/// `b`'s order) each at the cheapest position of the partial cycle.
pub fn bcr_crossover<R: Rng + ?Sized>(a: &[usize], b: &[usize], d: &DistanceMatrix, rng: &mut R) -> Vec<usize> {
    let n = a.len();
    if n < 3 {
        return a.to_vec();
    }
    let len = rng.gen_range(1..=(n / 2).max(1));
    let start = rng.gen_range(0..n);
    let segment: Vec<usize> = (0..len).map(|k| b[(start + k) % n]).collect();
    let mut in_segment = vec![false; n];
    for &c in &segment {
        in_segment[c] = true;
    }
    let mut child: Vec<usize> = a.iter().copied().filter(|&c| !in_segment[c]).collect();
    for &city in &segment {
        insert_cheapest(&mut child, city, d);
    }
    child
}

/// Inserts `city` into the cycle `order` where it adds the least length;
/// ties go to the earliest position.
pub(crate) fn insert_cheapest(order: &mut Vec<usize>, city: usize, d: &DistanceMatrix) {
    let m = order.len();
    if m < 2 {
        order.push(city);
        return;
    }
    let mut best_pos = 0;
    let mut best = f64::INFINITY;
    for k in 0..m {
        let (u, v) = (order[k], order[(k + 1) % m]);
        let delta = d.get(u, city) + d.get(city, v) - d.get(u, v);
        if delta < best {
            best = delta;
            best_pos = k + 1;
        }
    }
    order.insert(best_pos, city);
}
