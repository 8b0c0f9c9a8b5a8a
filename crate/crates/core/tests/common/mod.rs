//! Independent reference implementations used as test oracles. Nothing here
//! calls solver code; only the distance matrix is shared.

#![allow(dead_code)]

use tsplab_core::instance::{generate_random_instance, CoordRange};
use tsplab_core::{build_distance_matrix, DistanceMatrix, Instance, Rounding};

/// Exhaustive optimum: city 0 fixed, every ordering of the rest enumerated.
pub fn brute_force_optimum(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    assert!((2..=13).contains(&n), "oracle limited to small instances");
    fn go(d: &DistanceMatrix, last: usize, used: &mut [bool], left: usize, partial: f64, best: &mut f64) {
        if left == 0 {
            let total = partial + d.get(last, 0);
            if total < *best {
                *best = total;
            }
            return;
        }
        for c in 1..used.len() {
            if !used[c] {
                used[c] = true;
                go(d, c, used, left - 1, partial + d.get(last, c), best);
                used[c] = false;
            }
        }
    }
    let mut used = vec![false; n];
    used[0] = true;
    let mut best = f64::INFINITY;
    go(d, 0, &mut used, n - 1, 0.0, &mut best);
    best
}

/// Straight left-to-right closed-tour sum.
pub fn plain_tour_cost(order: &[usize], d: &DistanceMatrix) -> f64 {
    (0..order.len()).map(|i| d.get(order[i], order[(i + 1) % order.len()])).sum()
}

/// Minimum spanning tree weight by enumerating every labelled tree through
/// its Prüfer sequence (n^(n-2) trees).
pub fn brute_force_mst_weight(d: &DistanceMatrix) -> f64 {
    let n = d.n();
    assert!((2..=8).contains(&n));
    if n == 2 {
        return d.get(0, 1);
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    let mut best = f64::INFINITY;
    loop {
        let mut degree = vec![1usize; n];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut weight = 0.0;
        for &s in &seq {
            let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
            weight += d.get(leaf, s);
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        weight += d.get(rest[0], rest[1]);
        if weight < best {
            best = weight;
        }
        let mut i = 0;
        while i < len {
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
        if i == len {
            return best;
        }
    }
}

pub fn random_instance(n: usize, seed: u64) -> (Instance, DistanceMatrix) {
    let inst = generate_random_instance(n, seed, CoordRange { lo: 0.0, hi: 100.0 });
    let d = build_distance_matrix(&inst, Rounding::None).unwrap();
    (inst, d)
}

pub fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&c| c < n && !std::mem::replace(&mut seen[c], true))
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
