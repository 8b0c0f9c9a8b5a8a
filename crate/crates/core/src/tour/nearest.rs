use super::Tour;
use crate::instance::DistanceMatrix;
use rand::Rng;

/// Greedy nearest-neighbour construction from `start`; ties go to the
/// lowest city index.
///
/// # Panics
///
/// If `start >= d.n()`.
pub fn nearest_neighbor_tour(d: &DistanceMatrix, start: usize) -> Tour {
    let n = d.n();
    assert!(start < n, "start city {start} out of range for {n} cities");
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut current = start;
    visited[current] = true;
    order.push(current);
    for _ in 1..n {
        let row = d.row(current);
        let mut next = usize::MAX;
        let mut best = f64::INFINITY;
        for (city, &dist) in row.iter().enumerate() {
            if !visited[city] && (next == usize::MAX || dist < best) {
                next = city;
                best = dist;
            }
        }
        visited[next] = true;
        order.push(next);
        current = next;
    }
    Tour::from_permutation(order)
}

/// Nearest neighbour from a uniformly drawn start city.
pub fn nearest_neighbor_from_random_start<R: Rng + ?Sized>(d: &DistanceMatrix, rng: &mut R) -> Tour {
    let start = rng.gen_range(0..d.n());
    nearest_neighbor_tour(d, start)
}
