use super::mst::minimum_spanning_tree;
use crate::instance::DistanceMatrix;
use crate::tour::Tour;

/// Tolerance used when flagging triangle-inequality violations.
const METRIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ChristofidesTour {
    pub tour: Tour,
    /// False when the matrix violates the triangle inequality, in which
    /// case the usual approximation bound does not apply.
    pub metric: bool,
}

/// MST, greedy matching on odd-degree vertices, Euler circuit, shortcut.
///
/// The matching takes the shortest available edge first (ties by vertex
/// indices), not a minimum-weight perfect matching.
pub fn christofides(d: &DistanceMatrix) -> ChristofidesTour {
    let n = d.n();
    let metric = d.is_metric(METRIC_TOLERANCE);
    if n < 3 {
        return ChristofidesTour {
            tour: Tour::identity(n),
            metric,
        };
    }
    let mst = minimum_spanning_tree(d);
    let degree = mst.degrees(n);
    let odd: Vec<usize> = (0..n).filter(|&v| degree[v] % 2 == 1).collect();

    let mut multigraph: Vec<(usize, usize)> = mst.edges.iter().map(|e| (e.u, e.v)).collect();
    multigraph.extend(greedy_matching(d, &odd));

    let circuit = euler_circuit(n, &multigraph);
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for v in circuit {
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    ChristofidesTour {
        tour: Tour::from_permutation(order),
        metric,
    }
}

fn greedy_matching(d: &DistanceMatrix, odd: &[usize]) -> Vec<(usize, usize)> {
    let mut candidates = Vec::with_capacity(odd.len() * odd.len() / 2);
    for (a, &u) in odd.iter().enumerate() {
        for &v in &odd[a + 1..] {
            candidates.push((d.get(u, v), u, v));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut matched = vec![false; d.n()];
    let mut pairs = Vec::with_capacity(odd.len() / 2);
    for (_, u, v) in candidates {
        if !matched[u] && !matched[v] {
            matched[u] = true;
            matched[v] = true;
            pairs.push((u, v));
        }
    }
    pairs
}

/// Iterative Hierholzer from vertex 0; at each vertex the unused edge with
/// the lowest neighbour index is followed first.
fn euler_circuit(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adjacency[u].push((v, id));
        adjacency[v].push((u, id));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }
    let mut cursor = vec![0usize; n];
    let mut used = vec![false; edges.len()];
    let mut stack = vec![0usize];
    let mut circuit = Vec::with_capacity(edges.len() + 1);
    while let Some(&v) = stack.last() {
        let list = &adjacency[v];
        while cursor[v] < list.len() && used[list[cursor[v]].1] {
            cursor[v] += 1;
        }
        if cursor[v] == list.len() {
            circuit.push(v);
            stack.pop();
        } else {
            let (w, id) = list[cursor[v]];
            used[id] = true;
            stack.push(w);
        }
    }
    circuit.reverse();
    circuit
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tour::{canonical_cost, validate_tour, TourVerdict};

    #[test]
    fn triangle_and_square() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        assert_eq!(canonical_cost(christofides(&d).tour.order(), &d), 12.0);
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let c = christofides(&d);
        assert!(c.metric);
        assert_eq!(canonical_cost(c.tour.order(), &d), 4.0);
    }

    #[test]
    fn euler_circuit_uses_every_edge() {
        let edges = [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)];
        let c = euler_circuit(5, &edges);
        assert_eq!(c.len(), edges.len() + 1);
        assert_eq!(c.first(), c.last());
    }

    #[test]
    fn flags_non_metric_input() {
        let d = DistanceMatrix::new(4, vec![
            0.0, 1.0, 10.0, 1.0, //
            1.0, 0.0, 1.0, 1.0, //
            10.0, 1.0, 0.0, 1.0, //
            1.0, 1.0, 1.0, 0.0,
        ])
        .unwrap();
        let c = christofides(&d);
        assert!(!c.metric);
        assert_eq!(validate_tour(c.tour.order(), 4), TourVerdict::Valid);
    }
}
