use crate::instance::DistanceMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EdgeList {
    pub edges: Vec<WeightedEdge>,
}

impl EdgeList {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn degrees(&self, n: usize) -> Vec<usize> {
        let mut deg = vec![0; n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }
}

/// Prim's algorithm grown from city 0. Edges are listed in the order they
/// join the tree; equal keys resolve to the lowest city index.
pub fn minimum_spanning_tree(d: &DistanceMatrix) -> EdgeList {
    let n = d.n();
    let mut in_tree = vec![false; n];
    let mut key = vec![f64::INFINITY; n];
    let mut parent = vec![0usize; n];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    if n == 0 {
        return EdgeList { edges };
    }
    in_tree[0] = true;
    for (v, k) in key.iter_mut().enumerate().skip(1) {
        *k = d.get(0, v);
    }
    for _ in 1..n {
        let mut next = usize::MAX;
        for v in 0..n {
            if !in_tree[v] && (next == usize::MAX || key[v] < key[next]) {
                next = v;
            }
        }
        in_tree[next] = true;
        edges.push(WeightedEdge {
            u: parent[next],
            v: next,
            w: d.get(parent[next], next),
        });
        for v in 0..n {
            if !in_tree[v] && d.get(next, v) < key[v] {
                key[v] = d.get(next, v);
                parent[v] = next;
            }
        }
    }
    EdgeList { edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_drops_heaviest_edge() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        let mst = minimum_spanning_tree(&d);
        assert_eq!(mst.total_weight(), 7.0);
        let pairs: Vec<_> = mst.edges.iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn collinear_chain() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (3.0, 0.0)]);
        let mst = minimum_spanning_tree(&d);
        let pairs: Vec<_> = mst.edges.iter().map(|e| (e.u, e.v)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
        assert_eq!(mst.total_weight(), 3.0);
    }
}
