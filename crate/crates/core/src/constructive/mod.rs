//! Deterministic construction heuristics: Christofides and convex-hull
//! insertion.

mod christofides;
mod hull;
mod mst;

pub use christofides::{christofides, ChristofidesTour};
pub use hull::{convex_hull, convex_hull_tour, convex_hull_tour_with, HullError, InsertionCriterion};
pub use mst::{minimum_spanning_tree, EdgeList, WeightedEdge};
