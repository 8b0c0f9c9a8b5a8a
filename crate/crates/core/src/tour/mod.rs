//! Tours, their evaluation and validation, and the two shared
//! construction/improvement primitives (nearest neighbour and 2-opt).

mod nearest;
pub(crate) mod two_opt;

pub use nearest::{nearest_neighbor_from_random_start, nearest_neighbor_tour};
pub use two_opt::{two_opt, two_opt_in_place, TwoOptMode};

use crate::instance::DistanceMatrix;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TourError {
    #[error("tour has {tour} cities but the matrix has {matrix}")]
    DimensionMismatch { tour: usize, matrix: usize },
    #[error("invalid tour: {0}")]
    Invalid(TourVerdict),
}

/// Outcome of checking an index sequence against `{0, …, n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TourVerdict {
    Valid,
    WrongLength { expected: usize, found: usize },
    Duplicate { city: usize },
    OutOfRange { city: usize },
}

impl TourVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, TourVerdict::Valid)
    }
}

impl fmt::Display for TourVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TourVerdict::Valid => write!(f, "valid"),
            TourVerdict::WrongLength { expected, found } => {
                write!(f, "wrong length: expected {expected}, found {found}")
            }
            TourVerdict::Duplicate { city } => write!(f, "city {city} visited twice"),
            TourVerdict::OutOfRange { city } => write!(f, "city index {city} out of range"),
        }
    }
}

/// Checks that `order` is a permutation of `0..n`, reporting the first
/// violation found scanning left to right.
pub fn validate_tour(order: &[usize], n: usize) -> TourVerdict {
    if order.len() != n {
        return TourVerdict::WrongLength {
            expected: n,
            found: order.len(),
        };
    }
    let mut seen = vec![false; n];
    for &city in order {
        if city >= n {
            return TourVerdict::OutOfRange { city };
        }
        if std::mem::replace(&mut seen[city], true) {
            return TourVerdict::Duplicate { city };
        }
    }
    TourVerdict::Valid
}

/// A closed tour stored open: the edge from the last city back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tour(Vec<usize>);

impl Tour {
    pub fn new(order: Vec<usize>, n: usize) -> Result<Self, TourError> {
        match validate_tour(&order, n) {
            TourVerdict::Valid => Ok(Tour(order)),
            v => Err(TourError::Invalid(v)),
        }
    }

    /// Wraps a sequence the caller guarantees is a permutation.
    pub(crate) fn from_permutation(order: Vec<usize>) -> Self {
        debug_assert!(validate_tour(&order, order.len()).is_valid());
        Tour(order)
    }

    pub fn identity(n: usize) -> Self {
        Tour((0..n).collect())
    }

    pub fn order(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }
}

impl AsRef<[usize]> for Tour {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

/// Closed-tour length: consecutive legs plus the closing edge.
///
/// Edge weights are summed in ascending order, so the result is bit-for-bit
/// identical for every rotation and reversal of the same cycle.
pub fn tour_length(tour: &Tour, d: &DistanceMatrix) -> Result<f64, TourError> {
    if tour.len() != d.n() {
        return Err(TourError::DimensionMismatch {
            tour: tour.len(),
            matrix: d.n(),
        });
    }
    Ok(canonical_cost(tour.order(), d))
}

/// `tour_length` without the dimension check, for callers that already
/// hold a valid permutation.
pub fn canonical_cost(order: &[usize], d: &DistanceMatrix) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    let mut legs: Vec<f64> = edges(order).map(|(a, b)| d.get(a, b)).collect();
    legs.sort_unstable_by(f64::total_cmp);
    legs.iter().sum()
}

/// Fast left-to-right cycle cost for inner loops. May differ from
/// [`canonical_cost`] in the last bits.
#[inline]
pub fn cycle_cost(order: &[usize], d: &DistanceMatrix) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    edges(order).map(|(a, b)| d.get(a, b)).sum()
}

/// Iterates the `n` edges of the closed cycle, closing edge last.
pub fn edges(order: &[usize]) -> impl Iterator<Item = (usize, usize)> + '_ {
    let n = order.len();
    (0..n).map(move |i| (order[i], order[(i + 1) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> DistanceMatrix {
        DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)])
    }

    #[test]
    fn triangle_length() {
        let t = Tour::new(vec![0, 1, 2], 3).unwrap();
        assert_eq!(tour_length(&t, &triangle()).unwrap(), 12.0);
    }

    #[test]
    fn out_and_back() {
        let d = DistanceMatrix::new(2, vec![0.0, 5.0, 5.0, 0.0]).unwrap();
        assert_eq!(tour_length(&Tour::identity(2), &d).unwrap(), 10.0);
    }

    #[test]
    fn dimension_mismatch() {
        let err = tour_length(&Tour::identity(2), &triangle()).unwrap_err();
        assert_eq!(err, TourError::DimensionMismatch { tour: 2, matrix: 3 });
    }

    #[test]
    fn square_symmetry() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]);
        let base = [0, 1, 2, 3];
        let expected = canonical_cost(&base, &d);
        assert_eq!(expected, 4.0);
        for r in 0..4 {
            let mut rot = base.to_vec();
            rot.rotate_left(r);
            assert_eq!(canonical_cost(&rot, &d), expected);
            rot.reverse();
            assert_eq!(canonical_cost(&rot, &d), expected);
        }
    }

    #[test]
    fn verdicts() {
        assert_eq!(validate_tour(&[0, 2, 1], 3), TourVerdict::Valid);
        assert_eq!(validate_tour(&[0, 0, 1], 3), TourVerdict::Duplicate { city: 0 });
        assert_eq!(validate_tour(&[0, 1], 3), TourVerdict::WrongLength { expected: 3, found: 2 });
        assert_eq!(validate_tour(&[0, 3, 1], 3), TourVerdict::OutOfRange { city: 3 });
        assert_eq!(validate_tour(&[], 0), TourVerdict::Valid);
    }
}
