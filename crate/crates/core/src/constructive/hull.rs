use crate::instance::{DistanceMatrix, Instance};
use crate::tour::Tour;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("convex hull needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("all points coincide")]
    AllCoincident,
    #[error("points are collinear; extremes are {0} and {1}")]
    DegenerateInput(usize, usize),
    #[error("instance has no coordinates")]
    NoCoordinates,
    #[error("instance has {coords} coordinates but the matrix has {matrix} cities")]
    SizeMismatch { coords: usize, matrix: usize },
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain. Returns hull indices counter-clockwise from the
/// lowest (x, y) point, excluding points that lie on a hull edge.
pub fn convex_hull(points: &[(f64, f64)]) -> Result<Vec<usize>, HullError> {
    let n = points.len();
    if n < 3 {
        return Err(HullError::TooFewPoints(n));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let (pa, pb) = (points[a], points[b]);
        pa.0.total_cmp(&pb.0).then(pa.1.total_cmp(&pb.1)).then(a.cmp(&b))
    });
    let (first, last) = (idx[0], idx[n - 1]);
    if points[first] == points[last] {
        return Err(HullError::AllCoincident);
    }

    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    for &i in &idx {
        while hull.len() >= 2 && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(points[hull[hull.len() - 2]], points[hull[hull.len() - 1]], points[i]) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(HullError::DegenerateInput(first, last));
    }
    Ok(hull)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InsertionCriterion {
    /// `(d[i][k] + d[k][j]) / d[i][j]`
    #[default]
    Ratio,
    /// `d[i][k] + d[k][j] - d[i][j]`
    Detour,
}

/// Hull tour followed by cheapest insertion using the ratio criterion.
pub fn convex_hull_tour(inst: &Instance, d: &DistanceMatrix) -> Result<Tour, HullError> {
    convex_hull_tour_with(inst, d, InsertionCriterion::Ratio)
}

/// Starts from the hull cycle and repeatedly inserts the (city, edge) pair
/// with the globally smallest criterion value. Ties go to the lowest city,
/// then to the edge whose tail has the lowest index. Collinear inputs start
/// from the two extreme points instead of a hull.
///
/// GEO instances are treated as planar in (latitude, longitude) for the
/// hull step only; insertion costs come from `d`.
pub fn convex_hull_tour_with(
    inst: &Instance,
    d: &DistanceMatrix,
    criterion: InsertionCriterion,
) -> Result<Tour, HullError> {
    let points = inst.coords().ok_or(HullError::NoCoordinates)?;
    let n = d.n();
    if points.len() != n {
        return Err(HullError::SizeMismatch {
            coords: points.len(),
            matrix: n,
        });
    }
    if n < 3 {
        return Ok(Tour::identity(n));
    }
    let hull = match convex_hull(points) {
        Ok(h) => h,
        Err(HullError::DegenerateInput(a, b)) => vec![a, b],
        Err(HullError::AllCoincident) => return Ok(Tour::identity(n)),
        Err(e) => return Err(e),
    };
    Ok(Tour::from_permutation(insert_all(d, &hull, criterion)))
}

fn score(d: &DistanceMatrix, i: usize, k: usize, j: usize, criterion: InsertionCriterion) -> f64 {
    let added = d.get(i, k) + d.get(k, j);
    let removed = d.get(i, j);
    match criterion {
        InsertionCriterion::Detour => added - removed,
        InsertionCriterion::Ratio if removed > 0.0 => added / removed,
        InsertionCriterion::Ratio if added == 0.0 => 1.0,
        InsertionCriterion::Ratio => f64::INFINITY,
    }
}

const NONE: usize = usize::MAX;

fn insert_all(d: &DistanceMatrix, start: &[usize], criterion: InsertionCriterion) -> Vec<usize> {
    let n = d.n();
    let mut next = vec![NONE; n];
    for (pos, &c) in start.iter().enumerate() {
        next[c] = start[(pos + 1) % start.len()];
    }
    let mut in_tour: Vec<usize> = start.to_vec();
    let mut pending: Vec<usize> = (0..n).filter(|&c| next[c] == NONE).collect();

    // best[k] = (score, tail i) over the current tour edges (i, next[i]).
    let scan = |k: usize, tour: &[usize], next: &[usize]| -> (f64, usize) {
        let mut best = (f64::INFINITY, NONE);
        for &i in tour {
            let s = score(d, i, k, next[i], criterion);
            if best.1 == NONE || s < best.0 || (s == best.0 && i < best.1) {
                best = (s, i);
            }
        }
        best
    };
    let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, NONE); n];
    for &k in &pending {
        best[k] = scan(k, &in_tour, &next);
    }

    while !pending.is_empty() {
        let mut pick = 0;
        for p in 1..pending.len() {
            let (k, b) = (pending[p], pending[pick]);
            if best[k].0 < best[b].0 || (best[k].0 == best[b].0 && k < b) {
                pick = p;
            }
        }
        let k = pending.swap_remove(pick);
        let i = best[k].1;
        let j = next[i];
        next[i] = k;
        next[k] = j;
        in_tour.push(k);

        for &c in &pending {
            if best[c].1 == i {
                best[c] = scan(c, &in_tour, &next);
                continue;
            }
            for tail in [i, k] {
                let s = score(d, tail, c, next[tail], criterion);
                if s < best[c].0 || (s == best[c].0 && tail < best[c].1) {
                    best[c] = (s, tail);
                }
            }
        }
    }

    let mut order = Vec::with_capacity(n);
    let mut c = start[0];
    for _ in 0..n {
        order.push(c);
        c = next[c];
    }
    order
}
