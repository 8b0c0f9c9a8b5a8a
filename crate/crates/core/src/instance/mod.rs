//! Problem instances and the dense distance matrices every solver consumes.

mod geo;
mod random;
mod tsplib;

pub use geo::geo_distance;
pub use random::{generate_random_instance, CoordRange};
pub use tsplib::{parse_instance, render_instance};

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Tolerance used when checking symmetry of explicit matrices.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InstanceError {
    #[error("missing required field {0}")]
    MissingField(&'static str),
    #[error("{what}: expected {expected} values, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("unsupported {keyword}: {value}")]
    UnsupportedFormat { keyword: &'static str, value: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NonSymmetric(usize, usize),
    #[error("negative distance at ({0}, {1})")]
    NegativeDistance(usize, usize),
    #[error("non-zero diagonal entry at {0}")]
    NonZeroDiagonal(usize),
    #[error("non-finite value at ({0}, {1})")]
    NonFinite(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeWeightKind {
    #[serde(rename = "EUC_2D")]
    Euc2d,
    #[serde(rename = "GEO")]
    Geo,
    #[serde(rename = "EXPLICIT")]
    Explicit,
}

impl EdgeWeightKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EdgeWeightKind::Euc2d => "EUC_2D",
            EdgeWeightKind::Geo => "GEO",
            EdgeWeightKind::Explicit => "EXPLICIT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceData {
    /// One `(x, y)` pair per city. For GEO instances these are
    /// TSPLIB `DDD.MM` latitude/longitude values.
    Coords(Vec<(f64, f64)>),
    /// Full row-major `n × n` matrix.
    Explicit(Vec<f64>),
}

/// A TSP instance as read from a TSPLIB file or produced by the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub comment: Option<String>,
    pub dimension: usize,
    pub kind: EdgeWeightKind,
    pub data: InstanceData,
}

impl Instance {
    /// Builds a coordinate instance, checking the invariants.
    pub fn from_coords(
        name: impl Into<String>,
        kind: EdgeWeightKind,
        coords: Vec<(f64, f64)>,
    ) -> Result<Self, InstanceError> {
        if kind == EdgeWeightKind::Explicit {
            return Err(InstanceError::UnsupportedFormat {
                keyword: "EDGE_WEIGHT_TYPE",
                value: "EXPLICIT with coordinates".into(),
            });
        }
        let inst = Instance {
            name: name.into(),
            comment: None,
            dimension: coords.len(),
            kind,
            data: InstanceData::Coords(coords),
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Builds an explicit-matrix instance from a full row-major matrix.
    pub fn from_matrix(name: impl Into<String>, n: usize, entries: Vec<f64>) -> Result<Self, InstanceError> {
        let inst = Instance {
            name: name.into(),
            comment: None,
            dimension: n,
            kind: EdgeWeightKind::Explicit,
            data: InstanceData::Explicit(entries),
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<(), InstanceError> {
        let n = self.dimension;
        if n < 2 {
            return Err(InstanceError::DimensionTooSmall(n));
        }
        match &self.data {
            InstanceData::Coords(c) => {
                if c.len() != n {
                    return Err(InstanceError::CountMismatch {
                        what: "NODE_COORD_SECTION",
                        expected: n,
                        found: c.len(),
                    });
                }
                if let Some(i) = c.iter().position(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(InstanceError::NonFinite(i, i));
                }
                Ok(())
            }
            InstanceData::Explicit(m) => {
                if m.len() != n * n {
                    return Err(InstanceError::CountMismatch {
                        what: "EDGE_WEIGHT_SECTION",
                        expected: n * n,
                        found: m.len(),
                    });
                }
                check_matrix(n, m)
            }
        }
    }

    pub fn coords(&self) -> Option<&[(f64, f64)]> {
        match &self.data {
            InstanceData::Coords(c) => Some(c),
            InstanceData::Explicit(_) => None,
        }
    }
}

fn check_matrix(n: usize, m: &[f64]) -> Result<(), InstanceError> {
    for i in 0..n {
        for j in 0..n {
            let v = m[i * n + j];
            if !v.is_finite() {
                return Err(InstanceError::NonFinite(i, j));
            }
            if v < 0.0 {
                return Err(InstanceError::NegativeDistance(i, j));
            }
            if i == j && v != 0.0 {
                return Err(InstanceError::NonZeroDiagonal(i));
            }
            if j > i && (v - m[j * n + i]).abs() > SYMMETRY_TOLERANCE {
                return Err(InstanceError::NonSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// How EUC_2D distances are converted to matrix entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounding {
    /// Raw Euclidean distance.
    #[default]
    None,
    /// TSPLIB `nint`: round half away from zero.
    TsplibNint,
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rounding::None => "none",
            Rounding::TsplibNint => "tsplib_nint",
        })
    }
}

impl std::str::FromStr for Rounding {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Rounding::None),
            "tsplib_nint" | "nint" => Ok(Rounding::TsplibNint),
            other => Err(format!("unknown rounding '{other}' (expected none | tsplib_nint)")),
        }
    }
}

/// Dense symmetric `n × n` matrix with zero diagonal and non-negative entries.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    /// Wraps a row-major matrix after checking the invariants.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, InstanceError> {
        if entries.len() != n * n {
            return Err(InstanceError::CountMismatch {
                what: "matrix",
                expected: n * n,
                found: entries.len(),
            });
        }
        check_matrix(n, &entries)?;
        // Exact symmetry from here on, so tour costs are direction-invariant.
        let mut entries = entries;
        for i in 0..n {
            for j in (i + 1)..n {
                entries[j * n + i] = entries[i * n + j];
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    /// Builds a matrix from a symmetric distance function evaluated on `i < j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self, InstanceError> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f(i, j);
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        check_matrix(n, &entries)?;
        Ok(DistanceMatrix { n, entries })
    }

    /// Euclidean matrix over raw points, no rounding.
    pub fn euclidean(points: &[(f64, f64)]) -> Self {
        Self::from_fn(points.len(), |i, j| euclid(points[i], points[j]))
            .expect("euclidean distances over finite points are valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    /// Mean over off-diagonal entries; 0 for a 1-city matrix.
    pub fn mean_off_diagonal(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        let sum: f64 = self.entries.iter().sum();
        sum / (self.n * (self.n - 1)) as f64
    }

    /// True when every triple satisfies the triangle inequality within `tol`.
    pub fn is_metric(&self, tol: f64) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.get(i, j) <= self.get(i, k) + self.get(k, j) + tol))
        })
    }
}

#[inline]
fn euclid(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// TSPLIB `nint`.
#[inline]
pub fn nint(x: f64) -> f64 {
    (x + 0.5).floor()
}

/// Converts an instance into its distance matrix.
///
/// EUC_2D honours `rounding`; GEO always uses the TSPLIB geographic
/// convention with integer truncation; EXPLICIT copies the stored matrix.
pub fn build_distance_matrix(inst: &Instance, rounding: Rounding) -> Result<DistanceMatrix, InstanceError> {
    inst.validate()?;
    match (&inst.data, inst.kind) {
        (InstanceData::Explicit(m), _) => DistanceMatrix::new(inst.dimension, m.clone()),
        (InstanceData::Coords(c), EdgeWeightKind::Geo) => {
            DistanceMatrix::from_fn(c.len(), |i, j| geo_distance(c[i], c[j]))
        }
        (InstanceData::Coords(c), _) => DistanceMatrix::from_fn(c.len(), |i, j| {
            let d = euclid(c[i], c[j]);
            match rounding {
                Rounding::None => d,
                Rounding::TsplibNint => nint(d),
            }
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Instance {
        Instance::from_coords("t", EdgeWeightKind::Euc2d, vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = build_distance_matrix(&triangle(), Rounding::None).unwrap();
        assert_eq!(d.get(0, 1), 3.0);
        assert_eq!(d.get(0, 2), 4.0);
        assert_eq!(d.get(1, 2), 5.0);
        assert_eq!(d.get(2, 1), 5.0);
    }

    #[test]
    fn nint_rounding() {
        let inst = Instance::from_coords("r", EdgeWeightKind::Euc2d, vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        let raw = build_distance_matrix(&inst, Rounding::None).unwrap();
        assert!((raw.get(0, 1) - 2f64.sqrt()).abs() < 1e-15);
        let rounded = build_distance_matrix(&inst, Rounding::TsplibNint).unwrap();
        assert_eq!(rounded.get(0, 1), 1.0);
        assert_eq!(nint(2.5), 3.0);
    }

    #[test]
    fn explicit_copy_and_checks() {
        let inst = Instance::from_matrix("e", 2, vec![0.0, 5.0, 5.0, 0.0]).unwrap();
        let d = build_distance_matrix(&inst, Rounding::TsplibNint).unwrap();
        assert_eq!(d.entries(), &[0.0, 5.0, 5.0, 0.0]);

        assert_eq!(
            DistanceMatrix::new(2, vec![0.0, 5.0, 6.0, 0.0]),
            Err(InstanceError::NonSymmetric(0, 1))
        );
        assert_eq!(
            DistanceMatrix::new(2, vec![0.0, -1.0, -1.0, 0.0]),
            Err(InstanceError::NegativeDistance(0, 1))
        );
    }

    #[test]
    fn dimension_floor() {
        let err = Instance::from_coords("one", EdgeWeightKind::Euc2d, vec![(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, InstanceError::DimensionTooSmall(1));
    }

    #[test]
    fn metric_check() {
        let d = build_distance_matrix(&triangle(), Rounding::None).unwrap();
        assert!(d.is_metric(1e-9));
        let bad = DistanceMatrix::new(3, vec![0.0, 1.0, 10.0, 1.0, 0.0, 1.0, 10.0, 1.0, 0.0]).unwrap();
        assert!(!bad.is_metric(1e-9));
    }
}
