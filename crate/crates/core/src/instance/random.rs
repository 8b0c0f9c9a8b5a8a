use super::{EdgeWeightKind, Instance, InstanceData};
use crate::rng::seeded_rng;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Closed interval coordinates are drawn from, applied to both axes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoordRange {
    pub lo: f64,
    pub hi: f64,
}

impl CoordRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        CoordRange { lo, hi }
    }
}

impl Default for CoordRange {
    fn default() -> Self {
        CoordRange::new(0.0, 100.0)
    }
}

/// Draws `n` uniform i.i.d. points in `range × range`.
///
/// Deterministic in `(n, seed, range)` on every platform.
///
/// # Panics
///
/// If `n < 2` or the range is empty or non-finite.
pub fn generate_random_instance(n: usize, seed: u64, range: CoordRange) -> Instance {
    assert!(n >= 2, "random instance needs at least 2 cities");
    assert!(
        range.lo.is_finite() && range.hi.is_finite() && range.lo <= range.hi,
        "coordinate range must be a non-empty finite interval"
    );
    let mut rng = seeded_rng(seed);
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x = rng.gen_range(range.lo..=range.hi);
            let y = rng.gen_range(range.lo..=range.hi);
            (x, y)
        })
        .collect();
    Instance {
        name: format!("rand{n}_s{seed}"),
        comment: Some(format!("uniform random points in [{}, {}]^2", range.lo, range.hi)),
        dimension: n,
        kind: EdgeWeightKind::Euc2d,
        data: InstanceData::Coords(coords),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{build_distance_matrix, render_instance, Rounding};

    #[test]
    fn deterministic() {
        let a = generate_random_instance(10, 7, CoordRange::new(0.0, 100.0));
        let b = generate_random_instance(10, 7, CoordRange::new(0.0, 100.0));
        assert_eq!(render_instance(&a), render_instance(&b));
        assert_eq!(a.name, "rand10_s7");
        let c = generate_random_instance(10, 8, CoordRange::new(0.0, 100.0));
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_range() {
        let inst = generate_random_instance(2, 0, CoordRange::new(0.0, 0.0));
        assert_eq!(inst.coords().unwrap(), &[(0.0, 0.0), (0.0, 0.0)]);
        let d = build_distance_matrix(&inst, Rounding::None).unwrap();
        assert!(d.entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn points_in_range() {
        let inst = generate_random_instance(200, 11, CoordRange::new(-5.0, 5.0));
        assert!(inst
            .coords()
            .unwrap()
            .iter()
            .all(|&(x, y)| (-5.0..=5.0).contains(&x) && (-5.0..=5.0).contains(&y)));
    }
}
