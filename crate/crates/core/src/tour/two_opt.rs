use super::Tour;
use crate::instance::DistanceMatrix;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoOptMode {
    /// First-improvement sweeps until no improving reversal exists.
    Full,
    /// Sample `tries` uniform segment reversals, applying each improving one.
    Stochastic { tries: usize },
}

/// Relative threshold below which a move is not considered improving.
const IMPROVEMENT_EPS: f64 = 1e-10;

/// Cost change of reversing `order[i+1..=j]` (requires `i < j`).
#[inline]
pub(crate) fn reversal_delta(order: &[usize], d: &DistanceMatrix, i: usize, j: usize) -> f64 {
    let n = order.len();
    let (a, b) = (order[i], order[i + 1]);
    let (c, e) = (order[j], order[(j + 1) % n]);
    d.get(a, c) + d.get(b, e) - d.get(a, b) - d.get(c, e)
}

#[inline]
pub(crate) fn is_improving(order: &[usize], d: &DistanceMatrix, i: usize, j: usize, delta: f64) -> bool {
    let n = order.len();
    let removed = d.get(order[i], order[i + 1]) + d.get(order[j], order[(j + 1) % n]);
    delta < -IMPROVEMENT_EPS * (1.0 + removed)
}

/// True when reversing `order[i+1..=j]` changes the cycle.
#[inline]
pub(crate) fn is_proper_move(n: usize, i: usize, j: usize) -> bool {
    i + 1 < j && !(i == 0 && j == n - 1)
}

/// Applies 2-opt to `order` in place and returns the number of move
/// evaluations performed.
pub fn two_opt_in_place<R: Rng + ?Sized>(
    order: &mut [usize],
    d: &DistanceMatrix,
    mode: TwoOptMode,
    rng: &mut R,
) -> u64 {
    let n = order.len();
    if n < 4 {
        return 0;
    }
    let mut evaluations = 0u64;
    match mode {
        TwoOptMode::Full => {
            let mut improved = true;
            while improved {
                improved = false;
                for i in 0..n - 2 {
                    for j in (i + 2)..n {
                        if !is_proper_move(n, i, j) {
                            continue;
                        }
                        evaluations += 1;
                        let delta = reversal_delta(order, d, i, j);
                        if is_improving(order, d, i, j, delta) {
                            order[i + 1..=j].reverse();
                            improved = true;
                        }
                    }
                }
            }
        }
        TwoOptMode::Stochastic { tries } => {
            for _ in 0..tries {
                let (i, j) = loop {
                    let x = rng.gen_range(0..n);
                    let y = rng.gen_range(0..n);
                    let (i, j) = (x.min(y), x.max(y));
                    if is_proper_move(n, i, j) {
                        break (i, j);
                    }
                };
                evaluations += 1;
                let delta = reversal_delta(order, d, i, j);
                if is_improving(order, d, i, j, delta) {
                    order[i + 1..=j].reverse();
                }
            }
        }
    }
    evaluations
}

/// Returns a tour whose cost is no greater than the input's.
pub fn two_opt<R: Rng + ?Sized>(tour: &Tour, d: &DistanceMatrix, mode: TwoOptMode, rng: &mut R) -> Tour {
    let mut order = tour.order().to_vec();
    two_opt_in_place(&mut order, d, mode, rng);
    Tour::from_permutation(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded_rng;
    use crate::tour::{canonical_cost, validate_tour};

    fn square() -> DistanceMatrix {
        DistanceMatrix::euclidean(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    }

    #[test]
    fn uncrosses_square() {
        let d = square();
        let crossed = Tour::new(vec![0, 2, 1, 3], 4).unwrap();
        assert!((canonical_cost(crossed.order(), &d) - (2.0 + 2.0 * 2f64.sqrt())).abs() < 1e-12);
        let fixed = two_opt(&crossed, &d, TwoOptMode::Full, &mut seeded_rng(0));
        assert_eq!(canonical_cost(fixed.order(), &d), 4.0);
        assert!(validate_tour(fixed.order(), 4).is_valid());
    }

    #[test]
    fn optimal_tour_is_fixed_point() {
        let d = square();
        let t = Tour::identity(4);
        assert_eq!(two_opt(&t, &d, TwoOptMode::Full, &mut seeded_rng(0)), t);
        assert_eq!(two_opt(&t, &d, TwoOptMode::Stochastic { tries: 50 }, &mut seeded_rng(1)), t);
    }

    #[test]
    fn stochastic_never_worsens() {
        let d = square();
        let crossed = Tour::new(vec![0, 2, 1, 3], 4).unwrap();
        let out = two_opt(&crossed, &d, TwoOptMode::Stochastic { tries: 3 }, &mut seeded_rng(9));
        assert!(canonical_cost(out.order(), &d) <= canonical_cost(crossed.order(), &d));
    }

    #[test]
    fn tiny_tours_untouched() {
        let d = DistanceMatrix::euclidean(&[(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]);
        let mut order = vec![0, 2, 1];
        assert_eq!(two_opt_in_place(&mut order, &d, TwoOptMode::Full, &mut seeded_rng(0)), 0);
        assert_eq!(order, vec![0, 2, 1]);
    }
}
