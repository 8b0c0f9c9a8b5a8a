mod common;

use common::{brute_force_mst_weight, brute_force_optimum, is_permutation, plain_tour_cost, random_instance, rel_close};
use proptest::prelude::*;
use tsplab_core::constructive::{christofides, convex_hull, convex_hull_tour, minimum_spanning_tree};
use tsplab_core::exact::{branch_and_bound, root_lower_bound, BbCap, BbVariant};
use tsplab_core::instance::EdgeWeightKind;
use tsplab_core::meta::{initial_population, nn_seed_count, GaVariant, Origin};
use tsplab_core::rng::seeded_rng;
use tsplab_core::tour::{nearest_neighbor_tour, two_opt, TwoOptMode};
use tsplab_core::tuner::{preset, PRESET_COLUMNS};
use tsplab_core::{build_distance_matrix, run_algorithm, tour_length, Algorithm, DistanceMatrix, Instance, Rounding, SolveBudget};

#[test]
fn branch_and_bound_matches_oracle() {
    for seed in 0..6 {
        let n = 7 + (seed as usize % 3);
        let (_, d) = random_instance(n, 1000 + seed);
        let opt = brute_force_optimum(&d);
        assert!(root_lower_bound(&d) <= opt + 1e-9);
        let base = branch_and_bound(&d, BbVariant::Baseline, BbCap::default()).unwrap();
        let enh = branch_and_bound(&d, BbVariant::EnhancedR1, BbCap::default()).unwrap();
        assert!(rel_close(base.best_cost, opt, 1e-9), "seed {seed}");
        assert_eq!(base.best_cost, enh.best_cost);
        assert!(base.proven_optimal && enh.proven_optimal);
        let nn = nearest_neighbor_tour(&d, 0);
        assert_eq!(enh.initial_incumbent, Some(plain_tour_cost(nn.order(), &d)));
    }
}

#[test]
fn christofides_and_mst_against_oracles() {
    for seed in 0..8 {
        let n = 4 + seed as usize % 5;
        let (_, d) = random_instance(n, 2000 + seed);
        let mst = minimum_spanning_tree(&d);
        assert_eq!(mst.len(), n - 1);
        assert!(rel_close(mst.total_weight(), brute_force_mst_weight(&d), 1e-12));
        let c = christofides(&d);
        assert!(c.metric);
        assert!(is_permutation(c.tour.order(), n));
        assert!(tour_length(&c.tour, &d).unwrap() <= 2.0 * brute_force_optimum(&d) + 1e-9);
        assert_eq!(christofides(&d), c);
    }
}

#[test]
fn hull_tour_square_with_centre_is_optimal() {
    let pts = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.5, 0.5)];
    let inst = Instance::from_coords("sqc", EdgeWeightKind::Euc2d, pts).unwrap();
    let d = build_distance_matrix(&inst, Rounding::None).unwrap();
    let t = convex_hull_tour(&inst, &d).unwrap();
    assert!(rel_close(tour_length(&t, &d).unwrap(), brute_force_optimum(&d), 1e-12));
}

fn cyclic_subsequence_matches(tour: &[usize], hull: &[usize]) -> bool {
    let filtered: Vec<usize> = tour.iter().copied().filter(|c| hull.contains(c)).collect();
    let start = filtered.iter().position(|&c| c == hull[0]).unwrap();
    (0..hull.len()).all(|k| filtered[(start + k) % filtered.len()] == hull[k])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hull_is_convex_and_preserved(n in 3usize..40, seed in any::<u64>()) {
        let (inst, d) = random_instance(n, seed);
        let pts = inst.coords().unwrap();
        let hull = convex_hull(pts).unwrap();
        let m = hull.len();
        for a in 0..m {
            let (o, p, q) = (pts[hull[a]], pts[hull[(a + 1) % m]], pts[hull[(a + 2) % m]]);
            prop_assert!((p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0) > 0.0);
        }
        let tour = convex_hull_tour(&inst, &d).unwrap();
        prop_assert!(is_permutation(tour.order(), n));
        prop_assert!(cyclic_subsequence_matches(tour.order(), &hull));
    }

    #[test]
    fn full_two_opt_reaches_a_local_optimum(n in 4usize..30, seed in any::<u64>()) {
        let (_, d) = random_instance(n, seed);
        let start = nearest_neighbor_tour(&d, 0);
        let t = two_opt(&start, &d, TwoOptMode::Full, &mut seeded_rng(seed));
        let order = t.order();
        prop_assert!(tour_length(&t, &d).unwrap() <= tour_length(&start, &d).unwrap() + 1e-9);
        let base = plain_tour_cost(order, &d);
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut alt = order.to_vec();
                alt[i..=j].reverse();
                prop_assert!(plain_tour_cost(&alt, &d) >= base - 1e-7 * base.max(1.0));
            }
        }
    }
}

#[test]
fn hybrid_population_seeding() {
    let (_, d) = random_instance(30, 4);
    for (size, seeds) in [(4, 0), (5, 1), (10, 2), (97, 19)] {
        assert_eq!(nn_seed_count(size), seeds);
        let pop = initial_population(&d, size, GaVariant::HybridR1, &mut seeded_rng(1));
        assert_eq!(pop.len(), size);
        assert_eq!(pop.iter().filter(|i| i.origin == Origin::NearestNeighbor).count(), seeds);
        assert!(pop.iter().all(|i| is_permutation(&i.order, 30)));
        let base = initial_population(&d, size, GaVariant::Baseline, &mut seeded_rng(1));
        assert!(base.iter().all(|i| i.origin == Origin::Random));
    }
}

fn outcome_signature(d: &DistanceMatrix, inst: &Instance, a: Algorithm, seed: u64) -> (Vec<usize>, f64, u64) {
    let params = preset(a, PRESET_COLUMNS[(seed % 6) as usize]).unwrap().values;
    let budget = SolveBudget::seconds(30.0).with_evaluations(3000);
    let mut runs = a.variants().iter().map(|&v| run_algorithm(inst, d, a, v, &params, &budget, seed).unwrap());
    let o = runs.next().unwrap();
    for other in runs {
        assert!(is_permutation(other.best.order(), d.n()));
    }
    (o.best.order().to_vec(), o.best_cost, o.evaluations)
}

#[test]
fn stochastic_solvers_are_seed_deterministic_and_honest() {
    let (inst, d) = random_instance(15, 77);
    for a in Algorithm::STOCHASTIC {
        for seed in 0..3 {
            let first = outcome_signature(&d, &inst, a, seed);
            assert_eq!(first, outcome_signature(&d, &inst, a, seed), "{a} seed {seed}");
            assert!(is_permutation(&first.0, 15));
            assert!(rel_close(first.1, plain_tour_cost(&first.0, &d), 1e-9));
            // Budgets are checked between iterations; one 2-opt scan may overshoot.
            assert!(first.2 <= 3000 + 15 * 15, "{a}: {}", first.2);
        }
    }
}

#[test]
fn evaluation_budget_is_respected() {
    let (inst, d) = random_instance(20, 5);
    for a in Algorithm::STOCHASTIC {
        let params = preset(a, "original").unwrap().values;
        for &v in a.variants() {
            let budget = SolveBudget::seconds(30.0).with_evaluations(1234);
            let o = run_algorithm(&inst, &d, a, v, &params, &budget, 9).unwrap();
            assert!(o.evaluations <= 1234 + 20 * 20, "{a}/{v}: {}", o.evaluations);
            for w in o.trajectory.windows(2) {
                assert!(w[1].cost < w[0].cost && w[1].evaluations >= w[0].evaluations);
            }
        }
    }
}
