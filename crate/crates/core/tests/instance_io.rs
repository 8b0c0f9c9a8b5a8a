mod common;

use proptest::prelude::*;
use tsplab_core::instance::{
    generate_random_instance, parse_instance, render_instance, CoordRange, EdgeWeightKind, InstanceError,
};
use tsplab_core::{build_distance_matrix, Rounding};

/// Optimum of `generate_random_instance(12, 3, [0, 100])`, frozen from the
/// exhaustive oracle and matched by an independent Held-Karp run.
const RAND12_S3_OPTIMUM: f64 = 287.17170909868184;

#[test]
fn frozen_twelve_city_optimum() {
    let (_, d) = common::random_instance(12, 3);
    let opt = common::brute_force_optimum(&d);
    assert!(common::rel_close(opt, RAND12_S3_OPTIMUM, 1e-12), "{opt}");
}

#[test]
fn parses_coordinate_and_matrix_files() {
    let tri = "NAME: tri\nTYPE: TSP\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 3 0\n3 0 4\nEOF\n";
    let inst = parse_instance(tri).unwrap();
    assert_eq!(inst.dimension, 3);
    let d = build_distance_matrix(&inst, Rounding::None).unwrap();
    assert_eq!((d.get(0, 1), d.get(0, 2), d.get(1, 2)), (3.0, 4.0, 5.0));

    let full = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: FULL_MATRIX\nEDGE_WEIGHT_SECTION\n0 5\n5 0\n";
    let d = build_distance_matrix(&parse_instance(full).unwrap(), Rounding::None).unwrap();
    assert_eq!(d.entries(), &[0.0, 5.0, 5.0, 0.0]);

    let lower = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_FORMAT: LOWER_DIAG_ROW\nEDGE_WEIGHT_SECTION\n0\n1 0\n2 3 0\n";
    let upper = "EDGE_WEIGHT_FORMAT: UPPER_ROW\nDIMENSION: 3\nEDGE_WEIGHT_TYPE: EXPLICIT\nEDGE_WEIGHT_SECTION\n1 2\n3\n";
    let a = build_distance_matrix(&parse_instance(lower).unwrap(), Rounding::None).unwrap();
    let b = build_distance_matrix(&parse_instance(upper).unwrap(), Rounding::None).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.get(1, 2), 3.0);
}

#[test]
fn reports_malformed_files() {
    let short = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n";
    assert!(matches!(parse_instance(short), Err(InstanceError::CountMismatch { .. })));
    let no_dim = "EDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n1 0 0\n";
    assert_eq!(parse_instance(no_dim), Err(InstanceError::MissingField("DIMENSION")));
    let ceil = "DIMENSION: 2\nEDGE_WEIGHT_TYPE: CEIL_2D\nNODE_COORD_SECTION\n1 0 0\n2 1 1\n";
    match parse_instance(ceil) {
        Err(InstanceError::UnsupportedFormat { value, .. }) => assert_eq!(value, "CEIL_2D"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn nint_rounding_and_geo() {
    let inst =
        tsplab_core::Instance::from_coords("p", EdgeWeightKind::Euc2d, vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
    assert_eq!(build_distance_matrix(&inst, Rounding::TsplibNint).unwrap().get(0, 1), 1.0);

    // First three cities of ulysses16; the published matrix row starts 0 509 501.
    let geo = "DIMENSION: 3\nEDGE_WEIGHT_TYPE: GEO\nNODE_COORD_SECTION\n1 38.24 20.42\n2 39.57 26.15\n3 40.56 25.32\n";
    let d = build_distance_matrix(&parse_instance(geo).unwrap(), Rounding::TsplibNint).unwrap();
    assert_eq!((d.get(0, 1), d.get(0, 2)), (509.0, 501.0));
}

#[test]
fn generator_edge_cases() {
    let a = generate_random_instance(10, 7, CoordRange { lo: 0.0, hi: 100.0 });
    let b = generate_random_instance(10, 7, CoordRange { lo: 0.0, hi: 100.0 });
    assert_eq!(render_instance(&a), render_instance(&b));
    let zero = generate_random_instance(2, 0, CoordRange { lo: 0.0, hi: 0.0 });
    let d = build_distance_matrix(&zero, Rounding::None).unwrap();
    assert!(d.entries().iter().all(|&x| x == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn render_parse_round_trip(n in 2usize..40, seed in any::<u64>()) {
        let inst = generate_random_instance(n, seed, CoordRange::default());
        prop_assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }

    #[test]
    fn euclidean_matrices_are_metric(n in 3usize..25, seed in any::<u64>()) {
        let (_, d) = common::random_instance(n, seed);
        prop_assert!(d.is_metric(1e-9));
        for i in 0..n {
            prop_assert_eq!(d.get(i, i), 0.0);
            for j in 0..n {
                prop_assert_eq!(d.get(i, j), d.get(j, i));
                prop_assert!(d.get(i, j) >= 0.0);
            }
        }
    }
}
