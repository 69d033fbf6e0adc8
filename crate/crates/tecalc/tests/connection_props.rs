use proptest::prelude::*;
use tecalc::connection::{
    apply_connection, check_polarization, frame_change, gauge_transform, splitting_change, EStructure,
    GaugeSeries,
};
use tecalc::quantum::{build_quantum, preset, PRESET_NAMES};
use tecalc::random::{random_estructure, random_gauge, random_rmatrix, rng_for};
use tecalc::{Field, Matrix, MatrixSeries, Scalar};

fn structure(seed: u64, rank: usize, order: usize) -> EStructure {
    let mut rng = rng_for(seed);
    let spectrum: Vec<(i64, usize)> = (0..rank as i64).map(|k| (2 * k - 1, 1)).collect();
    random_estructure(&mut rng, &spectrum, order, 3)
}

fn gauge(seed: u64, rank: usize, order: usize) -> GaugeSeries {
    random_gauge(&mut rng_for(seed ^ 0x9e37), rank, order, 2)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn gauge_transform_is_a_right_action(seed in 0u64..10_000, rank in 1usize..4) {
        let e = structure(seed, rank, 5);
        let p = gauge(seed, rank, 5);
        let q = gauge(seed + 1, rank, 5);
        let lhs = gauge_transform(&p.compose(&q), &e).unwrap();
        let rhs = gauge_transform(&q, &gauge_transform(&p, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs.series(), rhs.series());
    }

    #[test]
    fn frame_change_is_a_right_action(seed in 0u64..10_000, rank in 1usize..4) {
        let e = structure(seed, rank, 5);
        let p = gauge(seed, rank, 5);
        let q = gauge(seed + 1, rank, 5);
        let lhs = frame_change(&p.compose(&q), &e).unwrap();
        let rhs = frame_change(&q, &frame_change(&p, &e).unwrap()).unwrap();
        prop_assert_eq!(lhs.series(), rhs.series());
        let back = frame_change(&p.inverse(), &frame_change(&p, &e).unwrap()).unwrap();
        prop_assert_eq!(back.series(), e.series());
    }

    #[test]
    fn residue_transforms_by_conjugation(seed in 0u64..10_000, rank in 1usize..4) {
        let e = structure(seed, rank, 4);
        let p = gauge(seed, rank, 4);
        let p0 = p.series().coeff(0);
        let expected = &(&p0.inverse().unwrap() * e.residue()) * p0;
        let (g, f) = (gauge_transform(&p, &e).unwrap(), frame_change(&p, &e).unwrap());
        prop_assert_eq!(g.residue(), &expected);
        prop_assert_eq!(f.residue(), &expected);
    }

    #[test]
    fn gauge_law_is_the_negated_splitting_law(seed in 0u64..10_000, rank in 1usize..4) {
        let e = structure(seed, rank, 5);
        let r = random_rmatrix(&mut rng_for(seed), rank, 5, 2);
        let via_gauge = gauge_transform(&r, &e).unwrap();
        let via_splitting = splitting_change(&r, &e.negated()).unwrap().negated();
        prop_assert_eq!(via_gauge.series(), via_splitting.series());
    }

    #[test]
    fn frame_change_carries_flat_sections(seed in 0u64..10_000, rank in 1usize..4) {
        // u²∇ applied in the new frame equals P⁻¹ (u²∇ applied to P v)
        let e = structure(seed, rank, 5);
        let p = gauge(seed, rank, 5);
        let v = gauge(seed + 7, rank, 5).into_series();
        let framed = frame_change(&p, &e).unwrap();
        let lhs = apply_connection(&framed, &v).unwrap();
        let rhs = &p.series().invert().unwrap() * &apply_connection(&e, &(p.series() * &v)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn splitting_law_matches_inverse_gauge_only_for_commuting_data() {
    let x = Matrix::from_ints(&[&[1, 2], &[0, 3]]);
    let order = 5;
    let coeffs = vec![
        x.clone(),
        x.pow(2),
        Matrix::identity(2),
        x.scale(&Scalar::int(-2)),
        x.pow(3),
        Matrix::zeros(2, 2),
    ];
    let e = EStructure::from_coeffs(Field::Rational, coeffs).unwrap();
    let r = GaugeSeries::r_matrix(
        &MatrixSeries::identity_plus(&x, 1, order) * &MatrixSeries::identity_plus(&x.pow(2), 2, order),
    )
    .unwrap();
    let split = splitting_change(&r, &e).unwrap();
    assert_eq!(
        split.series(),
        gauge_transform(&r.inverse(), &e).unwrap().series()
    );

    let y = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
    let r = GaugeSeries::r_matrix(MatrixSeries::identity_plus(&y, 1, order)).unwrap();
    let split = splitting_change(&r, &e).unwrap();
    assert_ne!(
        split.series(),
        gauge_transform(&r.inverse(), &e).unwrap().series()
    );
}

#[test]
fn splitting_change_requires_an_r_matrix() {
    let e = structure(3, 2, 3);
    let p = GaugeSeries::new(MatrixSeries::constant(Matrix::from_ints(&[&[0, 1], &[1, 0]]), 3)).unwrap();
    assert!(splitting_change(&p, &e).is_err());
}

#[test]
fn presets_and_pairing_preserving_frames_keep_the_polarization() {
    for name in PRESET_NAMES {
        let e = build_quantum(&preset(name).unwrap(), 8).unwrap().estructure;
        let report = check_polarization(&e).unwrap();
        assert!(
            report.passed() && report.checked_to_order == 8,
            "{name}: {report:?}"
        );
    }
    // P(u)ᵀ G P(−u) = G for G = [[0,1],[1,0]] and P = Id + uT, T = e21
    let e = build_quantum(&preset("s2").unwrap(), 8).unwrap().estructure;
    let t = Matrix::from_ints(&[&[0, 0], &[1, 0]]);
    let swap = Matrix::from_ints(&[&[0, 1], &[1, 0]]);
    for p in [
        MatrixSeries::identity_plus(&t, 1, 8),
        MatrixSeries::constant(swap, 8),
    ] {
        let moved = frame_change(&GaugeSeries::new(p).unwrap(), &e).unwrap();
        assert!(moved.polarization().is_some(), "pairing stays constant");
        assert!(check_polarization(&moved).unwrap().passed());
    }
}

#[test]
fn polarization_is_rejected_when_a_coefficient_breaks_it() {
    let e = build_quantum(&preset("s2").unwrap(), 6).unwrap().estructure;
    let mut series = e.series().clone();
    *series.coeff_mut(2) = series.coeff(2) + &Matrix::from_ints(&[&[1, 0], &[0, 0]]);
    let broken = EStructure::new(Field::Rational, series)
        .unwrap()
        .with_polarization(e.polarization().unwrap().clone())
        .unwrap();
    assert_eq!(check_polarization(&broken).unwrap().first_failure, Some(2));
}
