use proptest::prelude::*;
use tecalc::hochschild::chain::{
    b_plus_ub, connes_b, ggm_connection, hochschild_b, i_op, length_gamma, lie_derivative, random_chain,
    shift_u, t_derivative, truncate_t, word_chain, Chain, ChainKey,
};
use tecalc::hochschild::cochain::{bracket, random_cochain, Cochain};
use tecalc::hochschild::samples::{self, matrix2, zoo};
use tecalc::hochschild::{Mono, RingElem, Vector};
use tecalc::random::rng_for;
use tecalc::Scalar;

fn basis(alg: &tecalc::hochschild::AInftyAlgebra, label: &str) -> usize {
    alg.index_of(label).unwrap()
}

#[test]
fn length_operator_counts_tensor_slots() {
    let alg = matrix2();
    let (h, x, y) = (basis(&alg, "h"), basis(&alg, "x"), basis(&alg, "y"));
    for (word, k) in [(vec![x], 0), (vec![h, x], 1), (vec![y, x, y, h], 3)] {
        let expected = word_chain(word.clone()).scaled(&Scalar::int(-k));
        assert_eq!(length_gamma(&word_chain(word)), expected);
    }
}

#[test]
fn connes_operator_on_length_zero() {
    let alg = matrix2();
    let (one, x) = (alg.unit_index(), basis(&alg, "x"));
    assert_eq!(connes_b(&alg, &word_chain(vec![x])), word_chain(vec![one, x]));
    assert!(connes_b(&alg, &word_chain(vec![one])).is_zero());
}

#[test]
fn matrix_trace_pairing() {
    let alg = matrix2();
    let v = |label: &str| Vector::single((basis(&alg, label), Mono::ONE), Scalar::int(1));
    let one = RingElem::single(Mono::ONE, Scalar::int(1));
    // x = e12, y = e21: tr(xy) = tr(yx) = 1, tr(x²) = 0
    assert_eq!(alg.pair(&v("x"), &v("y")), one);
    assert_eq!(alg.pair(&v("y"), &v("x")), one);
    assert!(alg.pair(&v("x"), &v("x")).is_zero());
}

#[test]
fn opposite_is_an_involution_and_negation_is_an_isomorphism() {
    for alg in zoo() {
        let max = alg.ops().max_arity() + 2;
        let back = alg.opposite().opposite();
        assert_eq!(back.ops(), alg.ops(), "{}", alg.name());
        assert_eq!(back.unit_sign(), alg.unit_sign());
        let op = alg.opposite();
        assert!(op.verify_ainfty(max).passed, "{} opposite is A∞", alg.name());
        assert!(op.verify_unit(max).passed, "{} opposite unit", alg.name());
        // α ↦ −α is a strict morphism A → A⁻
        let neg = alg.negative();
        assert!(
            alg.verify_scalar_morphism(&neg, &Scalar::int(-1), max).passed,
            "{}",
            alg.name()
        );
        assert!(!alg.verify_scalar_morphism(&neg, &Scalar::int(1), max).passed || alg.ops().is_zero());
    }
}

#[test]
fn deformations_restrict_to_the_original_tables() {
    for alg in zoo() {
        let s = alg.s_deformation();
        assert_eq!(&s.restrict(), alg.ops(), "{}", alg.name());
        assert!(s.is_euler_graded());
        let e = alg.e_deformation().unwrap();
        assert!(e.has_laurent_e());
        assert_eq!(e.restrict_e().ops(), alg.ops(), "{}", alg.name());
        let max = alg.ops().max_arity() + 2;
        assert!(e.verify_euler(max).passed, "{} C^e Euler grading", alg.name());
        assert!(e.verify_ainfty(max).passed, "{} C^e is A∞", alg.name());
    }
}

#[test]
fn ggm_on_a_t_independent_algebra_is_the_t_derivative() {
    let alg = matrix2().with_t_order(3).unwrap();
    let mut rng = rng_for(11);
    for _ in 0..20 {
        let c = random_chain(&alg, &mut rng, 3, 4);
        assert_eq!(ggm_connection(&alg, &c), truncate_t(&t_derivative(&alg, &c), 2));
    }
}

/// `[X, Y]` for operators of the given parities, from the two compositions.
fn supercommutator(x_odd: bool, y_odd: bool, xy: Chain, yx: Chain) -> Chain {
    let mut out = xy;
    let s = if x_odd && y_odd {
        Scalar::int(1)
    } else {
        Scalar::int(-1)
    };
    out.add_scaled(&yx, &s);
    out
}

/// `([i{φ}, b+uB](c), u L_φ(c) + i{[m,φ]}(c))`.
fn cartan_sides(alg: &tecalc::hochschild::AInftyAlgebra, phi: &dyn Cochain, c: &Chain) -> (Chain, Chain) {
    let p_odd = phi.shifted_parity() == 1;
    let lhs = supercommutator(
        !p_odd,
        true,
        i_op(alg, phi, &b_plus_ub(alg, c)),
        b_plus_ub(alg, &i_op(alg, phi, c)),
    );
    let m_phi = bracket(alg.ops(), phi);
    let mut rhs = shift_u(&lie_derivative(alg, phi, c), 1);
    rhs.add(&i_op(alg, &m_phi, c));
    (lhs, rhs)
}

#[test]
fn cartan_homotopy_sign_flips_on_even_shifted_cochains() {
    let alg = samples::sample("exterior").unwrap();
    let mut rng = rng_for(5);
    let mut nontrivial = 0;
    for _ in 0..30 {
        let phi = random_cochain(&alg, &mut rng, 0, 2, 0.7);
        let c = random_chain(&alg, &mut rng, 3, 3);
        let (lhs, rhs) = cartan_sides(&alg, &phi, &c);
        assert_eq!(lhs, rhs.negated(), "signed form");
        if !rhs.is_zero() {
            nontrivial += 1;
            assert_ne!(lhs, rhs, "the unsigned form fails on even |phi|'");
        }
    }
    assert!(nontrivial > 0);
    for _ in 0..30 {
        let phi = random_cochain(&alg, &mut rng, 1, 2, 0.7);
        let c = random_chain(&alg, &mut rng, 3, 3);
        let (lhs, rhs) = cartan_sides(&alg, &phi, &c);
        assert_eq!(lhs, rhs, "odd |phi|' matches the unsigned form");
    }
}

#[test]
fn chain_keys_order_by_length() {
    let key = ChainKey::new(vec![0, 1, 2]);
    assert_eq!(key.length(), 2);
    assert_eq!(ChainKey::new(vec![3]).length(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differentials_square_to_zero(seed in 0u64..1_000_000, which in 0usize..12) {
        let alg = &zoo()[which];
        let mut rng = rng_for(seed);
        let c = random_chain(alg, &mut rng, 4, 3);
        prop_assert!(hochschild_b(alg, &hochschild_b(alg, &c)).is_zero(), "b² on {}", alg.name());
        prop_assert!(connes_b(alg, &connes_b(alg, &c)).is_zero(), "B² on {}", alg.name());
        let mut anti = hochschild_b(alg, &connes_b(alg, &c));
        anti.add(&connes_b(alg, &hochschild_b(alg, &c)));
        prop_assert!(anti.is_zero(), "bB + Bb on {}", alg.name());
        prop_assert!(b_plus_ub(alg, &b_plus_ub(alg, &c)).is_zero());
    }
}

#[test]
fn suite_reports_agree_across_execution_modes() {
    use tecalc::hochschild::harness::{run_suite, SuiteConfig};
    use tecalc::par::Execution;
    let alg = samples::sample("clifford-t").unwrap();
    let cfg = |exec| SuiteConfig {
        trials: 12,
        exec,
        ..SuiteConfig::default()
    };
    let seq = run_suite(&alg, &cfg(Execution::Sequential));
    let par = run_suite(&alg, &cfg(Execution::Parallel));
    assert_eq!(seq.identities, par.identities);
}
