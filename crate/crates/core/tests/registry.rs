use monogamy::inequalities::{
    chsh_power_sum, complementarity, evaluate, thm8_proof_identities, InequalityId, PivotProfile, DEFAULT_TOL,
};
use monogamy::qmath::{haar_random_pure, SeededRng};
use monogamy::states::{from_acin, named_state, sample_acin, NamedState, PureState};

fn haar(n: usize, seed: u64, i: u64) -> PureState {
    PureState::new_renormalized(haar_random_pure(n, &mut SeededRng::new(seed, i)).unwrap()).unwrap()
}

fn assert_all_hold(s: &PureState, ids: &[InequalityId]) {
    for pivot in 0..s.n_qubits() {
        let p = PivotProfile::new(s, pivot).unwrap();
        for &id in ids {
            let r = p.evaluate(id, DEFAULT_TOL).unwrap();
            assert!(r.holds, "{r:?}");
            assert_eq!(r.margin, r.rhs - r.lhs);
        }
    }
}

#[test]
fn registry_holds_on_sampled_three_qubit_states() {
    let ids = InequalityId::all_for(3);
    for i in 0..1000 {
        assert_all_hold(&haar(3, 100, i), &ids);
        assert_all_hold(&from_acin(&sample_acin(&mut SeededRng::new(101, i))).unwrap(), &ids);
    }
}

#[test]
fn registry_holds_on_larger_registers() {
    for n in 4..=6 {
        let ids = InequalityId::all_for(n);
        for i in 0..100 {
            assert_all_hold(&haar(n, 200 + n as u64, i), &ids);
        }
    }
}

#[test]
fn tightened_bound_rhs_is_one_for_pure_states() {
    for i in 0..1000 {
        let s = haar(3, 300, i);
        let r = evaluate(InequalityId::Thm8, &s, 0, DEFAULT_TOL).unwrap();
        assert!((r.rhs - 1.0).abs() <= 1e-10);
        // thm8 lhs is the square of eq6 lhs, so the two relations coincide.
        let e6 = evaluate(InequalityId::Eq6, &s, 0, DEFAULT_TOL).unwrap();
        assert!((r.lhs - e6.lhs * e6.lhs).abs() <= 1e-12);
    }
}

#[test]
fn complementarity_tangle_is_pivot_invariant() {
    for i in 0..300 {
        let s = haar(3, 400, i);
        let base = complementarity(&s).unwrap();
        for pivot in 1..3 {
            let r = evaluate(InequalityId::Compl, &s, pivot, DEFAULT_TOL).unwrap();
            assert!((r.lhs - base.lhs).abs() <= 1e-8);
        }
    }
}

#[test]
fn proof_identities_hold_across_the_canonical_family() {
    let worst = (0..1000)
        .map(|i| {
            thm8_proof_identities(&sample_acin(&mut SeededRng::new(500, i)))
                .unwrap()
                .max()
        })
        .fold(0.0, f64::max);
    assert!(worst <= 1e-8, "{worst:e}");
}

#[test]
fn summation_chsh_form_fails_only_where_expected() {
    let zero = named_state(NamedState::Zero).unwrap();
    let (lhs, rhs) = chsh_power_sum(&zero, 0, 2.0).unwrap();
    assert!(lhs > rhs);
    // The GHZ state satisfies it: 4 + 4 ≤ 8.
    let ghz = named_state(NamedState::Ghz).unwrap();
    let (lhs, rhs) = chsh_power_sum(&ghz, 0, 2.0).unwrap();
    assert!(lhs <= rhs + 1e-12);
}
