//! Property tests over randomized algebra parameters.

use num_rational::Rational64;
use proptest::prelude::*;

use phasekit::algebra::structure_value;
use phasekit::linalg::cis;
use phasekit::mub::{gauss_sum, GaussSumParams};
use phasekit::phase::{
    build_weights, closure_residual, default_theta_grid, evolve, overlap, phase_overlap_formula,
    phase_states, theta_closure_residual, vs_phase_states,
};
use phasekit::{
    commutator_residual, Dimension, KappaParam, Representation, StructureFunction, MATRIX_TOL,
};

/// Any kappa the representation machinery accepts: nonnegative rationals
/// with small terms plus the finite-regime values -1/(d-1).
fn arb_kappa() -> impl Strategy<Value = KappaParam> {
    prop_oneof![
        (0i64..=4, 1i64..=5).prop_map(|(n, d)| KappaParam::new(n, d).unwrap()),
        (1i64..=9).prop_map(|q| KappaParam::new(-1, q).unwrap()),
    ]
}

/// A kappa together with an admissible representation size.
fn arb_kappa_size() -> impl Strategy<Value = (KappaParam, usize)> {
    arb_kappa().prop_flat_map(|k| {
        let top = match k.dimension().unwrap() {
            Dimension::Finite(d) => d,
            Dimension::Infinite => 9,
        };
        (Just(k), 1..=top)
    })
}

proptest! {
    #[test]
    fn recurrence_holds_exactly(kappa in arb_kappa(), extra in 0usize..20) {
        let n_max = match kappa.dimension().unwrap() {
            Dimension::Finite(d) => (d - 1).min(extra + 1),
            Dimension::Infinite => extra + 1,
        };
        let f = StructureFunction::new(kappa, n_max).unwrap();
        for n in 0..n_max {
            let increment = Rational64::from_integer(1)
                + kappa.as_rational() * Rational64::from_integer(2 * n as i64);
            prop_assert_eq!(f.value(n + 1) - f.value(n), increment);
        }
        // positivity and the nondegenerate ground level
        for n in 1..=n_max {
            prop_assert!(f.value(n) > f.value(0));
        }
    }

    #[test]
    fn finite_spectrum_is_symmetric(d in 2usize..40) {
        let kappa = KappaParam::from_dimension(d).unwrap();
        let f = StructureFunction::new(kappa, d - 1).unwrap();
        for n in 1..d {
            prop_assert_eq!(f.value(n), structure_value(kappa, d - n));
        }
    }

    #[test]
    fn ladder_identities_hold_at_any_phi(
        (kappa, size) in arb_kappa_size(),
        phi in -3.0f64..3.0,
    ) {
        let rep = Representation::truncated(kappa, phi, size).unwrap();
        prop_assert!(rep.adjointness_residual() < 1e-14);
        prop_assert!(rep.hamiltonian_residual() < MATRIX_TOL);
        let report = commutator_residual(&rep);
        prop_assert!(report.residual < MATRIX_TOL);
        prop_assert!(report.trace_magnitude < MATRIX_TOL);
    }

    #[test]
    fn phase_states_are_equiprobable_orthonormal_and_complete(
        (kappa, size) in arb_kappa_size(),
        phi in -3.0f64..3.0,
    ) {
        let states = phase_states(size, kappa, phi).unwrap();
        let target = 1.0 / (size as f64).sqrt();
        for st in &states {
            for a in st.amplitudes() {
                prop_assert!((a.norm() - target).abs() < MATRIX_TOL);
            }
        }
        for (m, a) in states.iter().enumerate() {
            for (mp, b) in states.iter().enumerate() {
                let expected = if m == mp { 1.0 } else { 0.0 };
                prop_assert!((overlap(a, b).unwrap().norm() - expected).abs() < MATRIX_TOL);
            }
        }
        prop_assert!(closure_residual(&states) < MATRIX_TOL);
    }

    #[test]
    fn evolving_shifts_phi(
        (kappa, size) in arb_kappa_size(),
        phi in -3.0f64..3.0,
        t in -5.0f64..5.0,
    ) {
        let states = phase_states(size, kappa, phi).unwrap();
        let rebuilt = phase_states(size, kappa, phi + t).unwrap();
        for (st, rb) in states.iter().zip(rebuilt.iter()) {
            prop_assert!(evolve(st, t).max_diff(rb) < MATRIX_TOL);
        }
    }

    #[test]
    fn evolving_weighted_states_shifts_phi(
        (kappa, size) in arb_kappa_size(),
        phi in -3.0f64..3.0,
        t in -5.0f64..5.0,
    ) {
        let weights = build_weights(kappa, size).unwrap();
        let before = vs_phase_states(&Representation::truncated(kappa, phi, size).unwrap(), &weights).unwrap();
        let after = vs_phase_states(&Representation::truncated(kappa, phi + t, size).unwrap(), &weights).unwrap();
        for (st, rb) in before.iter().zip(after.iter()) {
            prop_assert!(evolve(st, t).max_diff(rb) < MATRIX_TOL);
        }
    }

    #[test]
    fn overlap_formula_is_an_oracle_for_inner_products(
        (kappa, size) in arb_kappa_size(),
        phi in -2.0f64..2.0,
        phi_prime in -2.0f64..2.0,
    ) {
        let a = phase_states(size, kappa, phi).unwrap();
        let b = phase_states(size, kappa, phi_prime).unwrap();
        for (m, sa) in a.iter().enumerate() {
            for (mp, sb) in b.iter().enumerate() {
                let direct = overlap(sa, sb).unwrap();
                let formula = phase_overlap_formula(size, kappa, m, phi, mp, phi_prime).unwrap();
                prop_assert!((direct - formula).norm() < MATRIX_TOL);
            }
        }
    }

    #[test]
    fn gauss_magnitude_for_prime_w(
        w_idx in 0usize..6,
        u_raw in 1i64..50,
        v_half in -10i64..10,
    ) {
        let w = [2i64, 3, 5, 7, 11, 13][w_idx];
        let u = u_raw;
        prop_assume!(u % w != 0);
        // force uw + v even
        let v = 2 * v_half + if (u * w) % 2 == 0 { 0 } else { 1 };
        prop_assume!((u * w + v) % 2 == 0);
        let s = gauss_sum(GaussSumParams::new(u, v, w).unwrap());
        prop_assert!((s.norm() - (w as f64).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn theta_grid_closure_is_exact_for_any_large_enough_grid(
        kappa_num in 0i64..=3,
        kappa_den in 1i64..=4,
        phi in -2.0f64..2.0,
        n_max in 1usize..12,
        pad in 1usize..20,
    ) {
        let kappa = KappaParam::new(kappa_num, kappa_den).unwrap();
        let residual = theta_closure_residual(kappa, phi, n_max, n_max + pad).unwrap();
        prop_assert!(residual < MATRIX_TOL);
    }

    #[test]
    fn representation_json_round_trips(
        (kappa, size) in arb_kappa_size(),
        phi in -3.0f64..3.0,
    ) {
        let rep = Representation::truncated(kappa, phi, size).unwrap();
        let parsed = Representation::from_json(&rep.to_json()).unwrap();
        prop_assert_eq!(parsed.dim(), rep.dim());
        prop_assert!(parsed.adjointness_residual() < 1e-14);
        prop_assert!(commutator_residual(&parsed).residual < MATRIX_TOL);
        // byte-identical re-serialization
        prop_assert_eq!(
            serde_json::to_string(&rep.to_json()).unwrap(),
            serde_json::to_string(&parsed.to_json()).unwrap()
        );
    }

    #[test]
    fn evolve_composes_like_phase_multiplication(
        (kappa, size) in arb_kappa_size(),
        t1 in -2.0f64..2.0,
        t2 in -2.0f64..2.0,
    ) {
        let st = &phase_states(size, kappa, 0.4).unwrap()[size / 2];
        let two_step = evolve(&evolve(st, t1), t2);
        let one_step = evolve(st, t1 + t2);
        prop_assert!(two_step.max_diff(&one_step) < MATRIX_TOL);
        // a full revolution of every phase is the identity on amplitudes
        let zero = evolve(st, 0.0);
        prop_assert!(zero.max_diff(st) == 0.0);
        let _ = cis(0.0);
    }
}
