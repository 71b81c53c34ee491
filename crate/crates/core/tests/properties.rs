mod common;

use ionfield::fock::{density_block, qudit_subspace_deficit};
use ionfield::gaussian::{
    condition_homodyne, fidelity, fidelity_via_matrix_sqrt, log_negativity, pt_symplectic_spectrum,
    symplectic_spectrum,
};
use ionfield::numerics::{denman_beavers, hafnian, hafnian_repeated, principal_sqrt};
use ionfield::Quadrature;
use nalgebra::DMatrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_invariant_under_symplectics(cm in common::mixed_state(3), layers in prop::collection::vec(common::layer(3), 1..6)) {
        let s = common::symplectic_from(3, &[0, 1, 2], &layers);
        let before = symplectic_spectrum(&cm).unwrap();
        let after = symplectic_spectrum(&s.apply(&cm).unwrap()).unwrap();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-8 * a, "{a} vs {b}");
        }
    }

    #[test]
    fn transformed_states_stay_physical(cm in common::mixed_state(3)) {
        prop_assert!(cm.is_physical(1e-9).unwrap());
        prop_assert!(symplectic_spectrum(&cm).unwrap().iter().all(|&nu| nu > 1.0 - 1e-9));
    }

    #[test]
    fn negativity_is_symmetric_in_regions(cm in common::mixed_state(4)) {
        let ab = log_negativity(&cm, &[0], &[2, 3]).unwrap();
        let ba = log_negativity(&cm, &[2, 3], &[0]).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() < 1e-9 * (1.0 + ab));
    }

    #[test]
    fn transposing_either_side_gives_same_spectrum(cm in common::mixed_state(2)) {
        let mut a = pt_symplectic_spectrum(&cm, &[0]).unwrap();
        let mut b = pt_symplectic_spectrum(&cm, &[1]).unwrap();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-9 * x.max(1.0));
        }
    }

    #[test]
    fn fidelity_routes_agree_on_mixed_states(a in common::mixed_state(2), b in common::mixed_state(2)) {
        let spectral = fidelity(&a, &b).unwrap();
        let explicit = fidelity_via_matrix_sqrt(&a, &b).unwrap();
        prop_assert!((spectral - explicit).abs() < 1e-7, "{spectral} vs {explicit}");
    }

    #[test]
    fn fidelity_invariant_under_common_symplectic(
        a in common::mixed_state(2),
        b in common::mixed_state(2),
        layers in prop::collection::vec(common::layer(2), 1..5),
    ) {
        let s = common::symplectic_from(2, &[0, 1], &layers);
        let before = fidelity(&a, &b).unwrap();
        let after = fidelity(&s.apply(&a).unwrap(), &s.apply(&b).unwrap()).unwrap();
        prop_assert!((before - after).abs() < 1e-8);
    }

    #[test]
    fn pure_states_conditioned_stay_pure(cm in common::pure_state(5), q in any::<bool>()) {
        let q = if q { Quadrature::Phi } else { Quadrature::Pi };
        let out = condition_homodyne(&cm, &[1, 3], q).unwrap();
        prop_assert_eq!(out.n_modes(), 3);
        prop_assert!(out.is_pure(1e-8));
    }

    #[test]
    fn hafnian_matches_recursion(b in prop_oneof![Just(2usize), Just(4), Just(6), Just(8)].prop_flat_map(common::symmetric)) {
        let idx: Vec<usize> = (0..b.nrows()).collect();
        let want = common::hafnian_recursive(&b, &idx);
        prop_assert!((hafnian(&b).unwrap() - want).abs() < 1e-12 * (1.0 + want.abs()));
    }

    #[test]
    fn repeated_hafnian_of_unit_reps_is_plain(b in prop_oneof![Just(2usize), Just(4), Just(6)].prop_flat_map(common::symmetric)) {
        let reps = vec![1; b.nrows()];
        let plain = hafnian(&b).unwrap();
        prop_assert!((hafnian_repeated(&b, &reps).unwrap() - plain).abs() < 1e-12 * (1.0 + plain.abs()));
    }

    #[test]
    fn square_roots_agree(g in common::symmetric(4)) {
        let spd = &g * g.transpose() + DMatrix::identity(4, 4);
        let a = principal_sqrt(&spd).unwrap();
        let b = denman_beavers(&spd).unwrap();
        prop_assert!((&a - &b).amax() < 1e-9 * spd.amax());
        prop_assert!((&a * &a - &spd).amax() < 1e-10 * spd.amax());
    }

    #[test]
    fn density_block_is_a_subnormalized_state(cm in common::pure_state(2)) {
        let rho = density_block(&cm, 3).unwrap();
        let trace = rho.trace();
        prop_assert!(trace > 0.0 && trace <= 1.0 + 1e-10);
        prop_assert!((&rho - rho.transpose()).amax() < 1e-12);
        let deficit = qudit_subspace_deficit(&cm, 3).unwrap();
        prop_assert!((1.0 - trace - deficit).abs() < 1e-10);
    }

    #[test]
    fn disentangling_matches_exponential((v0, vp, vm) in (-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5)) {
        let e = common::generator(v0, vp, vm).exp();
        prop_assume!(e[(1, 1)] > 0.05);
        let (t0, tp, tm) = ionfield::fock::tmsv_disentangle(v0, vp, vm).unwrap();
        prop_assert!((common::ordered_product(t0, tp, tm) - e).amax() < 1e-10);
    }
}
