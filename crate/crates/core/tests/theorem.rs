//! Both directions of the congruence characterization, cross-checked against
//! the direct solver and, over GF(3), exhaustive search.

use proptest::prelude::*;
use starsylv::oracle::{brute_force_consistency, DEFAULT_CAP};
use starsylv::roth::{self, pairspace, PairSpaceKind};
use starsylv::{
    gen_consistent, gen_perturbed, vecsolve, FieldTag, GenParams, StarMode, StarSylvesterSystem,
};

fn field_and_mode() -> impl Strategy<Value = (FieldTag, StarMode)> {
    prop_oneof![
        Just((FieldTag::Rationals, StarMode::Transpose)),
        Just((FieldTag::GaussianRationals, StarMode::Transpose)),
        Just((FieldTag::GaussianRationals, StarMode::ConjugateTranspose)),
        (prop_oneof![Just(3u64), Just(5), Just(7)])
            .prop_map(|p| (FieldTag::prime(p).unwrap(), StarMode::Transpose)),
    ]
}

/// A planted system, perturbed or not.
fn system() -> impl Strategy<Value = (StarSylvesterSystem, bool)> {
    (
        field_and_mode(),
        1usize..=2,
        1usize..=2,
        1usize..=2,
        any::<u64>(),
        any::<bool>(),
    )
        .prop_map(|((tag, mode), m, n, ell, seed, perturb)| {
            let (sys, _) = gen_consistent(&GenParams::new(tag, mode, m, n, ell, seed)).unwrap();
            if perturb {
                (gen_perturbed(&sys, seed, 3), true)
            } else {
                (sys, false)
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solver_extraction_and_witness_agree((sys, perturbed) in system()) {
        let verdict = vecsolve::solve(&sys);
        let extracted = roth::extract_solution(&sys).unwrap();
        prop_assert_eq!(verdict.is_consistent(), extracted.is_some());
        if !perturbed {
            prop_assert!(verdict.is_consistent());
        }
        if let Some(x) = extracted {
            prop_assert!(sys.is_solution(&x).unwrap());
            let w = roth::witness_from_solution(&sys, &x).unwrap();
            prop_assert!(w.accepted());
            let claims = roth::check_claims(&sys, Some(&w.s)).unwrap();
            prop_assert!(claims.all_hold());
            prop_assert!(claims.target_in_image_d);
        } else {
            let claims = roth::check_claims(&sys, None).unwrap();
            prop_assert!(claims.all_hold());
            prop_assert!(!claims.target_in_image_d);
        }
    }

    #[test]
    fn pair_space_bases_satisfy_block_equations((sys, _) in system()) {
        for (kind, homogeneous) in [(PairSpaceKind::D, false), (PairSpaceKind::D0, true)] {
            let basis = roth::pair_space(&sys, kind).unwrap();
            for pair in &basis.basis {
                prop_assert!(pairspace::satisfies_block_equations(&sys, pair, homogeneous).unwrap());
            }
        }
    }

    #[test]
    fn gf3_exhaustive_search_agrees(m in 1usize..=2, n in 1usize..=2, ell in 1usize..=2, seed in any::<u64>(), perturb in any::<bool>()) {
        let tag = FieldTag::prime(3).unwrap();
        let (sys, _) = gen_consistent(&GenParams::new(tag, StarMode::Transpose, m, n, ell, seed)).unwrap();
        let sys = if perturb { gen_perturbed(&sys, seed, 9) } else { sys };
        let brute = brute_force_consistency(&sys, DEFAULT_CAP).unwrap();
        let verdict = vecsolve::solve(&sys);
        prop_assert_eq!(brute.consistent, verdict.is_consistent());
        prop_assert_eq!(brute.consistent, roth::extract_solution(&sys).unwrap().is_some());
        if let Some(set) = verdict.solution_set() {
            prop_assert_eq!(
                num_bigint::BigUint::from(brute.solutions),
                vecsolve::solution_count_gf(&sys, set).unwrap()
            );
        }
    }
}
