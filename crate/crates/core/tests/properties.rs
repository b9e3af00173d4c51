mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn characters_are_weyl_invariant(seed in any::<u64>()) {
        common::weyl_invariance(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn restriction_conserves_dimension(seed in any::<u64>()) {
        common::restriction_conserves_dim(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn dominance_is_a_partial_order(seed in any::<u64>()) {
        common::dominance_laws(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn steinberg_recomposes(seed in any::<u64>()) {
        common::steinberg_round_trip(seed).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn weyl_decomposition_round_trips(seed in any::<u64>()) {
        common::decompose_round_trip(seed).map_err(TestCaseError::fail)?;
    }
}
