use std::sync::Arc;

use ifslab_core::builtin::OddEven;
use ifslab_core::sample;
use ifslab_core::setalg::{truncation_oracle, GroundStructure, SymbolicSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const N: u64 = 64;

fn ground() -> Arc<GroundStructure> {
    OddEven::new().ground
}

fn set_from(g: &Arc<GroundStructure>, seed: u64) -> SymbolicSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample::random_set(g, &mut rng, 12, 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn boolean_laws(sa in any::<u64>(), sb in any::<u64>(), sc in any::<u64>()) {
        let g = ground();
        let (a, b, c) = (set_from(&g, sa), set_from(&g, sb), set_from(&g, sc));
        prop_assert_eq!(&a | &b, &b | &a);
        prop_assert_eq!(&a & &b, &b & &a);
        prop_assert_eq!(&(&a | &b) | &c, &a | &(&b | &c));
        prop_assert_eq!(&(&a & &b) & &c, &a & &(&b & &c));
        prop_assert_eq!(&a & &(&b | &c), &(&a & &b) | &(&a & &c));
        prop_assert_eq!(&a | &(&b & &c), &(&a | &b) & &(&a | &c));
        prop_assert_eq!(!&(&a | &b), &!&a & &!&b);
        prop_assert_eq!(!&(&a & &b), &!&a | &!&b);
        prop_assert_eq!(!&!&a, a.clone());
        prop_assert_eq!(&a - &b, &a & &!&b);
        prop_assert_eq!(&a | &SymbolicSet::empty(&g), a.clone());
        prop_assert_eq!(&a & &SymbolicSet::full(&g), a.clone());
    }

    #[test]
    fn equality_matches_truncation(sa in any::<u64>(), sb in any::<u64>()) {
        let g = ground();
        let (a, b) = (set_from(&g, sa), set_from(&g, sb));
        let same = truncation_oracle(&a, N).unwrap() == truncation_oracle(&b, N).unwrap();
        prop_assert_eq!(a.equals(&b).unwrap(), same);
        prop_assert_eq!(a == b, same);
    }

    #[test]
    fn operations_commute_with_truncation(sa in any::<u64>(), sb in any::<u64>(), extra in 0u64..40) {
        let g = ground();
        let (a, b) = (set_from(&g, sa), set_from(&g, sb));
        let n = a.max_index().max(b.max_index()) + 1 + extra;
        let ta = truncation_oracle(&a, n).unwrap();
        let tb = truncation_oracle(&b, n).unwrap();
        prop_assert_eq!(truncation_oracle(&(&a | &b), n).unwrap(), ta.union(&tb));
        prop_assert_eq!(truncation_oracle(&(&a & &b), n).unwrap(), ta.intersect(&tb));
        prop_assert_eq!(truncation_oracle(&(&a - &b), n).unwrap(), ta.difference(&tb));
        prop_assert_eq!(truncation_oracle(&!&a, n).unwrap(), ta.complement());
        prop_assert_eq!(a.is_empty(), ta.is_empty());
    }

    #[test]
    fn finiteness_is_per_block(sa in any::<u64>()) {
        let g = ground();
        let a = set_from(&g, sa);
        prop_assert_eq!(a.is_finite(), a.parts().iter().all(|p| !p.is_cofinite()));
        prop_assert_eq!(a.elements().is_some(), a.is_finite());
    }
}

#[test]
fn fuzz_harness_is_clean() {
    let out = ifslab_core::setalg::oracle::fuzz(&ground(), 10_000, N, 7).unwrap();
    assert!(out.mismatches.is_empty(), "{:?}", out.mismatches.first());
}

#[test]
fn three_block_ground() {
    let g = GroundStructure::new(["p"], ["A", "B", "C"]).unwrap();
    let out = ifslab_core::setalg::oracle::fuzz(&g, 2_000, 32, 11).unwrap();
    assert!(out.mismatches.is_empty());
}
