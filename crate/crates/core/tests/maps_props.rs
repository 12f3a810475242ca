use ifslab_core::builtin::OddEven;
use ifslab_core::maps::{compose, pointwise_agreement, space_chain, PiecewiseMap};
use ifslab_core::sample;
use ifslab_core::setalg::SymbolicSet;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fixture(
    seed: u64,
) -> (
    OddEven,
    PiecewiseMap,
    PiecewiseMap,
    SymbolicSet,
    SymbolicSet,
) {
    let m = OddEven::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = sample::random_map(&m.ground, &mut rng, 10, 3);
    let g = sample::random_map(&m.ground, &mut rng, 10, 3);
    let a = sample::random_set(&m.ground, &mut rng, 10, 4);
    let b = sample::random_set(&m.ground, &mut rng, 10, 4);
    (m, f, g, a, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn image_is_additive_and_monotone(seed in any::<u64>()) {
        let (_, f, _, a, b) = fixture(seed);
        let fa = f.image(&a).unwrap();
        let fb = f.image(&b).unwrap();
        prop_assert_eq!(f.image(&(&a | &b)).unwrap(), &fa | &fb);
        prop_assert!(fa.is_subset(&f.image(&(&a | &b)).unwrap()).unwrap());
    }

    #[test]
    fn image_preimage_adjunction(seed in any::<u64>()) {
        let (_, f, _, a, b) = fixture(seed);
        prop_assert!(a.is_subset(&f.preimage(&f.image(&a).unwrap()).unwrap()).unwrap());
        prop_assert!(f.image(&f.preimage(&b).unwrap()).unwrap().is_subset(&b).unwrap());
        // E ⊆ f⁻¹[B] iff f[E] ⊆ B
        let inside = a.is_subset(&f.preimage(&b).unwrap()).unwrap();
        prop_assert_eq!(inside, f.image(&a).unwrap().is_subset(&b).unwrap());
    }

    #[test]
    fn composition_matches_nested_images(seed in any::<u64>()) {
        let (m, f, g, a, _) = fixture(seed);
        let fg = compose(&f, &g).unwrap();
        prop_assert_eq!(fg.image(&a).unwrap(), f.image(&g.image(&a).unwrap()).unwrap());
        for p in m.ground.points_up_to(20) {
            prop_assert_eq!(fg.apply(&p).unwrap(), f.apply(&g.apply(&p).unwrap()).unwrap());
        }
        let id = PiecewiseMap::identity(&m.ground);
        prop_assert_eq!(compose(&id, &f).unwrap(), f.clone());
        prop_assert_eq!(compose(&f, &id).unwrap(), f);
    }

    #[test]
    fn agrees_with_pointwise_oracle(seed in any::<u64>()) {
        let (_, f, _, a, _) = fixture(seed);
        prop_assert!(pointwise_agreement(&f, &a, 64).unwrap());
    }

    #[test]
    fn chains_decrease(seed in any::<u64>()) {
        let (_, f, _, _, _) = fixture(seed);
        let chain = space_chain(&f, 64).unwrap();
        for w in chain.entries.windows(2) {
            prop_assert!(w[1].is_subset(&w[0]).unwrap());
        }
    }
}

#[test]
fn paper_maps_agree_with_oracle_everywhere() {
    let m = OddEven::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for map in [&m.f, &m.g] {
        for _ in 0..50 {
            let a = sample::random_set(&m.ground, &mut rng, 20, 4);
            assert!(pointwise_agreement(map, &a, 64).unwrap());
        }
    }
}
