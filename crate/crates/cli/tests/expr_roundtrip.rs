use std::collections::BTreeMap;

use ifslab::expr::{parse_point, parse_set};
use ifslab_core::builtin::OddEven;
use ifslab_core::sample;
use ifslab_core::setalg::GroundStructure;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn rendered_sets_parse_back(seed in any::<u64>()) {
        let g = OddEven::new().ground;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::random_set(&g, &mut rng, 30, 5);
        prop_assert_eq!(parse_set(&a.to_string(), &g, &BTreeMap::new()).unwrap(), a);
    }

    #[test]
    fn rendered_points_parse_back(seed in any::<u64>()) {
        let g = GroundStructure::new(["p", "q", "r"], ["A", "B_2"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = sample::random_point(&g, &mut rng, 1000);
        prop_assert_eq!(parse_point(&g.label(&p), &g).unwrap(), p);
    }

    #[test]
    fn operators_match_set_algebra(sa in any::<u64>(), sb in any::<u64>()) {
        let g = OddEven::new().ground;
        let mut rng = ChaCha8Rng::seed_from_u64(sa ^ sb.rotate_left(7));
        let a = sample::random_set(&g, &mut rng, 12, 3);
        let b = sample::random_set(&g, &mut rng, 12, 3);
        let names = BTreeMap::from([("A".to_string(), a.clone()), ("B".to_string(), b.clone())]);
        let p = |s: &str| parse_set(s, &g, &names).unwrap();
        prop_assert_eq!(p("A union B"), &a | &b);
        prop_assert_eq!(p("A inter B"), &a & &b);
        prop_assert_eq!(p("A minus B"), &a - &b);
        prop_assert_eq!(p("complement(A) & B"), &!&a & &b);
        prop_assert_eq!(p(&format!("({a}) - ({b})")), &a - &b);
    }

    #[test]
    fn garbage_never_panics(s in "[ -~]{0,40}") {
        let g = OddEven::new().ground;
        if let Err(e) = parse_set(&s, &g, &BTreeMap::new()) {
            prop_assert!(e.column >= 1 && e.column <= s.chars().count() + 1);
        }
    }
}
