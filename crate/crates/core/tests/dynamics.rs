use std::collections::BTreeSet;

use ifslab_core::builtin::OddEven;
use ifslab_core::hyperspace::{admissible_region, BasisNeighborhood};
use ifslab_core::ifs::{ContractivityVerdict, Ifs, Word};
use ifslab_core::sample;
use ifslab_core::setalg::SymbolicSet;
use ifslab_core::Bounds;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fuzzed_ifs(seed: u64, maps: usize) -> Ifs {
    let m = OddEven::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ifs::new(
        (0..maps)
            .map(|_| sample::random_map(&m.ground, &mut rng, 6, 2))
            .collect(),
    )
    .unwrap()
}

fn brute_force(s: &Ifs, n: usize) -> BTreeSet<SymbolicSet> {
    let x = SymbolicSet::full(s.ground());
    Word::all(s.len(), n)
        .unwrap()
        .iter()
        .map(|w| s.word_image(w, &x).unwrap())
        .collect()
}

#[test]
fn depth_images_match_explicit_words() {
    let mut systems = vec![OddEven::new().ifs()];
    systems.push(fuzzed_ifs(101, 3));
    systems.push(fuzzed_ifs(202, 3));
    for s in &systems {
        for n in 0..=4 {
            assert_eq!(*s.depth_images(n).images, brute_force(s, n), "depth {n}");
        }
    }
}

#[test]
fn prefix_containment() {
    let s = fuzzed_ifs(9, 3);
    let x = SymbolicSet::full(s.ground());
    for w in Word::all(3, 4).unwrap() {
        let full = s.word_image(&w, &x).unwrap();
        for k in 0..w.len() {
            assert!(full
                .is_subset(&s.word_image(&w.prefix(k), &x).unwrap())
                .unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn fiber_law(seed in any::<u64>()) {
        let s = fuzzed_ifs(seed, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let k = sample::random_set(s.ground(), &mut rng, 8, 3);
        let e = sample::random_set(s.ground(), &mut rng, 8, 3);
        let e_max = admissible_region(&s, &k).unwrap();
        if !e.is_empty() {
            let fits = s.hutchinson(&e).unwrap().is_subset(&k).unwrap();
            prop_assert_eq!(fits, e.is_subset(&e_max).unwrap());
        }
    }

    #[test]
    fn hutchinson_is_monotone(seed in any::<u64>()) {
        let s = fuzzed_ifs(seed, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x55);
        let k = sample::random_set(s.ground(), &mut rng, 8, 3);
        let l = &k | &sample::random_set(s.ground(), &mut rng, 8, 3);
        if !k.is_empty() {
            prop_assert!(s.hutchinson(&k).unwrap().is_subset(&s.hutchinson(&l).unwrap()).unwrap());
        }
    }

    #[test]
    fn neighborhood_membership_is_monotone(seed in any::<u64>()) {
        let m = OddEven::new();
        let t = &m.topology;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let opens: Vec<SymbolicSet> = t.small_opens_containing(&m.point_set(&[m.a()]))
            .into_iter()
            .chain([m.odd(), m.x()])
            .collect();
        let pick = |rng: &mut ChaCha8Rng| opens[rand::Rng::gen_range(rng, 0..opens.len())].clone();
        let v0 = pick(&mut rng);
        let vs: Vec<SymbolicSet> = (0..3).map(|_| pick(&mut rng)).collect();
        let n = BasisNeighborhood::new(t, v0, vs).unwrap();
        let k = sample::random_set(&m.ground, &mut rng, 8, 2);
        if !k.is_empty() && n.contains(&k).unwrap() {
            for keep in [vec![], vec![0], vec![1, 2], vec![0, 2]] {
                prop_assert!(n.with_subset(&keep).contains(&k).unwrap());
            }
        }
    }
}

#[test]
fn contractive_systems_have_at_most_one_fixed_point() {
    let m = OddEven::new();
    let t = &m.topology;
    let bounds = Bounds {
        max_exceptions: 2,
        max_index: 4,
        samples: 0,
        ..Bounds::default()
    };
    let mut seen = 0;
    for seed in 0..60 {
        let s = fuzzed_ifs(seed, 2);
        if let ContractivityVerdict::Certified { depth } =
            s.contractivity_certificate(t, 16).unwrap()
        {
            assert!(s.depth_images(depth).all_singletons());
            let fixed = s.fixed_point_search(t, &bounds).unwrap();
            assert!(fixed.len() <= 1, "seed {seed}: {fixed:?}");
            seen += 1;
        }
    }
    assert!(seen > 0);
}
