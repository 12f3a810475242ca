//! Seeded random generators for sets and maps, shared by the fuzzing
//! harnesses and the randomized supplements of bounded checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::maps::{MapRule, PiecewiseMap};
use crate::setalg::{BlockPart, GroundStructure, Point, SymbolicSet};

fn random_indices<R: Rng>(rng: &mut R, max_index: u64, max_literals: usize) -> Vec<u64> {
    let n = rng.gen_range(0..=max_literals);
    (0..n)
        .map(|_| rng.gen_range(1..=max_index.max(1)))
        .collect()
}

/// A set whose literals are all `<= max_index`, with at most `max_literals`
/// literals per block.
pub fn random_set<R: Rng>(
    ground: &Arc<GroundStructure>,
    rng: &mut R,
    max_index: u64,
    max_literals: usize,
) -> SymbolicSet {
    let atoms = (0..ground.atom_count())
        .map(|_| rng.gen_bool(0.5))
        .collect();
    let parts = (0..ground.block_count())
        .map(|_| {
            let idx = random_indices(rng, max_index, max_literals);
            if rng.gen_bool(0.5) {
                BlockPart::finite(idx).unwrap()
            } else {
                BlockPart::cofinite(idx).unwrap()
            }
        })
        .collect();
    SymbolicSet::from_parts(ground, atoms, parts).unwrap()
}

pub fn random_point<R: Rng>(ground: &GroundStructure, rng: &mut R, max_index: u64) -> Point {
    let points = ground.points_up_to(max_index);
    *points.choose(rng).expect("ground structure is nonempty")
}

/// A total piecewise map with random rules and up to `max_overrides`
/// overrides, every literal `<= max_index`.
pub fn random_map<R: Rng>(
    ground: &Arc<GroundStructure>,
    rng: &mut R,
    max_index: u64,
    max_overrides: usize,
) -> PiecewiseMap {
    let mut rules = Vec::new();
    for a in ground.atom_ids() {
        rules.push(MapRule::AtomToPoint(
            a,
            random_point(ground, rng, max_index),
        ));
    }
    for b in ground.block_ids() {
        if rng.gen_bool(0.6) {
            let dst = ground.block_ids().collect::<Vec<_>>();
            rules.push(MapRule::BlockToBlock(b, *dst.choose(rng).unwrap()));
        } else {
            rules.push(MapRule::BlockToConst(
                b,
                random_point(ground, rng, max_index),
            ));
        }
    }
    let mut overrides = Vec::new();
    if ground.block_count() > 0 {
        for _ in 0..rng.gen_range(0..=max_overrides) {
            let b = crate::setalg::BlockId(rng.gen_range(0..ground.block_count()));
            let i = rng.gen_range(1..=max_index.max(1));
            if overrides.iter().any(|&(ob, oi, _)| ob == b && oi == i) {
                continue;
            }
            overrides.push((b, i, random_point(ground, rng, max_index)));
        }
    }
    PiecewiseMap::new(ground, rules, overrides).expect("generated map is total")
}
