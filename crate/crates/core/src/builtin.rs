//! The odd/even instance: `X = ℕ ∪ {a, b}` with ℕ split into the blocks
//! `ODD` (index `n` standing for `2n - 1`) and `EVEN` (index `n` standing for
//! `2n`). A set is open iff it is
//!
//! * a subset of `ODD`, or
//! * a subset of ℕ containing all but finitely many odd numbers, or
//! * a cofinite subset of `X` meeting `{a, b}`.
//!
//! The maps `f` and `g` both send `2n - 1` to `2n`; `f` sends evens to `b`
//! and both atoms to `a`, `g` sends evens to `a` and both atoms to `b`.

use std::sync::Arc;

use crate::ifs::Ifs;
use crate::maps::{MapRule, PiecewiseMap};
use crate::setalg::{BlockId, GroundStructure, Point, SymbolicSet};
use crate::topology::{Clause, Primitive, Topology};

#[derive(Debug, Clone)]
pub struct OddEven {
    pub ground: Arc<GroundStructure>,
    pub topology: Topology,
    pub f: PiecewiseMap,
    pub g: PiecewiseMap,
}

impl Default for OddEven {
    fn default() -> Self {
        Self::new()
    }
}

impl OddEven {
    pub fn new() -> Self {
        let ground = GroundStructure::new(["a", "b"], ["ODD", "EVEN"]).expect("valid ground");
        let x = SymbolicSet::full(&ground);
        let odd_id = ground.block_id("ODD").unwrap();
        let even_id = ground.block_id("EVEN").unwrap();
        let odd = SymbolicSet::block(&ground, odd_id);
        let naturals = &odd | &SymbolicSet::block(&ground, even_id);
        let ab = &x - &naturals;
        let topology = Topology::new(
            &ground,
            vec![
                Clause::new("i", vec![Primitive::SubsetOf(odd.clone())]),
                Clause::new(
                    "ii",
                    vec![
                        Primitive::SubsetOf(naturals),
                        Primitive::CofiniteWithin(odd),
                    ],
                ),
                Clause::new(
                    "iii",
                    vec![Primitive::Meets(ab), Primitive::CofiniteWithin(x)],
                ),
            ],
        )
        .expect("valid topology");
        let a = ground.atom("a").unwrap();
        let b = ground.atom("b").unwrap();
        let map = |atoms_to: Point, evens_to: Point| {
            PiecewiseMap::new(
                &ground,
                vec![
                    MapRule::AtomToPoint(ground.atom_id("a").unwrap(), atoms_to),
                    MapRule::AtomToPoint(ground.atom_id("b").unwrap(), atoms_to),
                    MapRule::BlockToBlock(odd_id, even_id),
                    MapRule::BlockToConst(even_id, evens_to),
                ],
                vec![],
            )
            .expect("total map")
        };
        let f = map(a, b);
        let g = map(b, a);
        Self {
            ground,
            topology,
            f,
            g,
        }
    }

    pub fn ifs(&self) -> Ifs {
        Ifs::new(vec![self.f.clone(), self.g.clone()]).expect("nonempty ifs")
    }

    pub fn odd_id(&self) -> BlockId {
        self.ground.block_id("ODD").unwrap()
    }

    pub fn even_id(&self) -> BlockId {
        self.ground.block_id("EVEN").unwrap()
    }

    pub fn a(&self) -> Point {
        self.ground.atom("a").unwrap()
    }

    pub fn b(&self) -> Point {
        self.ground.atom("b").unwrap()
    }

    /// The odd number `2n - 1`.
    pub fn odd_pt(&self, n: u64) -> Point {
        Point::Elem(self.odd_id(), n)
    }

    /// The even number `2n`.
    pub fn even(&self, n: u64) -> Point {
        Point::Elem(self.even_id(), n)
    }

    pub fn x(&self) -> SymbolicSet {
        SymbolicSet::full(&self.ground)
    }

    pub fn odd(&self) -> SymbolicSet {
        SymbolicSet::block(&self.ground, self.odd_id())
    }

    pub fn even_set(&self) -> SymbolicSet {
        SymbolicSet::block(&self.ground, self.even_id())
    }

    /// `EVEN ∪ {a, b}`, the image of `X` under either map.
    pub fn even_ab(&self) -> SymbolicSet {
        &self.even_set() | &self.point_set(&[self.a(), self.b()])
    }

    pub fn point_set(&self, points: &[Point]) -> SymbolicSet {
        SymbolicSet::from_points(&self.ground, points.iter().copied()).expect("valid points")
    }

    /// `f` with evens sent back to odds (`2n ↦ 2n - 1`); it maps the closed
    /// set `X` onto `ℕ ∪ {a}`, which is not closed.
    pub fn broken_map(&self) -> PiecewiseMap {
        PiecewiseMap::new(
            &self.ground,
            vec![
                MapRule::AtomToPoint(self.ground.atom_id("a").unwrap(), self.a()),
                MapRule::AtomToPoint(self.ground.atom_id("b").unwrap(), self.a()),
                MapRule::BlockToBlock(self.odd_id(), self.even_id()),
                MapRule::BlockToBlock(self.even_id(), self.odd_id()),
            ],
            vec![],
        )
        .expect("total map")
    }

    /// Every set is open.
    pub fn discrete_topology(&self) -> Topology {
        Topology::new(
            &self.ground,
            vec![Clause::new("any", vec![Primitive::SubsetOf(self.x())])],
        )
        .expect("valid topology")
    }
}
