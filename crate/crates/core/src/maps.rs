//! Total piecewise self-maps of the ground space.
//!
//! A map sends each atom to a point and each block either to a single point
//! or onto another block keeping the index, with finitely many per-index
//! overrides. The class is closed under composition.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::Bounds;
use crate::enumerate::ShapeGrammar;
use crate::error::{LabError, Result};
use crate::sample;
use crate::setalg::{
    same_ground, truncation_oracle, AtomId, BlockId, BlockPart, GroundStructure, Point,
    SymbolicSet, Truncation,
};
use crate::topology::Topology;

/// One case arm of a piecewise map, as written in a definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapRule {
    AtomToPoint(AtomId, Point),
    BlockToConst(BlockId, Point),
    /// Element `i` of the source block goes to element `i` of the destination.
    BlockToBlock(BlockId, BlockId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BlockRule {
    Const(Point),
    ToBlock(BlockId),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiecewiseMap {
    ground: Arc<GroundStructure>,
    atom_rules: Vec<Point>,
    block_rules: Vec<BlockRule>,
    overrides: BTreeMap<(BlockId, u64), Point>,
}

impl PiecewiseMap {
    /// Every atom and every block needs exactly one rule; override keys must
    /// be distinct. Overrides that agree with the block rule are dropped.
    pub fn new(
        ground: &Arc<GroundStructure>,
        rules: Vec<MapRule>,
        overrides: Vec<(BlockId, u64, Point)>,
    ) -> Result<Self> {
        let mut atom_rules: Vec<Option<Point>> = vec![None; ground.atom_count()];
        let mut block_rules: Vec<Option<BlockRule>> = vec![None; ground.block_count()];
        for rule in rules {
            let (slot_taken, name) = match rule {
                MapRule::AtomToPoint(a, t) => {
                    ground.check_point(&Point::Atom(a))?;
                    ground.check_point(&t)?;
                    let taken = atom_rules[a.0].replace(t).is_some();
                    (taken, ground.atom_name(a).to_string())
                }
                MapRule::BlockToConst(b, t) => {
                    check_block(ground, b)?;
                    ground.check_point(&t)?;
                    let taken = block_rules[b.0].replace(BlockRule::Const(t)).is_some();
                    (taken, ground.block_name(b).to_string())
                }
                MapRule::BlockToBlock(b, d) => {
                    check_block(ground, b)?;
                    check_block(ground, d)?;
                    let taken = block_rules[b.0].replace(BlockRule::ToBlock(d)).is_some();
                    (taken, ground.block_name(b).to_string())
                }
            };
            if slot_taken {
                return Err(LabError::NotTotal(format!(
                    "`{name}` has more than one rule"
                )));
            }
        }
        let atom_rules = atom_rules
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    LabError::NotTotal(format!(
                        "no rule for atom `{}`",
                        ground.atom_name(AtomId(i))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let block_rules = block_rules
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or_else(|| {
                    LabError::NotTotal(format!(
                        "no rule for block `{}`",
                        ground.block_name(BlockId(i))
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ov = BTreeMap::new();
        for (b, i, t) in overrides {
            let key = Point::Elem(b, i);
            ground.check_point(&key)?;
            ground.check_point(&t)?;
            if ov.insert((b, i), t).is_some() {
                return Err(LabError::DuplicateOverride(ground.label(&key)));
            }
        }
        Ok(Self {
            ground: ground.clone(),
            atom_rules,
            block_rules,
            overrides: ov,
        }
        .normalized())
    }

    pub fn identity(ground: &Arc<GroundStructure>) -> Self {
        Self {
            ground: ground.clone(),
            atom_rules: ground.atom_ids().map(Point::Atom).collect(),
            block_rules: ground.block_ids().map(BlockRule::ToBlock).collect(),
            overrides: BTreeMap::new(),
        }
    }

    fn normalized(mut self) -> Self {
        let rules = self.block_rules.clone();
        self.overrides
            .retain(|&(b, i), t| base_eval(&rules[b.0], i) != *t);
        self
    }

    pub fn ground(&self) -> &Arc<GroundStructure> {
        &self.ground
    }

    pub fn atom_rule(&self, a: AtomId) -> Point {
        self.atom_rules[a.0]
    }

    pub fn block_rule(&self, b: BlockId) -> BlockRule {
        self.block_rules[b.0]
    }

    pub fn overrides(&self) -> impl Iterator<Item = (BlockId, u64, Point)> + '_ {
        self.overrides.iter().map(|(&(b, i), &t)| (b, i, t))
    }

    fn block_overrides(&self, b: BlockId) -> impl Iterator<Item = (u64, Point)> + '_ {
        self.overrides
            .range((b, 0)..=(b, u64::MAX))
            .map(|(&(_, i), &t)| (i, t))
    }

    /// Largest index literal in any rule, override key or target.
    pub fn max_literal(&self) -> u64 {
        let targets = self
            .atom_rules
            .iter()
            .chain(self.block_rules.iter().filter_map(|r| match r {
                BlockRule::Const(p) => Some(p),
                BlockRule::ToBlock(_) => None,
            }))
            .chain(self.overrides.values())
            .filter_map(Point::index);
        let keys = self.overrides.keys().map(|&(_, i)| i);
        targets.chain(keys).max().unwrap_or(0)
    }

    pub(crate) fn eval(&self, p: &Point) -> Point {
        match *p {
            Point::Atom(a) => self.atom_rules[a.0],
            Point::Elem(b, i) => match self.overrides.get(&(b, i)) {
                Some(&t) => t,
                None => base_eval(&self.block_rules[b.0], i),
            },
        }
    }

    pub fn apply(&self, p: &Point) -> Result<Point> {
        self.ground.check_point(p)?;
        Ok(self.eval(p))
    }

    fn check(&self, a: &SymbolicSet) -> Result<()> {
        if same_ground(a.ground(), &self.ground) {
            Ok(())
        } else {
            Err(LabError::GroundMismatch)
        }
    }

    pub fn image(&self, a: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(a)?;
        Ok(self.image_of(a))
    }

    pub(crate) fn image_of(&self, a: &SymbolicSet) -> SymbolicSet {
        let g = &self.ground;
        let mut atoms = vec![false; g.atom_count()];
        let mut parts = vec![BlockPart::empty(); g.block_count()];
        let add = |p: Point, atoms: &mut Vec<bool>, parts: &mut Vec<BlockPart>| match p {
            Point::Atom(x) => atoms[x.0] = true,
            Point::Elem(d, i) => parts[d.0] = parts[d.0].union(&BlockPart::Finite(vec![i])),
        };
        for id in g.atom_ids() {
            if a.has_atom(id) {
                add(self.atom_rules[id.0], &mut atoms, &mut parts);
            }
        }
        for b in g.block_ids() {
            let part = a.part(b);
            if part.is_empty() {
                continue;
            }
            let mut ov_keys = Vec::new();
            for (i, t) in self.block_overrides(b) {
                ov_keys.push(i);
                if part.contains(i) {
                    add(t, &mut atoms, &mut parts);
                }
            }
            let rest = part.difference(&BlockPart::Finite(ov_keys));
            match self.block_rules[b.0] {
                BlockRule::Const(p) => {
                    if !rest.is_empty() {
                        add(p, &mut atoms, &mut parts);
                    }
                }
                BlockRule::ToBlock(d) => parts[d.0] = parts[d.0].union(&rest),
            }
        }
        SymbolicSet::from_parts(g, atoms, parts).expect("image parts are canonical")
    }

    pub fn preimage(&self, target: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(target)?;
        Ok(self.preimage_of(target))
    }

    pub(crate) fn preimage_of(&self, target: &SymbolicSet) -> SymbolicSet {
        let g = &self.ground;
        let atoms = self.atom_rules.iter().map(|p| target.contains(p)).collect();
        let parts = g
            .block_ids()
            .map(|b| {
                let mut part = match self.block_rules[b.0] {
                    BlockRule::Const(p) if target.contains(&p) => BlockPart::full(),
                    BlockRule::Const(_) => BlockPart::empty(),
                    BlockRule::ToBlock(d) => target.part(d).clone(),
                };
                for (i, t) in self.block_overrides(b) {
                    let single = BlockPart::Finite(vec![i]);
                    part = if target.contains(&t) {
                        part.union(&single)
                    } else {
                        part.difference(&single)
                    };
                }
                part
            })
            .collect();
        SymbolicSet::from_parts(g, atoms, parts).expect("preimage parts are canonical")
    }

    /// `outer ∘ self`: apply `self` first, then `outer`.
    pub fn then(&self, outer: &PiecewiseMap) -> Result<PiecewiseMap> {
        compose(outer, self)
    }
}

fn check_block(ground: &GroundStructure, b: BlockId) -> Result<()> {
    if b.0 < ground.block_count() {
        Ok(())
    } else {
        Err(LabError::UnknownBlock(format!("#{}", b.0)))
    }
}

fn base_eval(rule: &BlockRule, i: u64) -> Point {
    match *rule {
        BlockRule::Const(p) => p,
        BlockRule::ToBlock(d) => Point::Elem(d, i),
    }
}

/// Rule-level composition `outer ∘ inner`.
pub fn compose(outer: &PiecewiseMap, inner: &PiecewiseMap) -> Result<PiecewiseMap> {
    if !same_ground(&outer.ground, &inner.ground) {
        return Err(LabError::GroundMismatch);
    }
    let atom_rules = inner.atom_rules.iter().map(|p| outer.eval(p)).collect();
    let mut block_rules = Vec::with_capacity(inner.block_rules.len());
    let mut overrides = BTreeMap::new();
    for b in inner.ground.block_ids() {
        match inner.block_rules[b.0] {
            BlockRule::Const(p) => block_rules.push(BlockRule::Const(outer.eval(&p))),
            BlockRule::ToBlock(d) => {
                block_rules.push(outer.block_rules[d.0]);
                for (i, t) in outer.block_overrides(d) {
                    overrides.insert((b, i), t);
                }
            }
        }
        // inner overrides take precedence over anything inherited from outer
        for (i, t) in inner.block_overrides(b) {
            overrides.insert((b, i), outer.eval(&t));
        }
    }
    Ok(PiecewiseMap {
        ground: inner.ground.clone(),
        atom_rules,
        block_rules,
        overrides,
    }
    .normalized())
}

/// The iterates `m[X], m²[X], ...` of the whole space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceChain {
    pub entries: Vec<SymbolicSet>,
    /// Least `n` with `mⁿ[X] = mⁿ⁺¹[X]`, if found within the step budget.
    pub stabilized_at: Option<usize>,
}

impl SpaceChain {
    pub fn stable_set(&self) -> Option<&SymbolicSet> {
        self.stabilized_at.and(self.entries.last())
    }
}

pub fn space_chain(m: &PiecewiseMap, n_max: usize) -> Result<SpaceChain> {
    if n_max == 0 {
        return Err(LabError::Precondition("n_max must be >= 1".into()));
    }
    let mut prev = SymbolicSet::full(&m.ground);
    let mut entries = Vec::new();
    for step in 1..=n_max {
        let next = m.image_of(&prev);
        if !next.subset_of(&prev) {
            return Err(LabError::Integrity(format!(
                "iterate {step} is not inside iterate {}",
                step - 1
            )));
        }
        let stable = next == prev;
        entries.push(next.clone());
        if stable {
            return Ok(SpaceChain {
                entries,
                stabilized_at: Some(step - 1),
            });
        }
        prev = next;
    }
    Ok(SpaceChain {
        entries,
        stabilized_at: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ClosedMapVerdict {
    VerifiedUpToBound {
        max_exceptions: usize,
        max_index: u64,
        samples: usize,
        closed_sets_checked: usize,
    },
    Counterexample {
        #[serde(serialize_with = "crate::ser::set")]
        set: SymbolicSet,
        #[serde(serialize_with = "crate::ser::set")]
        image: SymbolicSet,
    },
}

impl ClosedMapVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, ClosedMapVerdict::VerifiedUpToBound { .. })
    }
}

/// Bounded-exhaustive check that `m` sends closed sets to closed sets: every
/// closed set of the shape grammar, then `bounds.samples` random closed sets.
/// The reported counterexample is the first in canonical enumeration order.
pub fn closed_map_bounded(
    m: &PiecewiseMap,
    t: &Topology,
    bounds: &Bounds,
) -> Result<ClosedMapVerdict> {
    if !same_ground(&m.ground, t.ground()) {
        return Err(LabError::GroundMismatch);
    }
    let grammar = ShapeGrammar::new(&m.ground, bounds.max_exceptions, bounds.max_index);
    let (checked, first_bad) = (0..grammar.len())
        .into_par_iter()
        .map(|i| {
            let a = grammar.get(i);
            if !t.closed(&a) {
                (0usize, None)
            } else if t.closed(&m.image_of(&a)) {
                (1, None)
            } else {
                (1, Some(i))
            }
        })
        .reduce(
            || (0, None),
            |(c1, b1), (c2, b2)| {
                let bad = match (b1, b2) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                };
                (c1 + c2, bad)
            },
        );
    if let Some(i) = first_bad {
        let set = grammar.get(i);
        let image = m.image_of(&set);
        return Ok(ClosedMapVerdict::Counterexample { set, image });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let sample_index = 2 * bounds.max_index + 4;
    let mut found = 0;
    let mut attempts = 0;
    while found < bounds.samples && attempts < 200 * bounds.samples.max(1) {
        attempts += 1;
        let a = sample::random_set(&m.ground, &mut rng, sample_index, bounds.max_exceptions + 2);
        if !t.closed(&a) {
            continue;
        }
        found += 1;
        let image = m.image_of(&a);
        if !t.closed(&image) {
            return Ok(ClosedMapVerdict::Counterexample { set: a, image });
        }
    }
    Ok(ClosedMapVerdict::VerifiedUpToBound {
        max_exceptions: bounds.max_exceptions,
        max_index: bounds.max_index,
        samples: found,
        closed_sets_checked: checked + found,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ContractionVerdict {
    /// Closed up to the bound and the iterates of `X` collapse to `stable`.
    Certified {
        #[serde(serialize_with = "crate::ser::set")]
        stable: SymbolicSet,
        steps: usize,
        closedness: ClosedMapVerdict,
    },
    /// Both points survive every iterate of `X`.
    Refuted {
        x: String,
        y: String,
        #[serde(serialize_with = "crate::ser::set")]
        stable: SymbolicSet,
    },
    NotClosed {
        closedness: ClosedMapVerdict,
    },
    Inconclusive {
        reason: String,
    },
}

/// Closedness (bounded) plus the separation property on iterates of `X`.
pub fn topological_contraction(
    m: &PiecewiseMap,
    t: &Topology,
    n_max: usize,
    bounds: &Bounds,
) -> Result<ContractionVerdict> {
    let chain = space_chain(m, n_max)?;
    let Some(stable) = chain.stable_set().cloned() else {
        return Ok(ContractionVerdict::Inconclusive {
            reason: format!("iterates of X did not stabilize within {n_max} steps"),
        });
    };
    let steps = chain.stabilized_at.unwrap_or_default();
    let pair = stable.first_elements(2);
    if pair.len() == 2 {
        return Ok(ContractionVerdict::Refuted {
            x: m.ground.label(&pair[0]),
            y: m.ground.label(&pair[1]),
            stable,
        });
    }
    let closedness = closed_map_bounded(m, t, bounds)?;
    if !closedness.is_verified() {
        return Ok(ContractionVerdict::NotClosed { closedness });
    }
    Ok(ContractionVerdict::Certified {
        stable,
        steps,
        closedness,
    })
}

/// Compare `image`, `preimage` and `apply` against pointwise evaluation on
/// every point of index `<= bound`. Points past `bound` are represented by
/// index `bound + 1`, which is exact once `bound` exceeds every literal.
pub fn pointwise_agreement(m: &PiecewiseMap, a: &SymbolicSet, bound: u64) -> Result<bool> {
    m.check(a)?;
    if bound <= a.max_index().max(m.max_literal()) {
        return Err(LabError::Precondition(format!(
            "oracle bound {bound} must exceed every index literal"
        )));
    }
    let g = &m.ground;
    let mut brute = truncation_oracle(&SymbolicSet::empty(g), bound)?;
    let mark = |q: Point, brute: &mut Truncation| match q {
        Point::Atom(x) => brute.atoms[x.0] = true,
        Point::Elem(d, j) if j <= bound => brute.blocks[d.0].bits[(j - 1) as usize] = true,
        Point::Elem(d, _) => brute.blocks[d.0].tail = true,
    };
    for p in g.points_up_to(bound) {
        if a.contains(&p) {
            mark(m.apply(&p)?, &mut brute);
        }
    }
    for b in g.block_ids() {
        let rep = Point::Elem(b, bound + 1);
        if a.contains(&rep) {
            mark(m.apply(&rep)?, &mut brute);
        }
    }
    if brute != truncation_oracle(&m.image(a)?, bound)? {
        return Ok(false);
    }

    let pre = m.preimage(a)?;
    for p in g.points_up_to(bound + 1) {
        if pre.contains(&p) != a.contains(&m.apply(&p)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::OddEven;

    #[test]
    fn apply_rules() {
        let m = OddEven::new();
        for n in 1..=8 {
            assert_eq!(m.f.apply(&m.odd_pt(n)).unwrap(), m.even(n));
        }
        assert_eq!(m.f.apply(&m.b()).unwrap(), m.a());
        let id = PiecewiseMap::identity(&m.ground);
        for p in m.ground.points_up_to(5) {
            assert_eq!(id.apply(&p).unwrap(), p);
        }
    }

    #[test]
    fn images() {
        let m = OddEven::new();
        assert_eq!(m.f.image(&m.x()).unwrap(), m.even_ab());
        let ab = m.point_set(&[m.a(), m.b()]);
        assert_eq!(m.f.image(&ab).unwrap(), m.point_set(&[m.a()]));
        assert_eq!(m.g.image(&ab).unwrap(), m.point_set(&[m.b()]));
        let e = SymbolicSet::empty(&m.ground);
        assert_eq!(m.f.image(&e).unwrap(), e);
    }

    #[test]
    fn preimages() {
        let m = OddEven::new();
        let a = m.point_set(&[m.a()]);
        assert_eq!(m.f.preimage(&a).unwrap(), m.point_set(&[m.a(), m.b()]));
        assert_eq!(m.g.preimage(&a).unwrap(), m.even_set());
        assert_eq!(m.f.preimage(&m.x()).unwrap(), m.x());
    }

    #[test]
    fn compositions() {
        let m = OddEven::new();
        let ff = compose(&m.f, &m.f).unwrap();
        assert_eq!(ff.image(&m.x()).unwrap(), m.point_set(&[m.a(), m.b()]));
        let fff = compose(&m.f, &ff).unwrap();
        assert_eq!(fff.image(&m.x()).unwrap(), m.point_set(&[m.a()]));
        let id = PiecewiseMap::identity(&m.ground);
        assert_eq!(compose(&id, &m.f).unwrap(), m.f);
        assert_eq!(compose(&m.f, &id).unwrap(), m.f);
    }

    #[test]
    fn composition_with_overrides() {
        let m = OddEven::new();
        let odd = m.ground.block_id("ODD").unwrap();
        let even = m.ground.block_id("EVEN").unwrap();
        let inner = PiecewiseMap::new(
            &m.ground,
            vec![
                MapRule::AtomToPoint(m.ground.atom_id("a").unwrap(), m.odd_pt(2)),
                MapRule::AtomToPoint(m.ground.atom_id("b").unwrap(), m.b()),
                MapRule::BlockToBlock(odd, even),
                MapRule::BlockToBlock(even, odd),
            ],
            vec![(odd, 3, m.a()), (even, 1, m.even(7))],
        )
        .unwrap();
        for (outer, inner) in [(&m.f, &inner), (&inner, &m.g), (&inner, &inner)] {
            let h = compose(outer, inner).unwrap();
            for p in m.ground.points_up_to(12) {
                assert_eq!(
                    h.apply(&p).unwrap(),
                    outer.apply(&inner.apply(&p).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn chains() {
        let m = OddEven::new();
        let chain = space_chain(&m.f, 10).unwrap();
        let a = m.point_set(&[m.a()]);
        assert_eq!(
            chain.entries,
            vec![
                m.even_ab(),
                m.point_set(&[m.a(), m.b()]),
                a.clone(),
                a.clone()
            ]
        );
        assert_eq!(chain.stabilized_at, Some(3));
        for w in chain.entries.windows(2).take(2) {
            assert!(w[1].is_subset(&w[0]).unwrap() && w[0] != w[1]);
        }
        let id = space_chain(&PiecewiseMap::identity(&m.ground), 5).unwrap();
        assert_eq!(id.entries, vec![m.x()]);
        assert_eq!(id.stabilized_at, Some(0));
        assert_eq!(space_chain(&m.f, 2).unwrap().stabilized_at, None);
        assert!(space_chain(&m.f, 0).is_err());
    }

    #[test]
    fn totality_and_duplicates() {
        let m = OddEven::new();
        let odd = m.ground.block_id("ODD").unwrap();
        let missing = PiecewiseMap::new(
            &m.ground,
            vec![
                MapRule::AtomToPoint(m.ground.atom_id("a").unwrap(), m.a()),
                MapRule::AtomToPoint(m.ground.atom_id("b").unwrap(), m.a()),
                MapRule::BlockToConst(odd, m.a()),
            ],
            vec![],
        );
        assert!(matches!(missing, Err(LabError::NotTotal(_))));
        let id = PiecewiseMap::identity(&m.ground);
        let mut rules: Vec<MapRule> = m
            .ground
            .atom_ids()
            .map(|a| MapRule::AtomToPoint(a, id.atom_rule(a)))
            .collect();
        rules.extend(m.ground.block_ids().map(|b| MapRule::BlockToBlock(b, b)));
        let dup = PiecewiseMap::new(
            &m.ground,
            rules.clone(),
            vec![(odd, 1, m.a()), (odd, 1, m.b())],
        );
        assert!(matches!(dup, Err(LabError::DuplicateOverride(_))));
        // a redundant override is normalized away
        let same = PiecewiseMap::new(&m.ground, rules, vec![(odd, 4, m.odd_pt(4))]).unwrap();
        assert_eq!(same, id);
    }

    #[test]
    fn closed_map_checks() {
        let m = OddEven::new();
        let bounds = Bounds {
            max_exceptions: 2,
            max_index: 5,
            samples: 100,
            ..Bounds::default()
        };
        assert!(closed_map_bounded(&m.f, &m.topology, &bounds)
            .unwrap()
            .is_verified());
        assert!(closed_map_bounded(&m.g, &m.topology, &bounds)
            .unwrap()
            .is_verified());
        let broken = m.broken_map();
        match closed_map_bounded(&broken, &m.topology, &bounds).unwrap() {
            ClosedMapVerdict::Counterexample { set, image } => {
                assert!(m.topology.is_closed(&set).unwrap());
                assert!(!m.topology.is_closed(&image).unwrap());
            }
            v => panic!("expected counterexample, got {v:?}"),
        }
        let image_x = broken.image(&m.x()).unwrap();
        assert!(!m.topology.is_closed(&image_x).unwrap());
    }

    #[test]
    fn contraction_verdicts() {
        let m = OddEven::new();
        let bounds = Bounds {
            max_exceptions: 2,
            max_index: 5,
            samples: 50,
            ..Bounds::default()
        };
        match topological_contraction(&m.f, &m.topology, 10, &bounds).unwrap() {
            ContractionVerdict::Certified { stable, steps, .. } => {
                assert_eq!(stable, m.point_set(&[m.a()]));
                assert_eq!(steps, 3);
            }
            v => panic!("{v:?}"),
        }
        match topological_contraction(&m.g, &m.topology, 10, &bounds).unwrap() {
            ContractionVerdict::Certified { stable, .. } => {
                assert_eq!(stable, m.point_set(&[m.b()]))
            }
            v => panic!("{v:?}"),
        }
        let id = PiecewiseMap::identity(&m.ground);
        assert!(matches!(
            topological_contraction(&id, &m.topology, 10, &bounds).unwrap(),
            ContractionVerdict::Refuted { .. }
        ));
    }

    #[test]
    fn pointwise_oracle_on_reference_maps() {
        let m = OddEven::new();
        for map in [&m.f, &m.g, &m.broken_map()] {
            for s in [
                m.x(),
                m.odd(),
                m.even_ab(),
                m.point_set(&[m.a(), m.even(3)]),
            ] {
                assert!(pointwise_agreement(map, &s, 64).unwrap());
            }
        }
    }
}
