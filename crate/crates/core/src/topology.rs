//! Topologies given by a finite disjunction of conjunctive clauses over
//! symbolic sets, with exact decision procedures for openness, closure and
//! interior.
//!
//! The closure procedure rests on one observation: within a clause, the
//! `SubsetOf` and `Avoids` primitives are downward closed and the
//! `CofiniteWithin` and `Meets` primitives are upward closed. So for a point
//! `x` and a set `A` there is a largest admissible candidate
//! `(⋂ SubsetOf) \ (A ∪ ⋃ Avoids)`, and the clause yields an open
//! neighbourhood of `x` missing `A` iff that candidate contains `x` and
//! satisfies the upward-closed primitives.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::error::{LabError, Result};
use crate::sample;
use crate::setalg::{same_ground, BlockId, BlockPart, GroundStructure, Point, SymbolicSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Primitive {
    /// `A ⊆ S`
    SubsetOf(SymbolicSet),
    /// `S \ A` is finite
    CofiniteWithin(SymbolicSet),
    /// `A ∩ S ≠ ∅`
    Meets(SymbolicSet),
    /// `A ∩ S = ∅`
    Avoids(SymbolicSet),
}

impl Primitive {
    pub fn base(&self) -> &SymbolicSet {
        match self {
            Primitive::SubsetOf(s)
            | Primitive::CofiniteWithin(s)
            | Primitive::Meets(s)
            | Primitive::Avoids(s) => s,
        }
    }

    pub fn holds(&self, a: &SymbolicSet) -> bool {
        match self {
            Primitive::SubsetOf(s) => a.subset_of(s),
            Primitive::CofiniteWithin(s) => (s - a).is_finite(),
            Primitive::Meets(s) => a.meets(s),
            Primitive::Avoids(s) => !a.meets(s),
        }
    }

    fn is_upward_closed(&self) -> bool {
        matches!(self, Primitive::CofiniteWithin(_) | Primitive::Meets(_))
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            Primitive::SubsetOf(_) => "subset-of",
            Primitive::CofiniteWithin(_) => "cofinite-within",
            Primitive::Meets(_) => "meets",
            Primitive::Avoids(_) => "avoids",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    pub label: String,
    pub conjuncts: Vec<Primitive>,
}

impl Clause {
    pub fn new(label: impl Into<String>, conjuncts: Vec<Primitive>) -> Self {
        Self {
            label: label.into(),
            conjuncts,
        }
    }

    pub fn admits(&self, a: &SymbolicSet) -> bool {
        self.conjuncts.iter().all(|p| p.holds(a))
    }

    /// `(⋂ SubsetOf, or X) \ (avoid ∪ ⋃ Avoids)`: every set admitted by this
    /// clause and disjoint from `avoid` is contained in it.
    fn max_candidate(&self, ground: &Arc<GroundStructure>, avoid: &SymbolicSet) -> SymbolicSet {
        let mut cand = SymbolicSet::full(ground);
        let mut removed = avoid.clone();
        for p in &self.conjuncts {
            match p {
                Primitive::SubsetOf(s) => cand = &cand & s,
                Primitive::Avoids(s) => removed = &removed | s,
                _ => {}
            }
        }
        &cand - &removed
    }

    fn upward_hold(&self, u: &SymbolicSet) -> bool {
        self.conjuncts
            .iter()
            .filter(|p| p.is_upward_closed())
            .all(|p| p.holds(u))
    }

    /// A small admitted set containing `k`: `k` together with the parts of the
    /// `CofiniteWithin` bases inside the largest candidate, plus one witness
    /// point per `Meets` primitive. Every admitted superset of `k` contains
    /// this set up to finitely many points, so it is cofinite iff every such
    /// superset is. `None` when the clause admits no superset of `k`.
    pub fn small_open_containing(
        &self,
        ground: &Arc<GroundStructure>,
        k: &SymbolicSet,
    ) -> Option<SymbolicSet> {
        let cand = self.max_candidate(ground, &SymbolicSet::empty(ground));
        if !k.subset_of(&cand) {
            return None;
        }
        let mut w = k.clone();
        for p in &self.conjuncts {
            match p {
                Primitive::CofiniteWithin(s) => w = &w | &(s & &cand),
                Primitive::Meets(s) => {
                    let pt = (s & &cand).first_element()?;
                    w = &w | &SymbolicSet::singleton(ground, pt).ok()?;
                }
                _ => {}
            }
        }
        self.admits(&w).then_some(w)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    ground: Arc<GroundStructure>,
    clauses: Vec<Clause>,
}

impl Topology {
    /// Rejects empty clauses, `Meets(∅)` and base sets over another ground.
    pub fn new(ground: &Arc<GroundStructure>, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            if c.conjuncts.is_empty() {
                return Err(LabError::InvalidClause(format!(
                    "clause `{}` has no conjuncts",
                    c.label
                )));
            }
            for p in &c.conjuncts {
                if !same_ground(p.base().ground(), ground) {
                    return Err(LabError::GroundMismatch);
                }
                if let Primitive::Meets(s) = p {
                    if s.is_empty() {
                        return Err(LabError::InvalidClause(format!(
                            "clause `{}`: meets(empty) is unsatisfiable",
                            c.label
                        )));
                    }
                }
            }
        }
        Ok(Self {
            ground: ground.clone(),
            clauses,
        })
    }

    pub fn ground(&self) -> &Arc<GroundStructure> {
        &self.ground
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Load-time diagnostics that do not make the clause set unusable.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self
            .clauses
            .iter()
            .any(|c| c.admits(&SymbolicSet::full(&self.ground)))
        {
            out.push("the whole space satisfies no clause, so X is not open".to_string());
        }
        out
    }

    fn check(&self, a: &SymbolicSet) -> Result<()> {
        if same_ground(a.ground(), &self.ground) {
            Ok(())
        } else {
            Err(LabError::GroundMismatch)
        }
    }

    pub fn is_open(&self, a: &SymbolicSet) -> Result<bool> {
        self.check(a)?;
        Ok(self.open(a))
    }

    pub(crate) fn open(&self, a: &SymbolicSet) -> bool {
        a.is_empty() || self.clauses.iter().any(|c| c.admits(a))
    }

    /// An open set containing `x` and disjoint from `a`, if one exists.
    pub fn exists_open_avoiding(&self, x: &Point, a: &SymbolicSet) -> Result<Option<SymbolicSet>> {
        self.check(a)?;
        self.ground.check_point(x)?;
        if a.contains(x) {
            return Err(LabError::Precondition(format!(
                "{} lies in the set to avoid",
                self.ground.label(x)
            )));
        }
        Ok(self.open_avoiding(x, a))
    }

    fn open_avoiding(&self, x: &Point, a: &SymbolicSet) -> Option<SymbolicSet> {
        self.clauses.iter().find_map(|c| {
            let cand = c.max_candidate(&self.ground, a);
            (cand.contains(x) && c.upward_hold(&cand)).then_some(cand)
        })
    }

    fn adherent(&self, x: &Point, a: &SymbolicSet) -> bool {
        a.contains(x) || self.open_avoiding(x, a).is_none()
    }

    /// Index literals of block `b` mentioned by `a` or by any clause base set.
    fn mentioned(&self, b: BlockId, a: &SymbolicSet) -> Vec<u64> {
        let mut lits: Vec<u64> = a.literals(b).to_vec();
        for c in &self.clauses {
            for p in &c.conjuncts {
                lits.extend_from_slice(p.base().literals(b));
            }
        }
        lits.sort_unstable();
        lits.dedup();
        lits
    }

    /// One index past every literal relevant to `a` in block `b`; all larger
    /// indices behave identically.
    pub fn generic_index(&self, b: BlockId, a: &SymbolicSet) -> u64 {
        self.mentioned(b, a).last().copied().unwrap_or(0) + 1
    }

    pub fn closure(&self, a: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(a)?;
        Ok(self.close(a))
    }

    pub(crate) fn close(&self, a: &SymbolicSet) -> SymbolicSet {
        let atoms = self
            .ground
            .atom_ids()
            .map(|id| self.adherent(&Point::Atom(id), a))
            .collect();
        let parts = self
            .ground
            .block_ids()
            .map(|b| {
                let lits = self.mentioned(b, a);
                let generic = lits.last().copied().unwrap_or(0) + 1;
                let exceptional = lits.iter().copied();
                if self.adherent(&Point::Elem(b, generic), a) {
                    BlockPart::Cofinite(
                        exceptional
                            .filter(|&i| !self.adherent(&Point::Elem(b, i), a))
                            .collect(),
                    )
                } else {
                    BlockPart::Finite(
                        exceptional
                            .filter(|&i| self.adherent(&Point::Elem(b, i), a))
                            .collect(),
                    )
                }
            })
            .collect();
        SymbolicSet::from_parts(&self.ground, atoms, parts).expect("regional closure is canonical")
    }

    /// Whether `x` lies in the closure of `a`, decided pointwise.
    pub fn in_closure(&self, x: &Point, a: &SymbolicSet) -> Result<bool> {
        self.check(a)?;
        self.ground.check_point(x)?;
        Ok(self.adherent(x, a))
    }

    pub fn interior(&self, a: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(a)?;
        Ok(self.close(&a.complement()).complement())
    }

    pub fn is_closed(&self, a: &SymbolicSet) -> Result<bool> {
        self.check(a)?;
        Ok(self.closed(a))
    }

    pub(crate) fn closed(&self, a: &SymbolicSet) -> bool {
        self.open(&a.complement())
    }

    /// Every listed point has a closed singleton.
    pub fn is_t1_sample(&self, points: &[Point]) -> Result<bool> {
        for p in points {
            self.ground.check_point(p)?;
            let s = SymbolicSet::singleton(&self.ground, *p)?;
            if self.close(&s) != s {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every member is open and together they cover the space.
    pub fn cover_check(&self, cover: &[SymbolicSet]) -> Result<bool> {
        let mut union = SymbolicSet::empty(&self.ground);
        for u in cover {
            self.check(u)?;
            if !self.open(u) {
                return Ok(false);
            }
            union = &union | u;
        }
        Ok(union.is_full())
    }

    /// Small open sets containing `k`, one per clause that admits a superset.
    pub fn small_opens_containing(&self, k: &SymbolicSet) -> Vec<SymbolicSet> {
        let mut out: Vec<SymbolicSet> = self
            .clauses
            .iter()
            .filter_map(|c| c.small_open_containing(&self.ground, k))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct AxiomReport {
    pub sets_sampled: usize,
    pub points_sampled: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Sampled evidence that the clause predicate behaves as a T1 topology:
/// Kuratowski closure axioms, open/interior and closed/closure agreement,
/// finite unions and intersections of opens, and closed singletons.
pub fn sampled_axioms<R: Rng>(
    t: &Topology,
    rng: &mut R,
    samples: usize,
    max_index: u64,
) -> AxiomReport {
    let g = t.ground();
    let mut rep = AxiomReport {
        sets_sampled: samples,
        points_sampled: samples,
        ..Default::default()
    };
    let empty = SymbolicSet::empty(g);
    let full = SymbolicSet::full(g);
    rep.record(t.close(&empty).is_empty(), || {
        "closure(empty) != empty".into()
    });
    rep.record(t.open(&full), || "X is not open".into());
    rep.record(t.open(&empty), || "empty is not open".into());
    for _ in 0..samples {
        let a = sample::random_set(g, rng, max_index, 4);
        let b = sample::random_set(g, rng, max_index, 4);
        let ca = t.close(&a);
        let cb = t.close(&b);
        rep.record(a.subset_of(&ca), || format!("{a} not inside its closure"));
        rep.record(t.close(&ca) == ca, || {
            format!("closure of {a} not idempotent")
        });
        rep.record(t.close(&(&a | &b)) == &ca | &cb, || {
            format!("closure does not distribute over {a} | {b}")
        });
        let ia = t.close(&a.complement()).complement();
        rep.record(t.open(&a) == (ia == a), || {
            format!("open/interior disagree on {a}")
        });
        rep.record(t.closed(&a) == (ca == a), || {
            format!("closed/closure disagree on {a}")
        });
        let ib = t.close(&b.complement()).complement();
        rep.record(t.open(&ia) && t.open(&ib), || {
            format!("interior of {a} or {b} not open")
        });
        rep.record(t.open(&(&ia | &ib)), || {
            format!("union of opens {ia}, {ib} not open")
        });
        rep.record(t.open(&(&ia & &ib)), || {
            format!("intersection of opens {ia}, {ib} not open")
        });
        let p = sample::random_point(g, rng, max_index);
        rep.record(t.is_t1_sample(&[p]).unwrap_or(false), || {
            format!("closure of singleton {} is larger", g.label(&p))
        });
        // generic-index stability: one index past the literals and a few beyond agree
        for b in g.block_ids() {
            let gi = t.generic_index(b, &a);
            let at = |i| t.adherent(&Point::Elem(b, i), &a);
            rep.record(at(gi) == at(gi + 1) && at(gi) == at(gi + 2), || {
                format!(
                    "generic index {gi} of block {} not stable for {a}",
                    g.block_name(b)
                )
            });
        }
    }
    rep
}
