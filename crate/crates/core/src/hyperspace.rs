//! The hyperspace `2^X` of nonempty closed sets with its Vietoris basis, and
//! the machinery for deciding whether a set lies in the image of the
//! Hutchinson operator or in the closure of that image.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::Bounds;
use crate::enumerate::ShapeGrammar;
use crate::error::{LabError, Result};
use crate::ifs::Ifs;
use crate::sample;
use crate::setalg::{same_ground, BlockId, Cardinality, Point, SymbolicSet};
use crate::topology::Topology;

/// `S(V0; V1, …, Vk) = { K ∈ 2^X : K ⊆ V0 and K ∩ Vi ≠ ∅ for each i }`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisNeighborhood {
    v0: SymbolicSet,
    vs: Vec<SymbolicSet>,
}

impl BasisNeighborhood {
    /// Every set must be open in `t`.
    pub fn new(t: &Topology, v0: SymbolicSet, vs: Vec<SymbolicSet>) -> Result<Self> {
        for v in std::iter::once(&v0).chain(&vs) {
            if !t.is_open(v)? {
                return Err(LabError::NotOpen(v.to_string()));
            }
        }
        Ok(Self { v0, vs })
    }

    pub fn v0(&self) -> &SymbolicSet {
        &self.v0
    }

    pub fn vs(&self) -> &[SymbolicSet] {
        &self.vs
    }

    pub fn contains(&self, k: &SymbolicSet) -> Result<bool> {
        if !same_ground(k.ground(), self.v0.ground()) {
            return Err(LabError::GroundMismatch);
        }
        if k.is_empty() {
            return Err(LabError::EmptySet("neighborhood membership"));
        }
        Ok(self.holds(k))
    }

    fn holds(&self, k: &SymbolicSet) -> bool {
        k.subset_of(&self.v0) && self.vs.iter().all(|v| k.meets(v))
    }

    /// `V0 ∩ V1 ∩ … ∩ Vk`
    pub fn core(&self) -> SymbolicSet {
        self.vs.iter().fold(self.v0.clone(), |acc, v| &acc & v)
    }

    /// The same neighborhood with only the listed `Vi` kept.
    pub fn with_subset(&self, keep: &[usize]) -> Self {
        Self {
            v0: self.v0.clone(),
            vs: keep.iter().map(|&i| self.vs[i].clone()).collect(),
        }
    }
}

impl fmt::Display for BasisNeighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self.vs.iter().map(|v| format!("[{v}]")).collect();
        write!(f, "S([{}]; {})", self.v0, vs.join(", "))
    }
}

impl Serialize for BasisNeighborhood {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ImageMembership {
    InImage {
        #[serde(serialize_with = "crate::ser::set")]
        witness: SymbolicSet,
    },
    NotInImageCertified {
        reason: String,
    },
    NotInImageBounded {
        max_exceptions: usize,
        max_index: u64,
    },
    Inconclusive {
        reason: String,
    },
}

impl ImageMembership {
    pub fn is_outside(&self) -> bool {
        matches!(
            self,
            ImageMembership::NotInImageCertified { .. } | ImageMembership::NotInImageBounded { .. }
        )
    }
}

fn check_target(s: &Ifs, t: &Topology, k: &SymbolicSet) -> Result<()> {
    if !same_ground(k.ground(), s.ground()) || !same_ground(t.ground(), s.ground()) {
        return Err(LabError::GroundMismatch);
    }
    if k.is_empty() {
        return Err(LabError::EmptySet("hyperspace membership"));
    }
    Ok(())
}

/// `E_max = ⋂ᵢ fᵢ⁻¹[K]`: `F(E) ⊆ K` iff `E ⊆ E_max`.
pub fn admissible_region(s: &Ifs, k: &SymbolicSet) -> Result<SymbolicSet> {
    if !same_ground(k.ground(), s.ground()) {
        return Err(LabError::GroundMismatch);
    }
    Ok(s.maps()
        .iter()
        .map(|m| m.preimage_of(k))
        .reduce(|x, y| &x & &y)
        .expect("nonempty ifs"))
}

/// Decide whether `K = F(E)` for some nonempty closed `E`.
pub fn is_in_hutchinson_image(
    s: &Ifs,
    t: &Topology,
    k: &SymbolicSet,
    bounds: &Bounds,
) -> Result<ImageMembership> {
    check_target(s, t, k)?;
    if !t.closed(k) {
        return Err(LabError::Precondition(format!("{k} is not closed")));
    }
    let e_max = admissible_region(s, k)?;
    if e_max.is_empty() {
        return Ok(ImageMembership::NotInImageCertified {
            reason: "empty admissible region: no point maps into K under every map".into(),
        });
    }
    if t.closed(&e_max) {
        let image = s.operator(&e_max);
        if &image == k {
            return Ok(ImageMembership::InImage { witness: e_max });
        }
        return Ok(ImageMembership::NotInImageCertified {
            reason: format!(
                "F(E_max) = {image} is a proper subset of K, and F is monotone on subsets of E_max = {e_max}"
            ),
        });
    }
    // no largest closed subset to argue through: search only
    let grammar = ShapeGrammar::new(s.ground(), bounds.max_exceptions, bounds.max_index);
    let hit = (0..grammar.len()).into_par_iter().find_first(|&i| {
        let e = grammar.get(i);
        !e.is_empty() && e.subset_of(&e_max) && t.closed(&e) && &s.operator(&e) == k
    });
    if let Some(i) = hit {
        return Ok(ImageMembership::InImage {
            witness: grammar.get(i),
        });
    }
    if k.max_index() > bounds.max_index || e_max.max_index() > bounds.max_index {
        return Ok(ImageMembership::Inconclusive {
            reason: format!(
                "E_max = {e_max} is not closed and mentions indices beyond the search bound {}",
                bounds.max_index
            ),
        });
    }
    Ok(ImageMembership::NotInImageBounded {
        max_exceptions: bounds.max_exceptions,
        max_index: bounds.max_index,
    })
}

fn max_literal(s: &Ifs, t: &Topology, sets: &[&SymbolicSet]) -> u64 {
    let maps = s.maps().iter().map(|m| m.max_literal());
    let clauses = t
        .clauses()
        .iter()
        .flat_map(|c| c.conjuncts.iter().map(|p| p.base().max_index()));
    let given = sets.iter().map(|x| x.max_index());
    maps.chain(clauses).chain(given).max().unwrap_or(0)
}

/// Look for a closed `E` whose image lies in the neighborhood `n` of `k`.
/// Candidates are singletons and doubletons of points with index up to
/// `max(max_index, literal bound + 1)`, tried in tiers: first those whose
/// image sits inside `V0 ∩ V1 ∩ … ∩ Vk` with the cardinality of `k`, then
/// those whose image sits inside that intersection, then the rest; each tier
/// in canonical order, singletons first.
pub fn closure_challenge(
    s: &Ifs,
    t: &Topology,
    k: &SymbolicSet,
    n: &BasisNeighborhood,
    max_index: u64,
) -> Result<Option<SymbolicSet>> {
    check_target(s, t, k)?;
    if !n.contains(k)? {
        return Err(LabError::Precondition(format!(
            "{n} is not a neighborhood of {k}"
        )));
    }
    let mut mentioned: Vec<&SymbolicSet> = vec![k, &n.v0];
    mentioned.extend(n.vs.iter());
    let cap = max_index.max(max_literal(s, t, &mentioned) + 1);
    let points = s.ground().points_up_to(cap);
    let core = n.core();
    let k_card = k.cardinality();

    let mut candidates: Vec<(u8, usize, SymbolicSet, SymbolicSet)> = Vec::new();
    let mut consider = |e: SymbolicSet, size: usize| {
        if !t.closed(&e) {
            return;
        }
        let image = s.operator(&e);
        let tier = match (image.subset_of(&core), image.cardinality() == k_card) {
            (true, true) => 0,
            (true, false) => 1,
            _ => 2,
        };
        candidates.push((tier, size, e, image));
    };
    for p in &points {
        consider(SymbolicSet::singleton(s.ground(), *p)?, 1);
    }
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            consider(SymbolicSet::from_points(s.ground(), [*p, *q])?, 2);
        }
    }
    // stable sort keeps canonical point order within a tier
    candidates.sort_by_key(|c| (c.0, c.1));
    Ok(candidates
        .into_iter()
        .find(|(_, _, _, image)| n.holds(image))
        .map(|(_, _, e, _)| e))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClauseFinding {
    pub clause: String,
    /// A small open set through this clause containing the point, if any.
    pub small_open: Option<String>,
    /// Every open set through this clause containing the point is cofinite.
    pub forces_cofinite: bool,
}

/// The two lemmas behind "`{p}` lies in the closure of `F[2^X]`":
/// every open set containing `p` is cofinite, and each element of `block`
/// beyond the literal bound is the exact image of a closed set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GuidedCertificate {
    pub point: String,
    pub block: String,
    pub clause_findings: Vec<ClauseFinding>,
    /// Every index above `generic_index - 1` behaves like `generic_index`.
    pub generic_index: u64,
    #[serde(serialize_with = "crate::ser::set")]
    pub generic_witness: SymbolicSet,
    pub exceptional_indices_ok: Vec<u64>,
    pub exceptional_indices_failed: Vec<u64>,
    pub conclusion: String,
}

fn exact_preimage_witness(s: &Ifs, t: &Topology, target: &SymbolicSet) -> Option<SymbolicSet> {
    let e = admissible_region(s, target).ok()?;
    (!e.is_empty() && t.closed(&e) && &s.operator(&e) == target).then_some(e)
}

pub fn guided_closure_proof(
    s: &Ifs,
    t: &Topology,
    k: &SymbolicSet,
    block: BlockId,
) -> Result<Option<GuidedCertificate>> {
    check_target(s, t, k)?;
    if k.cardinality() != Cardinality::Finite(1) {
        return Err(LabError::Precondition(format!("{k} is not a singleton")));
    }
    if block.0 >= s.ground().block_count() {
        return Err(LabError::UnknownBlock(format!("#{}", block.0)));
    }
    let g = s.ground();
    let p = k.first_element().expect("singleton");

    // L1: decide per clause whether some non-cofinite open set contains p
    let mut findings = Vec::new();
    for c in t.clauses() {
        let w = c.small_open_containing(g, k);
        let forces = w.as_ref().is_none_or(|w| w.is_cofinite());
        findings.push(ClauseFinding {
            clause: c.label.clone(),
            small_open: w.as_ref().map(ToString::to_string),
            forces_cofinite: forces,
        });
    }
    let admitted = findings.iter().any(|f| f.small_open.is_some());
    if !admitted || findings.iter().any(|f| !f.forces_cofinite) {
        return Ok(None);
    }

    // L2: exact singleton images in `block`, uniformly past the literal bound
    let bound = max_literal(s, t, &[k]);
    let generic = bound + 1;
    let target = |i| SymbolicSet::singleton(g, Point::Elem(block, i));
    let Some(generic_witness) = exact_preimage_witness(s, t, &target(generic)?) else {
        return Ok(None);
    };
    let (mut ok, mut failed) = (Vec::new(), Vec::new());
    for i in 1..=bound {
        if exact_preimage_witness(s, t, &target(i)?).is_some() {
            ok.push(i);
        } else {
            failed.push(i);
        }
    }
    let block_name = g.block_name(block).to_string();
    Ok(Some(GuidedCertificate {
        point: g.label(&p),
        block: block_name.clone(),
        clause_findings: findings,
        generic_index: generic,
        generic_witness,
        exceptional_indices_ok: ok,
        exceptional_indices_failed: failed,
        conclusion: format!(
            "every basis neighborhood of {k} has a cofinite core, which contains block:{block_name}[n] for some n >= {generic}; \
             that singleton is F of a closed set, so {k} lies in the closure of F[2^X]"
        ),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonClosednessVerdict {
    /// Outside the image by a certified argument, inside its closure by the
    /// analytic certificate.
    NonClosedCertified,
    /// Outside the image, and every enumerated neighborhood met the image.
    NonClosedEvidence,
    /// The target is itself in the image.
    NotApplicable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Challenge {
    pub neighborhood: BasisNeighborhood,
    #[serde(serialize_with = "crate::ser::opt_set")]
    pub witness: Option<SymbolicSet>,
    #[serde(serialize_with = "crate::ser::opt_set")]
    pub image: Option<SymbolicSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NonClosednessReport {
    #[serde(serialize_with = "crate::ser::set")]
    pub target: SymbolicSet,
    pub membership: ImageMembership,
    pub certificate: Option<GuidedCertificate>,
    pub challenges: Vec<Challenge>,
    pub challenges_met: usize,
    pub verdict: NonClosednessVerdict,
}

fn opens_containing(
    t: &Topology,
    k: &SymbolicSet,
    pool: &[Point],
    max_exceptions: usize,
) -> Vec<SymbolicSet> {
    let g = t.ground();
    let mut out = vec![SymbolicSet::full(g)];
    out.extend(t.small_opens_containing(k));
    let pool: Vec<Point> = pool.iter().copied().filter(|p| !k.contains(p)).collect();
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_exceptions {
        let mut next = Vec::new();
        for f in &frontier {
            let start = f.last().map_or(0, |&l| l + 1);
            for i in start..pool.len() {
                let mut h = f.clone();
                h.push(i);
                let removed =
                    SymbolicSet::from_points(g, h.iter().map(|&j| pool[j])).expect("pool points");
                let v = &SymbolicSet::full(g) - &removed;
                if t.open(&v) {
                    out.push(v);
                }
                next.push(h);
            }
        }
        frontier = next;
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|v| seen.insert(v.clone()));
    out
}

/// The fixed neighborhood grammar for `k`, interleaving basis elements with
/// zero, one and two `Vi`, topped up with seeded random cofinite ones.
pub fn neighborhood_grammar(
    t: &Topology,
    k: &SymbolicSet,
    bounds: &Bounds,
) -> Vec<BasisNeighborhood> {
    let g = t.ground();
    let pool = g.points_up_to(bounds.max_index.min(4));
    let v0s = opens_containing(t, k, &pool, bounds.max_exceptions);
    let mut vis = Vec::new();
    for p in k.first_elements(3) {
        let single = SymbolicSet::singleton(g, p).expect("member point");
        vis.extend(opens_containing(t, &single, &pool, bounds.max_exceptions));
    }
    let cap = bounds.neighborhoods;
    let random_share = if cap > 20 { 20 } else { 0 };
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut push = |n: BasisNeighborhood, out: &mut Vec<BasisNeighborhood>| {
        if seen.insert(n.clone()) {
            out.push(n);
        }
    };
    if !v0s.is_empty() && !vis.is_empty() {
        let mut r = 0;
        while out.len() < cap - random_share && r < 3 * (v0s.len() + vis.len()) {
            let v0 = v0s[(r / 3) % v0s.len()].clone();
            let i1 = (r * 7 + 1) % vis.len();
            let i2 = (r * 13 + 5) % vis.len();
            let vs = match r % 3 {
                0 => vec![],
                1 => vec![vis[i1].clone()],
                _ => vec![vis[i1].clone(), vis[i2].clone()],
            };
            push(BasisNeighborhood { v0, vs }, &mut out);
            r += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(bounds.seed);
    let mut attempts = 0;
    while out.len() < cap && attempts < 50 * cap.max(1) {
        attempts += 1;
        let removed: Vec<Point> = (0..=bounds.max_exceptions)
            .map(|_| sample::random_point(g, &mut rng, 2 * bounds.max_index.max(1)))
            .collect();
        let Ok(removed) = SymbolicSet::from_points(g, removed) else {
            continue;
        };
        let v0 = &SymbolicSet::full(g) - &removed;
        if !t.open(&v0) || !k.subset_of(&v0) {
            continue;
        }
        push(
            BasisNeighborhood {
                v0: v0.clone(),
                vs: vec![v0],
            },
            &mut out,
        );
    }
    out
}

pub fn nonclosedness_report(
    s: &Ifs,
    t: &Topology,
    k: &SymbolicSet,
    bounds: &Bounds,
) -> Result<NonClosednessReport> {
    let membership = is_in_hutchinson_image(s, t, k, bounds)?;
    if let ImageMembership::InImage { .. } = membership {
        return Ok(NonClosednessReport {
            target: k.clone(),
            membership,
            certificate: None,
            challenges: Vec::new(),
            challenges_met: 0,
            verdict: NonClosednessVerdict::NotApplicable,
        });
    }
    let mut certificate = None;
    if k.cardinality() == Cardinality::Finite(1) {
        for b in s.ground().block_ids() {
            if let Some(c) = guided_closure_proof(s, t, k, b)? {
                certificate = Some(c);
                break;
            }
        }
    }
    let neighborhoods = neighborhood_grammar(t, k, bounds);
    let challenges: Vec<Challenge> = neighborhoods
        .into_par_iter()
        .map(|n| {
            let witness = closure_challenge(s, t, k, &n, bounds.max_index)?;
            let image = witness.as_ref().map(|e| s.operator(e));
            Ok(Challenge {
                neighborhood: n,
                witness,
                image,
            })
        })
        .collect::<Result<_>>()?;
    let met = challenges.iter().filter(|c| c.witness.is_some()).count();
    let all_met = !challenges.is_empty() && met == challenges.len();
    let verdict = match (&membership, &certificate) {
        (ImageMembership::NotInImageCertified { .. }, Some(_)) => {
            NonClosednessVerdict::NonClosedCertified
        }
        (m, _) if m.is_outside() && all_met => NonClosednessVerdict::NonClosedEvidence,
        _ => NonClosednessVerdict::Inconclusive,
    };
    Ok(NonClosednessReport {
        target: k.clone(),
        membership,
        certificate,
        challenges,
        challenges_met: met,
        verdict,
    })
}
