//! Iterated function systems, their Hutchinson operator, word-image dynamics,
//! contractivity certificates and attractors.
//!
//! A word `(i₁, …, iₙ)` denotes the composition `f_{i₁} ∘ … ∘ f_{iₙ}`, so
//! `f_{iₙ}` is applied first. With this convention the image of `X` under a
//! word is contained in the image under each of its prefixes.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{Bounds, DEFAULT_CHAIN_STEPS};
use crate::enumerate::ShapeGrammar;
use crate::error::{LabError, Result};
use crate::maps::PiecewiseMap;
use crate::setalg::{same_ground, GroundStructure, SymbolicSet};
use crate::topology::Topology;

const MAX_WORDS: usize = 1 << 20;

#[derive(Debug)]
pub struct Ifs {
    ground: Arc<GroundStructure>,
    maps: Vec<PiecewiseMap>,
    depth_cache: Mutex<Vec<Arc<BTreeSet<SymbolicSet>>>>,
}

impl Clone for Ifs {
    fn clone(&self) -> Self {
        Self::new(self.maps.clone()).expect("already validated")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    /// `indices` are zero-based positions in the map list.
    pub fn new(indices: Vec<usize>, map_count: usize) -> Result<Self> {
        if let Some(&bad) = indices.iter().find(|&&i| i >= map_count) {
            return Err(LabError::Precondition(format!(
                "word index {} out of range 1..={map_count}",
                bad + 1
            )));
        }
        Ok(Word(indices))
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word(self.0[..k].to_vec())
    }

    /// All `m^n` words of length `n` in lexicographic order.
    pub fn all(map_count: usize, n: usize) -> Result<Vec<Word>> {
        let total = (0..n).try_fold(1usize, |acc, _| acc.checked_mul(map_count));
        match total {
            Some(t) if t <= MAX_WORDS => {}
            _ => {
                return Err(LabError::Precondition(format!(
                    "{map_count}^{n} words exceed the enumeration budget"
                )))
            }
        }
        let mut words = vec![Vec::new()];
        for _ in 0..n {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..map_count).map(move |i| {
                        let mut v = w.clone();
                        v.push(i);
                        v
                    })
                })
                .collect();
        }
        Ok(words.into_iter().map(Word).collect())
    }
}

/// One-based, as in `(1,2,1)`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordImageCollection {
    pub depth: usize,
    #[serde(serialize_with = "crate::ser::set_tree")]
    pub images: Arc<BTreeSet<SymbolicSet>>,
}

impl WordImageCollection {
    pub fn all_singletons(&self) -> bool {
        self.images
            .iter()
            .all(|s| s.cardinality() == crate::setalg::Cardinality::Finite(1))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum ContractivityVerdict {
    /// Every word image at this depth is a singleton.
    Certified { depth: usize },
    /// The word-image collection is stationary and one member contains both
    /// points, so the cover `{X \ {x}, X \ {y}}` has no depth.
    Refuted {
        x: String,
        y: String,
        #[serde(serialize_with = "crate::ser::set_tree")]
        stable: Arc<BTreeSet<SymbolicSet>>,
        #[serde(serialize_with = "crate::ser::set_vec")]
        cover: Vec<SymbolicSet>,
    },
    Inconclusive {
        reached: usize,
        note: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AttractorVerdict {
    Attractor {
        #[serde(serialize_with = "crate::ser::set")]
        set: SymbolicSet,
        steps: usize,
    },
    Inconclusive {
        reached: usize,
    },
}

impl AttractorVerdict {
    pub fn set(&self) -> Option<&SymbolicSet> {
        match self {
            AttractorVerdict::Attractor { set, .. } => Some(set),
            AttractorVerdict::Inconclusive { .. } => None,
        }
    }
}

/// A word separating two candidate fixed points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DistinguishingWord {
    /// Canonically first point of `E1 \ E2`.
    pub z: String,
    pub word: Word,
    /// The word's image of `X`; it must avoid `E2`.
    #[serde(serialize_with = "crate::ser::set")]
    pub image_of_space: SymbolicSet,
    /// The word's image of `E2`, nonempty and disjoint from `E2`, so
    /// `Fⁿ(E2) ⊄ E2`.
    #[serde(serialize_with = "crate::ser::set")]
    pub escaping_image: SymbolicSet,
}

impl Ifs {
    pub fn new(maps: Vec<PiecewiseMap>) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(LabError::Precondition(
                "an IFS needs at least one map".into(),
            ));
        };
        let ground = first.ground().clone();
        if maps.iter().any(|m| !same_ground(m.ground(), &ground)) {
            return Err(LabError::GroundMismatch);
        }
        let level0 = Arc::new(BTreeSet::from([SymbolicSet::full(&ground)]));
        Ok(Self {
            ground,
            maps,
            depth_cache: Mutex::new(vec![level0]),
        })
    }

    pub fn ground(&self) -> &Arc<GroundStructure> {
        &self.ground
    }

    pub fn maps(&self) -> &[PiecewiseMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    fn check(&self, a: &SymbolicSet) -> Result<()> {
        if same_ground(a.ground(), &self.ground) {
            Ok(())
        } else {
            Err(LabError::GroundMismatch)
        }
    }

    /// `F(K) = f₁[K] ∪ … ∪ f_m[K]` for nonempty `K`.
    pub fn hutchinson(&self, k: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(k)?;
        if k.is_empty() {
            return Err(LabError::EmptySet("the Hutchinson operator"));
        }
        Ok(self.operator(k))
    }

    pub(crate) fn operator(&self, k: &SymbolicSet) -> SymbolicSet {
        self.maps
            .iter()
            .map(|m| m.image_of(k))
            .reduce(|x, y| &x | &y)
            .expect("nonempty ifs")
    }

    pub fn word_image(&self, word: &Word, a: &SymbolicSet) -> Result<SymbolicSet> {
        self.check(a)?;
        if let Some(&bad) = word.indices().iter().find(|&&i| i >= self.maps.len()) {
            return Err(LabError::Precondition(format!(
                "word index {} out of range",
                bad + 1
            )));
        }
        Ok(word
            .indices()
            .iter()
            .rev()
            .fold(a.clone(), |s, &i| self.maps[i].image_of(&s)))
    }

    /// The distinct images of `X` under all words of length `n`. Levels are
    /// memoized; concurrent callers may compute the same level, and the
    /// first stored copy wins.
    pub fn depth_images(&self, n: usize) -> WordImageCollection {
        loop {
            let (have, last) = {
                let cache = self.depth_cache.lock().expect("cache lock");
                if let Some(level) = cache.get(n) {
                    return WordImageCollection {
                        depth: n,
                        images: level.clone(),
                    };
                }
                (cache.len(), cache.last().cloned().expect("level 0 present"))
            };
            let next: BTreeSet<SymbolicSet> = last
                .par_iter()
                .flat_map_iter(|a| self.maps.iter().map(move |m| m.image_of(a)))
                .collect();
            let mut cache = self.depth_cache.lock().expect("cache lock");
            if cache.len() == have {
                cache.push(Arc::new(next));
            }
        }
    }

    pub fn contractivity_certificate(
        &self,
        t: &Topology,
        n_max: usize,
    ) -> Result<ContractivityVerdict> {
        if n_max == 0 {
            return Err(LabError::Precondition("n_max must be >= 1".into()));
        }
        if !same_ground(t.ground(), &self.ground) {
            return Err(LabError::GroundMismatch);
        }
        let mut prev = self.depth_images(0);
        for k in 1..=n_max {
            let cur = self.depth_images(k);
            if cur.all_singletons() {
                return Ok(ContractivityVerdict::Certified { depth: k });
            }
            if cur.images == prev.images {
                let wide = cur
                    .images
                    .iter()
                    .find(|s| s.first_elements(2).len() == 2)
                    .expect("not all singletons");
                let pair = wide.first_elements(2);
                let cover: Vec<SymbolicSet> = pair
                    .iter()
                    .map(|p| SymbolicSet::singleton(&self.ground, *p).map(|s| s.complement()))
                    .collect::<Result<_>>()?;
                if !t.cover_check(&cover)? {
                    return Ok(ContractivityVerdict::Inconclusive {
                        reached: k,
                        note: Some(format!(
                            "collection is stationary but {{X \\ {{{}}}, X \\ {{{}}}}} is not an open cover",
                            self.ground.label(&pair[0]),
                            self.ground.label(&pair[1])
                        )),
                    });
                }
                return Ok(ContractivityVerdict::Refuted {
                    x: self.ground.label(&pair[0]),
                    y: self.ground.label(&pair[1]),
                    stable: cur.images,
                    cover,
                });
            }
            prev = cur;
        }
        Ok(ContractivityVerdict::Inconclusive {
            reached: n_max,
            note: None,
        })
    }

    /// Iterate `F` from `X`. The iterates decrease, and a stationary value is
    /// the largest fixed point: any fixed `E` satisfies `E = Fʲ(E) ⊆ Fʲ(X)`.
    pub fn attractor_from_space(&self, t: &Topology, n_max: usize) -> Result<AttractorVerdict> {
        if !same_ground(t.ground(), &self.ground) {
            return Err(LabError::GroundMismatch);
        }
        let mut k = SymbolicSet::full(&self.ground);
        for j in 0..n_max {
            let next = self.operator(&k);
            if !next.subset_of(&k) {
                return Err(LabError::Integrity(format!(
                    "iterate {} is not inside iterate {j}",
                    j + 1
                )));
            }
            if next == k {
                if !t.closed(&k) {
                    return Err(LabError::Integrity(format!(
                        "stationary set {k} is not closed"
                    )));
                }
                return Ok(AttractorVerdict::Attractor { set: k, steps: j });
            }
            k = next;
        }
        Ok(AttractorVerdict::Inconclusive { reached: n_max })
    }

    /// Nonempty closed fixed points of `F` among the shape grammar, plus the
    /// iterated attractor when iteration is conclusive. Sorted canonically.
    pub fn fixed_point_search(&self, t: &Topology, bounds: &Bounds) -> Result<Vec<SymbolicSet>> {
        if !same_ground(t.ground(), &self.ground) {
            return Err(LabError::GroundMismatch);
        }
        let grammar = ShapeGrammar::new(&self.ground, bounds.max_exceptions, bounds.max_index);
        let mut found: Vec<SymbolicSet> = (0..grammar.len())
            .into_par_iter()
            .filter_map(|i| {
                let e = grammar.get(i);
                (!e.is_empty() && self.operator(&e) == e && t.closed(&e)).then_some(e)
            })
            .collect();
        if let AttractorVerdict::Attractor { set, .. } =
            self.attractor_from_space(t, DEFAULT_CHAIN_STEPS)?
        {
            found.push(set);
        }
        found.sort();
        found.dedup();
        Ok(found)
    }

    fn check_fixed(&self, t: &Topology, e: &SymbolicSet, name: &str) -> Result<()> {
        self.check(e)?;
        if e.is_empty() {
            return Err(LabError::ContractViolation(format!("{name} is empty")));
        }
        if !t.closed(e) {
            return Err(LabError::ContractViolation(format!(
                "{name} = {e} is not closed"
            )));
        }
        let fe = self.operator(e);
        if &fe != e {
            return Err(LabError::ContractViolation(format!(
                "{name} = {e} is not a fixed point: F({name}) = {fe}"
            )));
        }
        Ok(())
    }

    /// Search for a word contradicting that two distinct closed sets are both
    /// fixed. Both inputs are checked first; for genuine fixed points of a
    /// contractive system the answer is always `None`.
    pub fn separation_witness(
        &self,
        t: &Topology,
        e1: &SymbolicSet,
        e2: &SymbolicSet,
        depth: usize,
    ) -> Result<Option<DistinguishingWord>> {
        self.check_fixed(t, e1, "E1")?;
        self.check_fixed(t, e2, "E2")?;
        if e1 == e2 {
            return Ok(None);
        }
        self.distinguishing_word(e1, e2, depth)
    }

    /// The unchecked core: pick the first `z ∈ E1 \ E2`, find a word of length
    /// `depth` whose image of `E1` contains `z`, confirm its image of `X`
    /// avoids `E2`, and report its image of `E2`.
    pub fn distinguishing_word(
        &self,
        e1: &SymbolicSet,
        e2: &SymbolicSet,
        depth: usize,
    ) -> Result<Option<DistinguishingWord>> {
        self.check(e1)?;
        self.check(e2)?;
        let Some(z) = (e1 - e2).first_element() else {
            return Ok(None);
        };
        let outside = e2.complement();
        for word in Word::all(self.maps.len(), depth)? {
            if !self.word_image(&word, e1)?.contains(&z) {
                continue;
            }
            let image_of_space = self.word_image(&word, &SymbolicSet::full(&self.ground))?;
            if !image_of_space.subset_of(&outside) {
                return Err(LabError::ContractViolation(format!(
                    "word {word} maps X onto {image_of_space}, which contains {} and meets E2; depth {depth} does not certify contractivity",
                    self.ground.label(&z)
                )));
            }
            let escaping_image = self.word_image(&word, e2)?;
            return Ok(Some(DistinguishingWord {
                z: self.ground.label(&z),
                word,
                image_of_space,
                escaping_image,
            }));
        }
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::OddEven;

    #[test]
    fn hutchinson_values() {
        let m = OddEven::new();
        let s = m.ifs();
        assert_eq!(s.hutchinson(&m.x()).unwrap(), m.even_ab());
        let ab = m.point_set(&[m.a(), m.b()]);
        assert_eq!(s.hutchinson(&ab).unwrap(), ab);
        for n in 1..=6 {
            assert_eq!(
                s.hutchinson(&m.point_set(&[m.odd_pt(n)])).unwrap(),
                m.point_set(&[m.even(n)])
            );
        }
        assert_eq!(
            s.hutchinson(&SymbolicSet::empty(&m.ground)),
            Err(LabError::EmptySet("the Hutchinson operator"))
        );
    }

    #[test]
    fn depth_collections() {
        let m = OddEven::new();
        let s = m.ifs();
        assert_eq!(*s.depth_images(0).images, BTreeSet::from([m.x()]));
        assert_eq!(*s.depth_images(1).images, BTreeSet::from([m.even_ab()]));
        assert_eq!(
            *s.depth_images(2).images,
            BTreeSet::from([m.point_set(&[m.a(), m.b()])])
        );
        assert_eq!(
            *s.depth_images(3).images,
            BTreeSet::from([m.point_set(&[m.a()]), m.point_set(&[m.b()])])
        );
    }

    #[test]
    fn contractivity() {
        let m = OddEven::new();
        assert_eq!(
            m.ifs().contractivity_certificate(&m.topology, 10).unwrap(),
            ContractivityVerdict::Certified { depth: 3 }
        );
        let single = Ifs::new(vec![m.f.clone()]).unwrap();
        assert_eq!(
            single.contractivity_certificate(&m.topology, 10).unwrap(),
            ContractivityVerdict::Certified { depth: 3 }
        );
        let id = Ifs::new(vec![PiecewiseMap::identity(&m.ground)]).unwrap();
        match id.contractivity_certificate(&m.topology, 10).unwrap() {
            ContractivityVerdict::Refuted { x, y, cover, .. } => {
                assert_eq!((x.as_str(), y.as_str()), ("atom:a", "atom:b"));
                assert!(m.topology.cover_check(&cover).unwrap());
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn attractors() {
        let m = OddEven::new();
        let ab = m.point_set(&[m.a(), m.b()]);
        assert_eq!(
            m.ifs().attractor_from_space(&m.topology, 10).unwrap(),
            AttractorVerdict::Attractor { set: ab, steps: 2 }
        );
        let id = Ifs::new(vec![PiecewiseMap::identity(&m.ground)]).unwrap();
        assert_eq!(
            id.attractor_from_space(&m.topology, 10).unwrap(),
            AttractorVerdict::Attractor {
                set: m.x(),
                steps: 0
            }
        );
        let single = Ifs::new(vec![m.f.clone()]).unwrap();
        assert_eq!(
            single.attractor_from_space(&m.topology, 10).unwrap(),
            AttractorVerdict::Attractor {
                set: m.point_set(&[m.a()]),
                steps: 3
            }
        );
        assert_eq!(
            m.ifs().attractor_from_space(&m.topology, 2).unwrap(),
            AttractorVerdict::Inconclusive { reached: 2 }
        );
    }

    #[test]
    fn identity_fixes_every_closed_shape() {
        let m = OddEven::new();
        let id = Ifs::new(vec![PiecewiseMap::identity(&m.ground)]).unwrap();
        let bounds = Bounds {
            max_exceptions: 1,
            max_index: 3,
            ..Bounds::default()
        };
        let found = id.fixed_point_search(&m.topology, &bounds).unwrap();
        let grammar = ShapeGrammar::new(&m.ground, 1, 3);
        let closed: BTreeSet<_> = grammar
            .iter()
            .filter(|e| !e.is_empty() && m.topology.is_closed(e).unwrap())
            .collect();
        assert_eq!(found.into_iter().collect::<BTreeSet<_>>(), closed);
    }

    #[test]
    fn witness_paths() {
        let m = OddEven::new();
        let s = m.ifs();
        let ab = m.point_set(&[m.a(), m.b()]);
        assert_eq!(
            s.separation_witness(&m.topology, &ab, &ab, 3).unwrap(),
            None
        );

        let b_only = m.point_set(&[m.b()]);
        assert!(matches!(
            s.separation_witness(&m.topology, &ab, &b_only, 3),
            Err(LabError::ContractViolation(_))
        ));
        // the unchecked core still exhibits why {b} cannot be fixed
        let w = s.distinguishing_word(&ab, &b_only, 3).unwrap().unwrap();
        assert_eq!(w.z, "atom:a");
        assert!(!w.escaping_image.is_empty());
        assert!(!w.escaping_image.is_subset(&b_only).unwrap());

        let single = Ifs::new(vec![m.f.clone()]).unwrap();
        let a_only = m.point_set(&[m.a()]);
        assert!(matches!(
            single.separation_witness(&m.topology, &a_only, &b_only, 3),
            Err(LabError::ContractViolation(_))
        ));
    }

    #[test]
    fn words() {
        assert_eq!(Word::all(2, 3).unwrap().len(), 8);
        assert_eq!(Word::all(3, 0).unwrap(), vec![Word(vec![])]);
        assert!(Word::new(vec![0, 2], 2).is_err());
        assert_eq!(Word::new(vec![0, 1], 2).unwrap().to_string(), "(1,2)");
    }
}
