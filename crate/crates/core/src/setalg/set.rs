use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use super::ground::{same_ground, AtomId, BlockId, GroundStructure, Point};
use super::index;
use crate::error::{LabError, Result};

/// The restriction of a set to one block: either finitely many indices, or
/// all indices except finitely many.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockPart {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
}

impl BlockPart {
    pub fn empty() -> Self {
        BlockPart::Finite(Vec::new())
    }

    pub fn full() -> Self {
        BlockPart::Cofinite(Vec::new())
    }

    /// Build a part from unsorted indices, rejecting index 0.
    pub fn finite(indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(BlockPart::Finite(checked(indices)?))
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Result<Self> {
        Ok(BlockPart::Cofinite(checked(excluded)?))
    }

    /// The index literals of this part (members or exclusions).
    pub fn literals(&self) -> &[u64] {
        match self {
            BlockPart::Finite(v) | BlockPart::Cofinite(v) => v,
        }
    }

    pub fn is_cofinite(&self) -> bool {
        matches!(self, BlockPart::Cofinite(_))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, BlockPart::Finite(v) if v.is_empty())
    }

    pub fn is_full(&self) -> bool {
        matches!(self, BlockPart::Cofinite(v) if v.is_empty())
    }

    pub fn contains(&self, i: u64) -> bool {
        match self {
            BlockPart::Finite(v) => index::contains(v, i),
            BlockPart::Cofinite(v) => i >= 1 && !index::contains(v, i),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        use BlockPart::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(index::union(a, b)),
            (Finite(a), Cofinite(l)) | (Cofinite(l), Finite(a)) => {
                Cofinite(index::difference(l, a))
            }
            (Cofinite(a), Cofinite(b)) => Cofinite(index::intersect(a, b)),
        }
    }

    pub fn intersect(&self, other: &Self) -> Self {
        use BlockPart::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(index::intersect(a, b)),
            (Finite(a), Cofinite(l)) | (Cofinite(l), Finite(a)) => Finite(index::difference(a, l)),
            (Cofinite(a), Cofinite(b)) => Cofinite(index::union(a, b)),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            BlockPart::Finite(v) => BlockPart::Cofinite(v.clone()),
            BlockPart::Cofinite(v) => BlockPart::Finite(v.clone()),
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        use BlockPart::*;
        match (self, other) {
            (Finite(a), Finite(b)) => index::is_subset(a, b),
            (Finite(a), Cofinite(l)) => index::is_disjoint(a, l),
            (Cofinite(_), Finite(_)) => false,
            (Cofinite(a), Cofinite(b)) => index::is_subset(b, a),
        }
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// Smallest member index, if any.
    pub fn first(&self) -> Option<u64> {
        match self {
            BlockPart::Finite(v) => v.first().copied(),
            BlockPart::Cofinite(v) => Some(index::first_gap(v)),
        }
    }
}

fn checked(indices: impl IntoIterator<Item = u64>) -> Result<Vec<u64>> {
    let v = index::normalize(indices.into_iter().collect());
    if v.first() == Some(&0) {
        return Err(LabError::InvalidPoint("block indices start at 1".into()));
    }
    Ok(v)
}

/// Number of points in a set; sets with a cofinite block part are infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

/// An exact subset of the ground space in canonical finite/cofinite normal
/// form. Two values are equal iff they denote the same subset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolicSet {
    ground: Arc<GroundStructure>,
    atoms: Vec<bool>,
    parts: Vec<BlockPart>,
}

impl SymbolicSet {
    pub fn empty(ground: &Arc<GroundStructure>) -> Self {
        Self {
            ground: ground.clone(),
            atoms: vec![false; ground.atom_count()],
            parts: vec![BlockPart::empty(); ground.block_count()],
        }
    }

    pub fn full(ground: &Arc<GroundStructure>) -> Self {
        Self {
            ground: ground.clone(),
            atoms: vec![true; ground.atom_count()],
            parts: vec![BlockPart::full(); ground.block_count()],
        }
    }

    /// Assemble a set from per-atom flags and per-block parts. Lengths must
    /// match the ground structure.
    pub fn from_parts(
        ground: &Arc<GroundStructure>,
        atoms: Vec<bool>,
        parts: Vec<BlockPart>,
    ) -> Result<Self> {
        if atoms.len() != ground.atom_count() || parts.len() != ground.block_count() {
            return Err(LabError::GroundMismatch);
        }
        for p in &parts {
            let lits = p.literals();
            if lits.windows(2).any(|w| w[0] >= w[1]) || lits.first() == Some(&0) {
                return Err(LabError::InvalidPoint(
                    "index lists must be positive, sorted and duplicate-free".into(),
                ));
            }
        }
        Ok(Self {
            ground: ground.clone(),
            atoms,
            parts,
        })
    }

    pub fn singleton(ground: &Arc<GroundStructure>, p: Point) -> Result<Self> {
        Self::from_points(ground, [p])
    }

    pub fn from_points(
        ground: &Arc<GroundStructure>,
        points: impl IntoIterator<Item = Point>,
    ) -> Result<Self> {
        let mut atoms = vec![false; ground.atom_count()];
        let mut idx: Vec<Vec<u64>> = vec![Vec::new(); ground.block_count()];
        for p in points {
            ground.check_point(&p)?;
            match p {
                Point::Atom(a) => atoms[a.0] = true,
                Point::Elem(b, i) => idx[b.0].push(i),
            }
        }
        let parts = idx
            .into_iter()
            .map(|v| BlockPart::Finite(index::normalize(v)))
            .collect();
        Ok(Self {
            ground: ground.clone(),
            atoms,
            parts,
        })
    }

    pub fn atom(ground: &Arc<GroundStructure>, a: AtomId) -> Self {
        let mut s = Self::empty(ground);
        s.atoms[a.0] = true;
        s
    }

    pub fn block(ground: &Arc<GroundStructure>, b: BlockId) -> Self {
        Self::block_part(ground, b, BlockPart::full())
    }

    pub fn block_part(ground: &Arc<GroundStructure>, b: BlockId, part: BlockPart) -> Self {
        let mut s = Self::empty(ground);
        s.parts[b.0] = part;
        s
    }

    pub fn ground(&self) -> &Arc<GroundStructure> {
        &self.ground
    }

    pub fn atom_flags(&self) -> &[bool] {
        &self.atoms
    }

    pub fn has_atom(&self, a: AtomId) -> bool {
        self.atoms[a.0]
    }

    pub fn parts(&self) -> &[BlockPart] {
        &self.parts
    }

    pub fn part(&self, b: BlockId) -> &BlockPart {
        &self.parts[b.0]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_ground(&self.ground, &other.ground) {
            Ok(())
        } else {
            Err(LabError::GroundMismatch)
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        atom: impl Fn(bool, bool) -> bool,
        part: impl Fn(&BlockPart, &BlockPart) -> BlockPart,
    ) -> Self {
        assert!(
            same_ground(&self.ground, &other.ground),
            "set operation across different ground structures"
        );
        Self {
            ground: self.ground.clone(),
            atoms: self
                .atoms
                .iter()
                .zip(&other.atoms)
                .map(|(&x, &y)| atom(x, y))
                .collect(),
            parts: self
                .parts
                .iter()
                .zip(&other.parts)
                .map(|(x, y)| part(x, y))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |x, y| x || y, BlockPart::union))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |x, y| x && y, BlockPart::intersect))
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.zip_with(other, |x, y| x && !y, BlockPart::difference))
    }

    pub fn complement(&self) -> Self {
        Self {
            ground: self.ground.clone(),
            atoms: self.atoms.iter().map(|x| !x).collect(),
            parts: self.parts.iter().map(BlockPart::complement).collect(),
        }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.subset_of(other))
    }

    pub(crate) fn subset_of(&self, other: &Self) -> bool {
        self.atoms.iter().zip(&other.atoms).all(|(&x, &y)| !x || y)
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(x, y)| x.is_subset(y))
    }

    pub(crate) fn meets(&self, other: &Self) -> bool {
        self.atoms.iter().zip(&other.atoms).any(|(&x, &y)| x && y)
            || self
                .parts
                .iter()
                .zip(&other.parts)
                .any(|(x, y)| !x.is_disjoint(y))
    }

    /// Identity of representations, which by canonicity is identity of sets.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self == other)
    }

    /// Points outside the ground structure are never members.
    pub fn contains(&self, p: &Point) -> bool {
        match *p {
            Point::Atom(a) => self.atoms.get(a.0).copied().unwrap_or(false),
            Point::Elem(b, i) => self.parts.get(b.0).is_some_and(|part| part.contains(i)),
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.atoms.iter().any(|&x| x) && self.parts.iter().all(BlockPart::is_empty)
    }

    pub fn is_full(&self) -> bool {
        self.atoms.iter().all(|&x| x) && self.parts.iter().all(BlockPart::is_full)
    }

    pub fn is_finite(&self) -> bool {
        !self.parts.iter().any(BlockPart::is_cofinite)
    }

    /// Complement is finite.
    pub fn is_cofinite(&self) -> bool {
        self.parts.iter().all(BlockPart::is_cofinite)
    }

    pub fn cardinality(&self) -> Cardinality {
        if !self.is_finite() {
            return Cardinality::Infinite;
        }
        let atoms = self.atoms.iter().filter(|&&x| x).count() as u64;
        let elems: u64 = self.parts.iter().map(|p| p.literals().len() as u64).sum();
        Cardinality::Finite(atoms + elems)
    }

    /// The members of a finite set in canonical order.
    pub fn elements(&self) -> Option<Vec<Point>> {
        if !self.is_finite() {
            return None;
        }
        let mut out: Vec<Point> = self
            .ground
            .atom_ids()
            .filter(|a| self.atoms[a.0])
            .map(Point::Atom)
            .collect();
        for b in self.ground.block_ids() {
            out.extend(
                self.parts[b.0]
                    .literals()
                    .iter()
                    .map(|&i| Point::Elem(b, i)),
            );
        }
        Some(out)
    }

    /// Canonically smallest member: atoms first, then blocks in order, then index.
    pub fn first_element(&self) -> Option<Point> {
        if let Some(a) = self.ground.atom_ids().find(|a| self.atoms[a.0]) {
            return Some(Point::Atom(a));
        }
        self.ground
            .block_ids()
            .find_map(|b| self.parts[b.0].first().map(|i| Point::Elem(b, i)))
    }

    /// The first `n` members in canonical order (fewer if the set is smaller).
    pub fn first_elements(&self, n: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(n);
        let mut rest = self.clone();
        while out.len() < n {
            match rest.first_element() {
                Some(p) => {
                    out.push(p);
                    rest = &rest - &SymbolicSet::from_points(&self.ground, [p]).unwrap();
                }
                None => break,
            }
        }
        out
    }

    /// Largest index literal appearing in the representation, or 0.
    pub fn max_index(&self) -> u64 {
        self.parts
            .iter()
            .filter_map(|p| p.literals().last().copied())
            .max()
            .unwrap_or(0)
    }

    /// Index literals mentioned for block `b`.
    pub fn literals(&self, b: BlockId) -> &[u64] {
        self.parts[b.0].literals()
    }
}

impl BitOr for &SymbolicSet {
    type Output = SymbolicSet;
    /// Panics when the operands have different ground structures; use
    /// [`SymbolicSet::union`] for a fallible version.
    fn bitor(self, rhs: Self) -> SymbolicSet {
        self.zip_with(rhs, |x, y| x || y, BlockPart::union)
    }
}

impl BitAnd for &SymbolicSet {
    type Output = SymbolicSet;
    fn bitand(self, rhs: Self) -> SymbolicSet {
        self.zip_with(rhs, |x, y| x && y, BlockPart::intersect)
    }
}

impl Sub for &SymbolicSet {
    type Output = SymbolicSet;
    fn sub(self, rhs: Self) -> SymbolicSet {
        self.zip_with(rhs, |x, y| x && !y, BlockPart::difference)
    }
}

impl Not for &SymbolicSet {
    type Output = SymbolicSet;
    fn not(self) -> SymbolicSet {
        self.complement()
    }
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

/// Renders in the config expression syntax: `X`, `empty`, or a `|`-joined
/// union of `atom:a`, `block:B[i,j]`, `B` and `cofinite(B, [i,j])` terms.
impl fmt::Display for SymbolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_full() {
            return f.write_str("X");
        }
        if self.is_empty() {
            return f.write_str("empty");
        }
        let mut terms = Vec::new();
        for a in self.ground.atom_ids() {
            if self.atoms[a.0] {
                terms.push(format!("atom:{}", self.ground.atom_name(a)));
            }
        }
        for b in self.ground.block_ids() {
            let name = self.ground.block_name(b);
            match &self.parts[b.0] {
                BlockPart::Finite(v) if v.is_empty() => {}
                BlockPart::Finite(v) => terms.push(format!("block:{name}[{}]", join(v))),
                BlockPart::Cofinite(v) if v.is_empty() => terms.push(name.to_string()),
                BlockPart::Cofinite(v) => terms.push(format!("cofinite({name}, [{}])", join(v))),
            }
        }
        f.write_str(&terms.join(" | "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground() -> Arc<GroundStructure> {
        GroundStructure::new(["a", "b"], ["ODD", "EVEN"]).unwrap()
    }

    fn odd(g: &Arc<GroundStructure>) -> SymbolicSet {
        SymbolicSet::block(g, g.block_id("ODD").unwrap())
    }

    fn even_ab(g: &Arc<GroundStructure>) -> SymbolicSet {
        let ab = SymbolicSet::from_points(g, [g.atom("a").unwrap(), g.atom("b").unwrap()]).unwrap();
        &ab | &SymbolicSet::block(g, g.block_id("EVEN").unwrap())
    }

    #[test]
    fn union_with_self_image() {
        let g = ground();
        let img = even_ab(&g);
        assert_eq!(img.union(&img).unwrap(), img);
        let e = SymbolicSet::empty(&g);
        assert_eq!(img.union(&e).unwrap(), img);
    }

    #[test]
    fn finite_union_cofinite_fills_block() {
        let g = ground();
        let b = g.block_id("ODD").unwrap();
        let fin = SymbolicSet::block_part(&g, b, BlockPart::finite([1, 3]).unwrap());
        let cof = SymbolicSet::block_part(&g, b, BlockPart::cofinite([1]).unwrap());
        assert_eq!(&fin | &cof, odd(&g));
    }

    #[test]
    fn intersections() {
        let g = ground();
        assert!((&even_ab(&g) & &odd(&g)).is_empty());
        let e = g.block_id("EVEN").unwrap();
        let x = SymbolicSet::block_part(&g, e, BlockPart::cofinite([2]).unwrap());
        let y = SymbolicSet::block_part(&g, e, BlockPart::cofinite([5]).unwrap());
        assert_eq!(
            &x & &y,
            SymbolicSet::block_part(&g, e, BlockPart::cofinite([2, 5]).unwrap())
        );
        let full = SymbolicSet::full(&g);
        assert_eq!(x.intersect(&full).unwrap(), x);
    }

    #[test]
    fn complement_of_singleton_elem() {
        let g = ground();
        assert!(SymbolicSet::full(&g).complement().is_empty());
        let z = g.elem("EVEN", 4).unwrap();
        let v = SymbolicSet::singleton(&g, z).unwrap().complement();
        assert_eq!(v.atom_flags(), &[true, true]);
        assert_eq!(v.part(g.block_id("ODD").unwrap()), &BlockPart::full());
        assert_eq!(
            v.part(g.block_id("EVEN").unwrap()),
            &BlockPart::Cofinite(vec![4])
        );
        assert!(!v.contains(&z));
    }

    #[test]
    fn predicates() {
        let g = ground();
        let s = even_ab(&g);
        assert!(s.contains(&g.elem("EVEN", 3).unwrap()));
        assert!(!s.contains(&g.elem("ODD", 3).unwrap()));
        assert!(!s.is_finite());
        assert_eq!(s.cardinality(), Cardinality::Infinite);
        let ab = &s - &SymbolicSet::block(&g, g.block_id("EVEN").unwrap());
        assert_eq!(ab.cardinality(), Cardinality::Finite(2));
        assert_eq!(ab.elements().unwrap().len(), 2);
    }

    #[test]
    fn mismatched_grounds_are_errors() {
        let g1 = ground();
        let g2 = GroundStructure::new(["a"], ["B"]).unwrap();
        let x = SymbolicSet::full(&g1);
        let y = SymbolicSet::full(&g2);
        assert_eq!(x.union(&y), Err(LabError::GroundMismatch));
        assert_eq!(x.intersect(&y), Err(LabError::GroundMismatch));
        assert_eq!(x.difference(&y), Err(LabError::GroundMismatch));
        assert_eq!(x.equals(&y), Err(LabError::GroundMismatch));
        // structurally equal grounds built separately are compatible
        let g3 = ground();
        assert!(x.equals(&SymbolicSet::full(&g3)).unwrap());
    }

    #[test]
    fn first_element_is_canonical() {
        let g = ground();
        let e = g.block_id("EVEN").unwrap();
        let s = SymbolicSet::block_part(&g, e, BlockPart::cofinite([1, 2, 4]).unwrap());
        assert_eq!(s.first_element(), Some(Point::Elem(e, 3)));
        assert_eq!(
            s.first_elements(2),
            vec![Point::Elem(e, 3), Point::Elem(e, 5)]
        );
        assert_eq!(even_ab(&g).first_element(), Some(g.atom("a").unwrap()));
        assert_eq!(SymbolicSet::empty(&g).first_element(), None);
    }

    #[test]
    fn rendering() {
        let g = ground();
        assert_eq!(SymbolicSet::full(&g).to_string(), "X");
        assert_eq!(SymbolicSet::empty(&g).to_string(), "empty");
        assert_eq!(even_ab(&g).to_string(), "atom:a | atom:b | EVEN");
        let o = g.block_id("ODD").unwrap();
        let s = SymbolicSet::block_part(&g, o, BlockPart::cofinite([3, 1]).unwrap());
        assert_eq!(s.to_string(), "cofinite(ODD, [1,3])");
    }

    #[test]
    fn from_parts_rejects_unsorted() {
        let g = ground();
        let bad = SymbolicSet::from_parts(
            &g,
            vec![false, false],
            vec![BlockPart::Finite(vec![3, 1]), BlockPart::empty()],
        );
        assert!(bad.is_err());
        assert!(BlockPart::finite([0]).is_err());
    }
}
