use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AtomId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockId(pub usize);

/// The shape of a ground space: finitely many named atoms plus finitely many
/// disjoint, countably infinite blocks whose elements are indexed `1, 2, 3, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundStructure {
    atoms: Vec<String>,
    blocks: Vec<String>,
}

impl GroundStructure {
    pub fn new<A, B>(atoms: A, blocks: B) -> Result<Arc<Self>>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        B: IntoIterator,
        B::Item: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        let blocks: Vec<String> = blocks.into_iter().map(Into::into).collect();
        if atoms.is_empty() && blocks.is_empty() {
            return Err(LabError::InvalidGround(
                "at least one atom or block is required".into(),
            ));
        }
        let mut seen = HashSet::new();
        for name in atoms.iter().chain(blocks.iter()) {
            if name.is_empty() {
                return Err(LabError::InvalidGround("names must be nonempty".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(LabError::InvalidGround(format!("duplicate name `{name}`")));
            }
        }
        Ok(Arc::new(Self { atoms, blocks }))
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn atom_ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.atoms.len()).map(AtomId)
    }

    pub fn block_ids(&self) -> impl Iterator<Item = BlockId> + '_ {
        (0..self.blocks.len()).map(BlockId)
    }

    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atoms[id.0]
    }

    pub fn block_name(&self, id: BlockId) -> &str {
        &self.blocks[id.0]
    }

    pub fn atom_id(&self, name: &str) -> Result<AtomId> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .map(AtomId)
            .ok_or_else(|| LabError::UnknownAtom(name.to_string()))
    }

    pub fn block_id(&self, name: &str) -> Result<BlockId> {
        self.blocks
            .iter()
            .position(|b| b == name)
            .map(BlockId)
            .ok_or_else(|| LabError::UnknownBlock(name.to_string()))
    }

    pub fn atom(&self, name: &str) -> Result<Point> {
        self.atom_id(name).map(Point::Atom)
    }

    pub fn elem(&self, block: &str, index: u64) -> Result<Point> {
        let id = self.block_id(block)?;
        let p = Point::Elem(id, index);
        self.check_point(&p)?;
        Ok(p)
    }

    pub fn check_point(&self, p: &Point) -> Result<()> {
        match *p {
            Point::Atom(AtomId(i)) if i < self.atoms.len() => Ok(()),
            Point::Atom(AtomId(i)) => Err(LabError::InvalidPoint(format!("atom id {i}"))),
            Point::Elem(BlockId(b), _) if b >= self.blocks.len() => {
                Err(LabError::InvalidPoint(format!("block id {b}")))
            }
            Point::Elem(b, 0) => Err(LabError::InvalidPoint(format!(
                "block:{}[0]: indices start at 1",
                self.block_name(b)
            ))),
            Point::Elem(..) => Ok(()),
        }
    }

    /// Every atom followed by the elements of each block with index `<= max_index`.
    pub fn points_up_to(&self, max_index: u64) -> Vec<Point> {
        let mut out: Vec<Point> = self.atom_ids().map(Point::Atom).collect();
        for b in self.block_ids() {
            out.extend((1..=max_index).map(|i| Point::Elem(b, i)));
        }
        out
    }

    pub fn label(&self, p: &Point) -> String {
        match *p {
            Point::Atom(a) => format!("atom:{}", self.atom_name(a)),
            Point::Elem(b, i) => format!("block:{}[{i}]", self.block_name(b)),
        }
    }
}

/// A point of the ground space. The derived order is the canonical one:
/// atoms before block elements, then declaration order, then index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Atom(AtomId),
    Elem(BlockId, u64),
}

impl Point {
    pub fn index(&self) -> Option<u64> {
        match *self {
            Point::Atom(_) => None,
            Point::Elem(_, i) => Some(i),
        }
    }
}

pub(crate) fn same_ground(a: &Arc<GroundStructure>, b: &Arc<GroundStructure>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Label a point using the names of its ground structure.
pub struct PointLabel<'a>(pub &'a GroundStructure, pub &'a Point);

impl fmt::Display for PointLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_grounds() {
        let none: [&str; 0] = [];
        assert!(GroundStructure::new(none, none).is_err());
        assert!(GroundStructure::new(["a", "a"], none).is_err());
        assert!(GroundStructure::new(["a"], ["a"]).is_err());
        assert!(GroundStructure::new([""], ["B"]).is_err());
    }

    #[test]
    fn points_order_atoms_first() {
        let g = GroundStructure::new(["a", "b"], ["ODD", "EVEN"]).unwrap();
        let a = g.atom("b").unwrap();
        let e = g.elem("ODD", 1).unwrap();
        let e2 = g.elem("EVEN", 1).unwrap();
        assert!(a < e && e < e2);
        assert!(g.elem("ODD", 0).is_err());
        assert_eq!(g.label(&e2), "block:EVEN[1]");
    }
}
