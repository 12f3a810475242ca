//! The bounded shape grammar: every combination of atom flags and, per block,
//! a finite or cofinite part whose index list has at most `max_exceptions`
//! entries drawn from `1..=max_index`.
//!
//! Sets are addressed by a mixed-radix index so that the enumeration can be
//! split across workers while keeping a canonical order.

use std::sync::Arc;

use crate::setalg::{BlockPart, GroundStructure, SymbolicSet};

pub struct ShapeGrammar {
    ground: Arc<GroundStructure>,
    part_options: Vec<BlockPart>,
    atom_choices: usize,
    len: usize,
}

fn index_subsets(max_index: u64, max_size: usize) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_size {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(1, |&l: &u64| l + 1);
            for i in start..=max_index {
                let mut t = s.clone();
                t.push(i);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

impl ShapeGrammar {
    pub fn new(ground: &Arc<GroundStructure>, max_exceptions: usize, max_index: u64) -> Self {
        let subsets = index_subsets(max_index, max_exceptions);
        let mut part_options: Vec<BlockPart> =
            subsets.iter().cloned().map(BlockPart::Finite).collect();
        part_options.extend(subsets.into_iter().map(BlockPart::Cofinite));
        let atom_choices = 1usize << ground.atom_count();
        let len = (0..ground.block_count()).fold(atom_choices, |acc, _| {
            acc.saturating_mul(part_options.len())
        });
        Self {
            ground: ground.clone(),
            part_options,
            atom_choices,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, mut i: usize) -> SymbolicSet {
        let mut parts = Vec::with_capacity(self.ground.block_count());
        for _ in 0..self.ground.block_count() {
            let k = self.part_options.len();
            parts.push(self.part_options[i % k].clone());
            i /= k;
        }
        parts.reverse();
        let mask = i % self.atom_choices;
        let atoms = (0..self.ground.atom_count())
            .map(|a| mask & (1 << a) != 0)
            .collect();
        SymbolicSet::from_parts(&self.ground, atoms, parts).expect("grammar parts are canonical")
    }

    pub fn iter(&self) -> impl Iterator<Item = SymbolicSet> + '_ {
        (0..self.len).map(|i| self.get(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn sizes_and_distinctness() {
        let g = GroundStructure::new(["a", "b"], ["ODD", "EVEN"]).unwrap();
        // 1 + 8 + 28 + 56 = 93 index lists, finite or cofinite
        let sg = ShapeGrammar::new(&g, 3, 8);
        assert_eq!(sg.len(), 4 * 186 * 186);
        let small = ShapeGrammar::new(&g, 1, 2);
        let all: HashSet<_> = small.iter().collect();
        assert_eq!(all.len(), small.len());
        assert_eq!(small.len(), 4 * 6 * 6);
    }
}
