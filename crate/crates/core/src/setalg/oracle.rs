//! Brute-force truncation oracle: an explicit bitset over atoms and block
//! indices `1..=N`, plus one flag per block recording whether the uniform
//! tail beyond `N` is in the set. Exact whenever `N` exceeds every index
//! literal of the operands.

use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::ground::{GroundStructure, Point};
use super::set::SymbolicSet;
use crate::error::{LabError, Result};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedBlock {
    /// `bits[i - 1]` is membership of index `i`.
    pub bits: Vec<bool>,
    pub tail: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Truncation {
    pub bound: u64,
    pub atoms: Vec<bool>,
    pub blocks: Vec<TruncatedBlock>,
}

pub fn truncation_oracle(set: &SymbolicSet, bound: u64) -> Result<Truncation> {
    if bound == 0 {
        return Err(LabError::Precondition(
            "truncation bound must be >= 1".into(),
        ));
    }
    let g = set.ground();
    let atoms = g
        .atom_ids()
        .map(|a| set.contains(&Point::Atom(a)))
        .collect();
    let blocks = g
        .block_ids()
        .map(|b| TruncatedBlock {
            bits: (1..=bound)
                .map(|i| set.contains(&Point::Elem(b, i)))
                .collect(),
            tail: set.part(b).is_cofinite(),
        })
        .collect();
    Ok(Truncation {
        bound,
        atoms,
        blocks,
    })
}

impl Truncation {
    fn zip(&self, other: &Self, op: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(self.bound, other.bound);
        Truncation {
            bound: self.bound,
            atoms: self
                .atoms
                .iter()
                .zip(&other.atoms)
                .map(|(&x, &y)| op(x, y))
                .collect(),
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(x, y)| TruncatedBlock {
                    bits: x
                        .bits
                        .iter()
                        .zip(&y.bits)
                        .map(|(&p, &q)| op(p, q))
                        .collect(),
                    tail: op(x.tail, y.tail),
                })
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |x, y| x && !y)
    }

    pub fn complement(&self) -> Self {
        self.zip(self, |x, _| !x)
    }

    pub fn is_empty(&self) -> bool {
        !self.atoms.iter().any(|&x| x)
            && self
                .blocks
                .iter()
                .all(|b| !b.tail && !b.bits.iter().any(|&x| x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzOp {
    Union,
    Intersect,
    Difference,
    Complement,
    Equals,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzMismatch {
    pub trial: usize,
    pub op: FuzzOp,
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzOutcome {
    pub trials: usize,
    pub bound: u64,
    pub seed: u64,
    pub mismatches: Vec<FuzzMismatch>,
}

/// Draw `trials` random `(A, B, op)` triples and compare the symbolic result
/// with the explicit operation on truncations at `bound`. Operand literals are
/// drawn below `bound` so the comparison is exact.
pub fn fuzz(
    ground: &Arc<GroundStructure>,
    trials: usize,
    bound: u64,
    seed: u64,
) -> Result<FuzzOutcome> {
    if bound < 2 {
        return Err(LabError::Precondition(
            "fuzz bound must leave room for at least one index literal".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_literal = bound - 1;
    let mut mismatches = Vec::new();
    for trial in 0..trials {
        let a = sample::random_set(ground, &mut rng, max_literal, 6);
        let b = if rng.gen_bool(0.1) {
            a.clone()
        } else {
            sample::random_set(ground, &mut rng, max_literal, 6)
        };
        let ta = truncation_oracle(&a, bound)?;
        let tb = truncation_oracle(&b, bound)?;
        let op = match rng.gen_range(0..5) {
            0 => FuzzOp::Union,
            1 => FuzzOp::Intersect,
            2 => FuzzOp::Difference,
            3 => FuzzOp::Complement,
            _ => FuzzOp::Equals,
        };
        let agrees = match op {
            FuzzOp::Union => truncation_oracle(&a.union(&b)?, bound)? == ta.union(&tb),
            FuzzOp::Intersect => truncation_oracle(&a.intersect(&b)?, bound)? == ta.intersect(&tb),
            FuzzOp::Difference => {
                truncation_oracle(&a.difference(&b)?, bound)? == ta.difference(&tb)
            }
            FuzzOp::Complement => truncation_oracle(&a.complement(), bound)? == ta.complement(),
            FuzzOp::Equals => a.equals(&b)? == (ta == tb),
        };
        if !agrees {
            mismatches.push(FuzzMismatch {
                trial,
                op,
                left: a.to_string(),
                right: b.to_string(),
            });
        }
    }
    Ok(FuzzOutcome {
        trials,
        bound,
        seed,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground() -> Arc<GroundStructure> {
        GroundStructure::new(["a", "b"], ["ODD", "EVEN"]).unwrap()
    }

    #[test]
    fn truncating_a_block() {
        let g = ground();
        let odd = SymbolicSet::block(&g, g.block_id("ODD").unwrap());
        let t = truncation_oracle(&odd, 4).unwrap();
        assert_eq!(t.atoms, vec![false, false]);
        assert_eq!(t.blocks[0].bits, vec![true; 4]);
        assert!(t.blocks[0].tail);
        assert_eq!(t.blocks[1].bits, vec![false; 4]);
        assert!(!t.blocks[1].tail);
    }

    #[test]
    fn truncating_empty() {
        let g = ground();
        let t = truncation_oracle(&SymbolicSet::empty(&g), 7).unwrap();
        assert!(t.is_empty());
        assert!(t.blocks.iter().all(|b| !b.tail));
        assert!(truncation_oracle(&SymbolicSet::empty(&g), 0).is_err());
    }

    #[test]
    fn small_fuzz_run_is_clean() {
        let out = fuzz(&ground(), 500, 64, 7).unwrap();
        assert!(out.mismatches.is_empty(), "{:?}", out.mismatches);
    }
}
