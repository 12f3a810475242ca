//! Exact Boolean algebra over subsets of a ground space made of finitely many
//! atoms and finitely many countably infinite blocks.

mod ground;
mod index;
pub mod oracle;
mod set;

pub(crate) use ground::same_ground;
pub use ground::{AtomId, BlockId, GroundStructure, Point, PointLabel};
pub use oracle::{truncation_oracle, Truncation};
pub use set::{BlockPart, Cardinality, SymbolicSet};
