//! Exact symbolic laboratory for iterated function systems on countable
//! spaces built from finitely many atoms and finitely many infinite blocks.
//!
//! * [`setalg`]: finite/cofinite normal forms and a truncation oracle
//! * [`topology`]: clause-defined topologies with closure and interior
//! * [`maps`]: piecewise self-maps, images, preimages and composition
//! * [`ifs`]: the Hutchinson operator, word images, contractivity, attractors
//! * [`hyperspace`]: Vietoris neighborhoods and non-closedness evidence

pub mod bounds;
pub mod builtin;
pub mod enumerate;
pub mod error;
pub mod hyperspace;
pub mod ifs;
pub mod maps;
pub mod sample;
pub mod setalg;
pub mod topology;

mod ser;

pub use bounds::Bounds;
pub use error::{LabError, Result};
