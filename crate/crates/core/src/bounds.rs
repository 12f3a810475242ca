use serde::Serialize;

pub const DEFAULT_SEED: u64 = 0x1f5_2024;

/// Budgets for the bounded checks. `max_exceptions` and `max_index` shape the
/// exhaustive set grammar; `samples` and `neighborhoods` size the randomized
/// supplements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_exceptions: usize,
    pub max_index: u64,
    pub samples: usize,
    pub neighborhoods: usize,
    pub seed: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Self {
            max_exceptions: 3,
            max_index: 8,
            samples: 500,
            neighborhoods: 200,
            seed: DEFAULT_SEED,
        }
    }
}

/// Step budget for single-map chains and attractor iteration.
pub const DEFAULT_CHAIN_STEPS: usize = 64;
/// Step budget for word-image collections, which can grow as `mⁿ`.
pub const DEFAULT_DEPTH_STEPS: usize = 16;
