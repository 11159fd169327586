//! The bounded universe every enumeration draws its atoms from, and the
//! resource limits that keep exhaustive searches honest.

use serde::{Deserialize, Serialize};

use crate::model::Atom;

/// The finite atom universe `{0, …, size-1}`. Carriers of models are
/// subsets of it; enumeration at bound `n` means all structures whose
/// carriers live inside a universe of size `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AtomUniverse {
    pub size: u32,
}

impl AtomUniverse {
    pub fn new(size: u32) -> Self {
        Self { size }
    }

    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        0..self.size
    }

    /// Subsets of the universe as sorted atom lists, in ascending bitmask
    /// order (the canonical carrier order).
    pub fn subsets(&self) -> impl Iterator<Item = Vec<Atom>> + '_ {
        let n = self.size;
        (0u64..(1u64 << n)).map(move |mask| (0..n).filter(|a| mask >> a & 1 == 1).collect())
    }
}

/// Ceilings for the exhaustive searches. `enumeration_ceiling` bounds the
/// number of candidate tables a structure/map search may visit (searches
/// prune as they go, so this counts work actually attempted, not the raw
/// product space); `lattice_ceiling` bounds how many opens a topology will
/// materialize; `sheaf_ceiling` bounds candidate functors in sheaf-category
/// enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub enumeration_ceiling: u128,
    pub lattice_ceiling: usize,
    pub sheaf_ceiling: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            enumeration_ceiling: 20_000_000,
            lattice_ceiling: 200_000,
            sheaf_ceiling: 2_000_000,
        }
    }
}
