//! Semantics over a bounded atom universe: exhaustive model enumeration,
//! satisfaction, definable sets, structure-preserving maps, the groupoid of
//! all models and isomorphisms, and the injectivity report that witnesses
//! whether inequality makes every structure map injective.

mod decidability;
mod enumerate;
mod groupoid;
mod maps;
mod structure;
mod universe;

pub use decidability::{check_semantic_decidability, DecidabilityReport, NonInjectiveWitness};
pub use enumerate::enumerate_models;
pub use groupoid::{build_groupoid, ModelArrow, ModelGroupoid};
pub use maps::{enumerate_maps, MapKind, ModelMap};
pub use structure::{definable_set, satisfies, tuple_in_definable, tuples_over, Model};
pub use universe::{AtomUniverse, Limits};

/// An element of the atom universe `0..size`.
pub type Atom = u32;
