//! Exact finite-scale duality between logical syntax and topological semantics.
//!
//! Starting from a finite first-order theory this crate builds, by exhaustive
//! enumeration over a bounded atom universe:
//!
//! * the groupoid of all models of the theory and all isomorphisms between
//!   them ([`model`]),
//! * the logical topologies on the model space, on the isomorphism space, and
//!   on the total space of every definable set ([`topology`]),
//! * equivariant sheaves over that topological groupoid, their stabilized
//!   opens, and the classifier groupoid of small sets ([`sheaf`]),
//! * the contravariant adjunction between theories and groupoids — the
//!   evaluation functor out of the syntactic category, the point-evaluation
//!   morphism back, and the triangle identities ([`duality`]),
//! * the posetal shadow of the whole construction: classical Stone duality
//!   for finite Boolean algebras and distributive lattices ([`stone`]).
//!
//! Everything is computed exactly; every theorem-shaped claim is re-checked
//! by a decision procedure rather than trusted. Operations that would
//! enumerate an infeasible space fail fast with a resource-guard error
//! instead of running forever.

pub mod catalog;
pub mod duality;
pub mod error;
pub mod groupoid;
pub mod logic;
pub mod model;
pub mod report;
pub mod sheaf;
pub mod stone;
pub mod topology;

pub use error::{Error, Result};
