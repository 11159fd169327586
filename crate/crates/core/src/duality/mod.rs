//! The two directions of the duality and the laws tying them together.
//!
//! One direction is syntactic-to-semantic: formulas-in-context become
//! equivariant sheaves over the model groupoid, provably functional
//! relations become continuous maps, and the whole assignment — the counit
//! of the adjunction — is verified to be a faithful, product-preserving
//! functor ([`counit_eval`]). The other direction is semantic-to-syntactic:
//! the catalog of formal sheaves over a topological groupoid forms a
//! category ([`form_category`]), and every groupoid maps into the formal
//! catalog's own evaluation groupoid by the unit ([`unit_morphism`]).
//!
//! The triangle identities ([`check_triangle_identities`]) close the loop,
//! and the adequacy probe ([`adequacy_probe`]) guards the whole edifice:
//! at an unstable bound, where raising the model size by one changes the
//! semantic presentation, the counit refuses to run.

mod adjunction;
mod evaluation;
mod form;
mod functors;
mod syntactic;

pub use adjunction::{
    adequacy_probe, check_triangle_identities, counit_eval, AdequacyReport, CounitData,
    CounitHoms, CounitObject, TriangleReport, TriangleSide, TriangleViolation,
};
pub use evaluation::{
    evaluation_sheaf, unit_morphism, EvaluationFamily, EvaluationGroupoid, UnitData,
};
pub use form::{check_form_closure, form_category, FormCategory};
pub use functors::{
    check_coherent_functor, identity_functor_data, mod_functor, CoherentFunctorData,
};
pub use syntactic::{
    compose_arrows, hom_search, hom_set, identity_arrow, is_functional_relation, objects_equal,
    product_object, FunctionalityLaw, FunctionalityWitness, HomSearch, SyntacticArrow,
    SyntacticObject,
};
