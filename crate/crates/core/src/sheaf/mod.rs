//! Equivariant sheaves over the model groupoid: the semantic side of the
//! duality. Definable sets become sheaves, stable opens decompose back into
//! formulas, canonical constructions (products, coproducts, subsheaves)
//! stay inside the category, and the classifier groupoid of small sets
//! receives a classifying morphism from every formal sheaf.

mod classifier;
mod constructions;
mod definable;
mod equivariant;

pub use classifier::{
    check_formal_conditions, classifier_groupoid, classifying_morphism, generic_object,
    pullback_sheaf, ClassifierArrow, ClassifierGroupoid, FormalCondition, FormalReport,
    UniverseMode,
};
pub use constructions::{
    coproduct_sheaf, empty_sheaf, equalizer_points, image_points, product_sheaf, subsheaf,
    terminal_sheaf,
};
pub use definable::{
    cover_by_definables, decompose_stable_open, definable_sheaf, stabilize_formula,
};
pub use equivariant::{
    check_action_axioms, check_morphism, sheaf_homs, sheaf_isomorphisms, stabilize, Elem,
    EquivariantSheaf, SheafMorphism,
};
