//! Syntax: many-sorted signatures, first-order formulas in context,
//! sequent-style theories, a line-oriented surface grammar, and the
//! classical-to-positive translation that adds complement predicates.
//!
//! The positive fragment (`true`, `false`, `&`, `|`, `exists`, atoms,
//! including the primitive inequality `!=`) is the native language of every
//! engine in this crate; classical connectives (`not`, `->`, `forall`) are
//! carried so that classical theories can be evaluated directly and
//! translated exactly.

mod formula;
mod morley;
mod parser;
mod printer;
mod signature;
mod theory;

pub use formula::{Formula, FormulaInContext, Sequent, Term};
pub use morley::morleyize;
pub use parser::{parse_formula_in_context, parse_theory};
pub use printer::{print_formula, print_formula_in_context, print_sequent, print_term, print_theory};
pub use signature::{FunDecl, FunId, RelDecl, RelId, Signature, SortId};
pub use theory::{Fragment, Theory};
