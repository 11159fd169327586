//! Built-in example theories, embedded at compile time.
//!
//! Each entry carries the theory source, a default working bound, and the
//! formulas worth tracking through the topology and duality pipeline.
//! Loading parses the source and, for a classical entry, complements the
//! connectives away so the rest of the crate only ever sees the coherent
//! fragment. Coherent entries are loaded exactly as written — including
//! the deliberately broken ones used to exercise error paths.

use crate::error::Result;
use crate::logic::{parse_formula_in_context, parse_theory, Fragment, FormulaInContext, Theory};
use crate::logic::morleyize;

/// One embedded theory with its defaults.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
    /// Formulas-in-context tracked by default, in surface syntax.
    pub tracked: &'static [&'static str],
    /// The smallest bound at which the entry is interesting.
    pub default_bound: u32,
}

/// The built-in theories.
pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "pure_sets",
        summary: "one sort with decidable apartness and nothing else",
        source: include_str!("../theories/pure_sets.thy"),
        tracked: &["x:X | true", "x:X y:X | x != y"],
        default_bound: 2,
    },
    CatalogEntry {
        name: "simple_graphs",
        summary: "loop-free undirected graphs on a decidable vertex sort",
        source: include_str!("../theories/simple_graphs.thy"),
        tracked: &["x:V | true", "x:V y:V | E(x, y)"],
        default_bound: 2,
    },
    CatalogEntry {
        name: "rare_predicate",
        summary: "classical: a predicate holding on at most one element",
        source: include_str!("../theories/rare_predicate.thy"),
        tracked: &["x:X | true", "x:X | P(x)"],
        default_bound: 2,
    },
    CatalogEntry {
        name: "bare_predicate",
        summary: "no decidability axioms; rejected by the semantic check",
        source: include_str!("../theories/bare_predicate.thy"),
        tracked: &["x:X | P(x)"],
        default_bound: 2,
    },
    CatalogEntry {
        name: "three_witnesses",
        summary: "every inhabitant forces three; bound 2 probes unstable",
        source: include_str!("../theories/three_witnesses.thy"),
        tracked: &["x:X | true"],
        default_bound: 3,
    },
];

/// Look an entry up by name.
pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// Parse an entry; classical sources are complemented into the coherent
/// fragment, coherent sources are taken verbatim.
pub fn load(entry: &CatalogEntry) -> Result<Theory> {
    let theory = parse_theory(entry.name, entry.source)?;
    match theory.fragment {
        Fragment::Classical => morleyize(&theory),
        Fragment::Coherent => Ok(theory),
    }
}

/// Parse an entry's default tracked formulas against a loaded theory.
pub fn tracked_formulas(entry: &CatalogEntry, theory: &Theory) -> Result<Vec<FormulaInContext>> {
    entry
        .tracked
        .iter()
        .map(|t| parse_formula_in_context(&theory.signature, t))
        .collect()
}
