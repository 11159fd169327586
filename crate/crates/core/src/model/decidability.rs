//! Semantic side of decidable equality: a theory axiomatizes inequality
//! syntactically, but what that buys in the model category is injectivity
//! of every structure map. This report enumerates all homomorphisms between
//! all models at a bound and records every collapse, so "syntactically
//! decidable" and "maps are injective" can be compared directly — including
//! for theories whose other axioms force injectivity without the
//! inequality axioms ever being stated.

use crate::error::Result;
use crate::logic::{SortId, Theory};
use crate::model::{
    enumerate_maps, enumerate_models, Atom, AtomUniverse, Limits, MapKind, Model, ModelMap,
};

/// A homomorphism that identifies two distinct carrier elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonInjectiveWitness {
    pub source: usize,
    pub target: usize,
    pub sort: SortId,
    /// The two distinct source atoms that collapse.
    pub pair: (Atom, Atom),
    /// Their common image.
    pub image: Atom,
    pub map: ModelMap,
}

/// Outcome of the injectivity sweep at one bound.
#[derive(Debug, Clone)]
pub struct DecidabilityReport {
    /// Does every sort carry both inequality axioms?
    pub syntactically_decidable: bool,
    pub model_count: usize,
    pub homomorphisms_checked: usize,
    /// Every collapse found; empty means every homomorphism at this bound
    /// is injective on every sort.
    pub witnesses: Vec<NonInjectiveWitness>,
}

impl DecidabilityReport {
    pub fn semantically_decidable(&self) -> bool {
        self.witnesses.is_empty()
    }
}

/// Enumerate every homomorphism between models of `theory` at the bound
/// and report each failure of injectivity.
pub fn check_semantic_decidability(
    theory: &Theory,
    universe: &AtomUniverse,
    limits: &Limits,
) -> Result<DecidabilityReport> {
    let models = enumerate_models(theory, universe, limits)?;
    let mut checked = 0;
    let mut witnesses = Vec::new();
    for (i, src) in models.iter().enumerate() {
        for (j, tgt) in models.iter().enumerate() {
            for map in enumerate_maps(&theory.signature, src, tgt, MapKind::Homomorphism) {
                checked += 1;
                if let Some(w) = first_collapse(src, &map) {
                    witnesses.push(NonInjectiveWitness {
                        source: i,
                        target: j,
                        sort: w.0,
                        pair: w.1,
                        image: w.2,
                        map: map.clone(),
                    });
                }
            }
        }
    }
    Ok(DecidabilityReport {
        syntactically_decidable: theory.decidable,
        model_count: models.len(),
        homomorphisms_checked: checked,
        witnesses,
    })
}

fn first_collapse(source: &Model, map: &ModelMap) -> Option<(SortId, (Atom, Atom), Atom)> {
    for (s, images) in map.components.iter().enumerate() {
        for a in 0..images.len() {
            for b in a + 1..images.len() {
                if images[a] == images[b] {
                    return Some((
                        SortId(s),
                        (source.carriers[s][a], source.carriers[s][b]),
                        images[a],
                    ));
                }
            }
        }
    }
    None
}
