//! Exhaustive, pruned enumeration of all models of a theory over a bounded
//! atom universe.
//!
//! The search fixes one carrier subset per sort, then fills symbol tables in
//! declaration order (functions first, then relations). Every axiom is
//! checked at the earliest point all of its symbols are assigned, so a bad
//! partial table kills its whole subtree. Output order is canonical and
//! byte-stable across runs: carriers by ascending bitmask (sort 0
//! outermost), then function tables by lexicographic output vector, then
//! relation tables by ascending tuple bitmask.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::logic::{Formula, Sequent, Term, Theory};
use crate::model::structure::sequent_holds;
use crate::model::{tuples_over, Atom, AtomUniverse, Limits, Model};

/// All models of `theory` with carriers inside `universe`, in canonical
/// order. Fails with a resource-guard error if the pruned search would
/// visit more candidate tables than `limits.enumeration_ceiling`.
pub fn enumerate_models(
    theory: &Theory,
    universe: &AtomUniverse,
    limits: &Limits,
) -> Result<Vec<Model>> {
    let mut search = Search::new(theory, limits);
    let mut m = Model {
        carriers: Vec::with_capacity(theory.signature.sort_count()),
        functions: vec![BTreeMap::new(); theory.signature.functions().len()],
        relations: vec![BTreeSet::new(); theory.signature.relations().len()],
    };
    search.choose_carrier(0, universe, &mut m)?;
    Ok(search.found)
}

struct Search<'a> {
    theory: &'a Theory,
    limits: &'a Limits,
    /// Candidate tables visited so far (the pruned-work measure the
    /// enumeration ceiling bounds).
    visited: u128,
    /// `staged[s]` holds the axioms to check once `s` symbol tables are
    /// assigned; stage 0 axioms mention no symbol at all.
    staged: Vec<Vec<&'a Sequent>>,
    found: Vec<Model>,
}

impl<'a> Search<'a> {
    fn new(theory: &'a Theory, limits: &'a Limits) -> Self {
        let fun_count = theory.signature.functions().len();
        let slot_count = fun_count + theory.signature.relations().len();
        let mut staged: Vec<Vec<&Sequent>> = vec![Vec::new(); slot_count + 1];
        for axiom in &theory.axioms {
            staged[axiom_stage(axiom, fun_count)].push(axiom);
        }
        Self {
            theory,
            limits,
            visited: 0,
            staged,
            found: Vec::new(),
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.limits.enumeration_ceiling {
            return Err(Error::ResourceGuard {
                what: "model enumeration (candidate tables visited)".into(),
                estimate: self.visited,
                ceiling: self.limits.enumeration_ceiling,
            });
        }
        Ok(())
    }

    fn stage_ok(&self, stage: usize, m: &Model) -> bool {
        self.staged[stage].iter().all(|ax| sequent_holds(m, ax))
    }

    fn choose_carrier(&mut self, sort: usize, universe: &AtomUniverse, m: &mut Model) -> Result<()> {
        if sort == self.theory.signature.sort_count() {
            if self.stage_ok(0, m) {
                return self.fill_slot(0, m);
            }
            return Ok(());
        }
        for subset in universe.subsets().collect::<Vec<_>>() {
            self.tick()?;
            m.carriers.push(subset);
            self.choose_carrier(sort + 1, universe, m)?;
            m.carriers.pop();
        }
        Ok(())
    }

    fn fill_slot(&mut self, slot: usize, m: &mut Model) -> Result<()> {
        let fun_count = self.theory.signature.functions().len();
        if slot == fun_count + self.theory.signature.relations().len() {
            self.found.push(m.clone());
            return Ok(());
        }
        if slot < fun_count {
            self.fill_function(slot, m)
        } else {
            self.fill_relation(slot, m)
        }
    }

    fn fill_function(&mut self, slot: usize, m: &mut Model) -> Result<()> {
        let decl = &self.theory.signature.functions()[slot];
        let arg_carriers: Vec<&[Atom]> = decl.args.iter().map(|s| &m.carriers[s.0][..]).collect();
        let domain = tuples_over(&arg_carriers);
        let codomain = m.carriers[decl.result.0].clone();
        if codomain.is_empty() && !domain.is_empty() {
            return Ok(()); // no total table into an empty carrier
        }
        self.fill_entries(slot, 0, &domain, &codomain, m)
    }

    fn fill_entries(
        &mut self,
        slot: usize,
        idx: usize,
        domain: &[Vec<Atom>],
        codomain: &[Atom],
        m: &mut Model,
    ) -> Result<()> {
        if idx == domain.len() {
            if self.stage_ok(slot + 1, m) {
                self.fill_slot(slot + 1, m)?;
            }
            return Ok(());
        }
        for &out in codomain {
            self.tick()?;
            m.functions[slot].insert(domain[idx].clone(), out);
            self.fill_entries(slot, idx + 1, domain, codomain, m)?;
        }
        m.functions[slot].remove(&domain[idx]);
        Ok(())
    }

    fn fill_relation(&mut self, slot: usize, m: &mut Model) -> Result<()> {
        let rel = slot - self.theory.signature.functions().len();
        let decl = &self.theory.signature.relations()[rel];
        let arg_carriers: Vec<&[Atom]> = decl.args.iter().map(|s| &m.carriers[s.0][..]).collect();
        let domain = tuples_over(&arg_carriers);
        if domain.len() >= 127 {
            return Err(Error::ResourceGuard {
                what: format!(
                    "relation table space for `{}` ({} candidate tuples)",
                    decl.name,
                    domain.len()
                ),
                estimate: u128::MAX,
                ceiling: self.limits.enumeration_ceiling,
            });
        }
        for mask in 0u128..(1u128 << domain.len()) {
            self.tick()?;
            m.relations[rel] = domain
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect();
            if self.stage_ok(slot + 1, m) {
                self.fill_slot(slot + 1, m)?;
            }
        }
        m.relations[rel].clear();
        Ok(())
    }
}

/// The earliest point an axiom can be checked: one past the highest slot of
/// any symbol it mentions (functions occupy slots `0..F` in declaration
/// order, relations `F..F+R`).
fn axiom_stage(axiom: &Sequent, fun_count: usize) -> usize {
    let mut stage = 0;
    let mut on_formula = |f: &Formula| {
        collect_stage(f, fun_count, &mut stage);
    };
    on_formula(&axiom.antecedent);
    on_formula(&axiom.succedent);
    stage
}

fn collect_stage(f: &Formula, fun_count: usize, stage: &mut usize) {
    match f {
        Formula::True | Formula::False => {}
        Formula::Rel(r, args) => {
            *stage = (*stage).max(fun_count + r.0 + 1);
            for t in args {
                term_stage(t, stage);
            }
        }
        Formula::Eq(l, r) | Formula::Neq(l, r) => {
            term_stage(l, stage);
            term_stage(r, stage);
        }
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            collect_stage(l, fun_count, stage);
            collect_stage(r, fun_count, stage);
        }
        Formula::Not(inner) | Formula::Exists(_, _, inner) | Formula::Forall(_, _, inner) => {
            collect_stage(inner, fun_count, stage);
        }
    }
}

fn term_stage(t: &Term, stage: &mut usize) {
    if let Term::App(f, args) = t {
        *stage = (*stage).max(f.0 + 1);
        for a in args {
            term_stage(a, stage);
        }
    }
}
