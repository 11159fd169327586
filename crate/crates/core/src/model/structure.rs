//! Finite structures and satisfaction. A model stores one carrier per sort,
//! a total lookup table per function symbol, and a tuple set per relation
//! symbol. The designated inequality predicate has no table: it always
//! denotes the complement of the diagonal.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::{Formula, FormulaInContext, Signature, SortId, Term};
use crate::model::Atom;

/// A finite many-sorted structure over the atom universe.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Model {
    /// Per sort, the carrier as an ascending atom list.
    pub carriers: Vec<Vec<Atom>>,
    /// Per function symbol, the total table on the carrier product.
    pub functions: Vec<BTreeMap<Vec<Atom>, Atom>>,
    /// Per relation symbol, the set of tuples where it holds.
    pub relations: Vec<BTreeSet<Vec<Atom>>>,
}

impl Model {
    pub fn carrier(&self, s: SortId) -> &[Atom] {
        &self.carriers[s.0]
    }

    /// Total number of carrier elements across all sorts.
    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    /// Evaluate a term under bindings; the tables are total, so this cannot
    /// fail once the bindings lie in the carriers.
    fn eval_term(&self, t: &Term, binds: &[(String, Atom)]) -> Atom {
        match t {
            Term::Var(v) => {
                binds
                    .iter()
                    .rev() // innermost binding shadows
                    .find(|(name, _)| name == v)
                    .expect("evaluation reached an unbound variable")
                    .1
            }
            Term::App(f, args) => {
                let key: Vec<Atom> = args.iter().map(|a| self.eval_term(a, binds)).collect();
                *self.functions[f.0]
                    .get(&key)
                    .expect("function tables are total on carriers")
            }
        }
    }

    /// Evaluate a formula under bindings. Classical connectives evaluate
    /// classically; quantifiers range over the relevant carrier.
    pub(crate) fn eval(&self, f: &Formula, binds: &mut Vec<(String, Atom)>) -> bool {
        match f {
            Formula::True => true,
            Formula::False => false,
            Formula::Rel(r, args) => {
                let tuple: Vec<Atom> = args.iter().map(|a| self.eval_term(a, binds)).collect();
                self.relations[r.0].contains(&tuple)
            }
            Formula::Eq(l, r) => self.eval_term(l, binds) == self.eval_term(r, binds),
            Formula::Neq(l, r) => self.eval_term(l, binds) != self.eval_term(r, binds),
            Formula::And(l, r) => self.eval(l, binds) && self.eval(r, binds),
            Formula::Or(l, r) => self.eval(l, binds) || self.eval(r, binds),
            Formula::Implies(l, r) => !self.eval(l, binds) || self.eval(r, binds),
            Formula::Not(inner) => !self.eval(inner, binds),
            Formula::Exists(v, s, inner) => self.carriers[s.0].iter().any(|&a| {
                binds.push((v.clone(), a));
                let holds = self.eval(inner, binds);
                binds.pop();
                holds
            }),
            Formula::Forall(v, s, inner) => self.carriers[s.0].iter().all(|&a| {
                binds.push((v.clone(), a));
                let holds = self.eval(inner, binds);
                binds.pop();
                holds
            }),
        }
    }
}

/// Does `m` satisfy `f` under `env`? Errors when the environment does not
/// fit the context (wrong length, or an atom outside its carrier).
pub fn satisfies(sig: &Signature, m: &Model, f: &FormulaInContext, env: &[Atom]) -> Result<bool> {
    f.validate(sig)?;
    if env.len() != f.context.len() {
        return Err(Error::EnvMismatch(format!(
            "context has {} variables, environment has {} atoms",
            f.context.len(),
            env.len()
        )));
    }
    for ((name, sort), &atom) in f.context.iter().zip(env) {
        if !m.carriers[sort.0].contains(&atom) {
            return Err(Error::EnvMismatch(format!(
                "atom {atom} bound to `{name}` is not in the carrier of its sort"
            )));
        }
    }
    let mut binds: Vec<(String, Atom)> = f
        .context
        .iter()
        .map(|(name, _)| name.clone())
        .zip(env.iter().copied())
        .map(|(n, a)| (n, a))
        .collect();
    Ok(m.eval(&f.body, &mut binds))
}

/// Membership of `env` in the definable set of `f` inside `m`: false (not
/// an error) when the tuple strays outside the carriers. This is the
/// membership test parameterized opens are built from.
pub fn tuple_in_definable(m: &Model, f: &FormulaInContext, env: &[Atom]) -> bool {
    if env.len() != f.context.len() {
        return false;
    }
    for ((_, sort), &atom) in f.context.iter().zip(env) {
        if !m.carriers[sort.0].contains(&atom) {
            return false;
        }
    }
    let mut binds: Vec<(String, Atom)> = f
        .context
        .iter()
        .zip(env)
        .map(|((n, _), &a)| (n.clone(), a))
        .collect();
    m.eval(&f.body, &mut binds)
}

/// Does the sequent hold in `m` — antecedent implies succedent under every
/// environment over the context's carriers? Used by the enumeration engine,
/// which guarantees all mentioned tables are already assigned.
pub(crate) fn sequent_holds(m: &Model, seq: &crate::logic::Sequent) -> bool {
    let carriers: Vec<&[Atom]> = seq.context.iter().map(|(_, s)| m.carrier(*s)).collect();
    for tuple in tuples_over(&carriers) {
        let mut binds: Vec<(String, Atom)> = seq
            .context
            .iter()
            .zip(&tuple)
            .map(|((n, _), &a)| (n.clone(), a))
            .collect();
        if m.eval(&seq.antecedent, &mut binds) && !m.eval(&seq.succedent, &mut binds) {
            return false;
        }
    }
    true
}

/// All tuples over the product of the given carriers, lexicographically.
pub fn tuples_over(carriers: &[&[Atom]]) -> Vec<Vec<Atom>> {
    let mut out = vec![Vec::new()];
    for &carrier in carriers {
        let mut next = Vec::with_capacity(out.len() * carrier.len().max(1));
        for prefix in &out {
            for &a in carrier {
                let mut t = prefix.clone();
                t.push(a);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// The definable set of `f` in `m`: all satisfying tuples, in lexicographic
/// order over the context's carrier product.
pub fn definable_set(sig: &Signature, m: &Model, f: &FormulaInContext) -> Result<Vec<Vec<Atom>>> {
    f.validate(sig)?;
    let carriers: Vec<&[Atom]> = f
        .context
        .iter()
        .map(|(_, s)| m.carrier(*s))
        .collect();
    let mut out = Vec::new();
    for tuple in tuples_over(&carriers) {
        let mut binds: Vec<(String, Atom)> = f
            .context
            .iter()
            .zip(&tuple)
            .map(|((n, _), &a)| (n.clone(), a))
            .collect();
        if m.eval(&f.body, &mut binds) {
            out.push(tuple);
        }
    }
    Ok(out)
}
