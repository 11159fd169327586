//! Terms, formulas, formulas-in-context, and sequents, together with the
//! symbolic operations the engines need: free variables, sort checking,
//! fragment classification, capture-avoiding variable renaming, and a
//! canonical renaming normal form that decides alpha-equivalence.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::printer::print_term;
use crate::logic::{FunId, RelId, Signature, SortId};

/// A first-order term: a variable or a function application. Constants are
/// applications of 0-ary function symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    App(FunId, Vec<Term>),
}

/// A first-order formula. The positive connectives (`True`..`Exists`) form
/// the fragment every semantic engine consumes; `Not`, `Implies`, and
/// `Forall` are the classical extension. `Neq` is the designated primitive
/// inequality predicate: its interpretation is always the complement of the
/// diagonal, so it is an atom of the positive fragment.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    Rel(RelId, Vec<Term>),
    Eq(Term, Term),
    Neq(Term, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, SortId, Box<Formula>),
    Not(Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, SortId, Box<Formula>),
}

/// A formula together with its context of typed free variables. The context
/// may declare variables the body never mentions; it may not omit one the
/// body uses.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FormulaInContext {
    pub context: Vec<(String, SortId)>,
    pub body: Formula,
}

/// A sequent `antecedent |- succedent` over a shared context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Vec<(String, SortId)>,
    pub antecedent: Formula,
    pub succedent: Formula,
}

impl Term {
    /// Free variables in first-occurrence order, without duplicates.
    pub fn free_vars(&self) -> Vec<String> {
        let mut acc = Vec::new();
        self.collect_vars(&mut acc);
        acc
    }

    fn collect_vars(&self, acc: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !acc.iter().any(|w| w == v) {
                    acc.push(v.clone());
                }
            }
            Term::App(_, args) => {
                for a in args {
                    a.collect_vars(acc);
                }
            }
        }
    }

    /// The sort of this term under `env` (variable name -> sort), checking
    /// argument sorts along the way.
    pub fn sort(&self, sig: &Signature, env: &BTreeMap<String, SortId>) -> Result<SortId> {
        match self {
            Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::Sort {
                term: v.clone(),
                message: "variable not bound by any context".into(),
            }),
            Term::App(f, args) => {
                let decl = sig.function(*f);
                if decl.args.len() != args.len() {
                    return Err(Error::Sort {
                        term: print_term(sig, self),
                        message: format!(
                            "function `{}` expects {} arguments, got {}",
                            decl.name,
                            decl.args.len(),
                            args.len()
                        ),
                    });
                }
                for (arg, &expected) in args.iter().zip(&decl.args) {
                    let actual = arg.sort(sig, env)?;
                    if actual != expected {
                        return Err(Error::Sort {
                            term: print_term(sig, arg),
                            message: format!(
                                "argument of `{}` has sort `{}`, expected `{}`",
                                decl.name,
                                sig.sort_name(actual),
                                sig.sort_name(expected)
                            ),
                        });
                    }
                }
                Ok(decl.result)
            }
        }
    }

    fn rename(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map.get(v).cloned().unwrap_or_else(|| v.clone())),
            Term::App(f, args) => Term::App(*f, args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

impl Formula {
    /// Free variables in first-occurrence order, without duplicates.
    pub fn free_vars(&self) -> Vec<String> {
        let mut acc = Vec::new();
        self.collect_free(&mut Vec::new(), &mut acc);
        acc
    }

    fn collect_free(&self, bound: &mut Vec<String>, acc: &mut Vec<String>) {
        let push = |v: &String, bound: &[String], acc: &mut Vec<String>| {
            if !bound.contains(v) && !acc.iter().any(|w| w == v) {
                acc.push(v.clone());
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Rel(_, args) => {
                for t in args {
                    for v in t.free_vars() {
                        push(&v, bound, acc);
                    }
                }
            }
            Formula::Eq(l, r) | Formula::Neq(l, r) => {
                for t in [l, r] {
                    for v in t.free_vars() {
                        push(&v, bound, acc);
                    }
                }
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.collect_free(bound, acc);
                r.collect_free(bound, acc);
            }
            Formula::Not(f) => f.collect_free(bound, acc),
            Formula::Exists(v, _, f) | Formula::Forall(v, _, f) => {
                bound.push(v.clone());
                f.collect_free(bound, acc);
                bound.pop();
            }
        }
    }

    /// True when the formula stays inside the positive-existential fragment
    /// (`true false & | exists` plus atoms, `!=` included).
    pub fn is_coherent(&self) -> bool {
        self.first_classical_connective().is_none()
    }

    /// The first classical connective encountered, if any, for error reports.
    pub fn first_classical_connective(&self) -> Option<&'static str> {
        match self {
            Formula::True | Formula::False | Formula::Rel(..) | Formula::Eq(..) | Formula::Neq(..) => {
                None
            }
            Formula::And(l, r) | Formula::Or(l, r) => l
                .first_classical_connective()
                .or_else(|| r.first_classical_connective()),
            Formula::Exists(_, _, f) => f.first_classical_connective(),
            Formula::Not(_) => Some("not"),
            Formula::Implies(_, _) => Some("->"),
            Formula::Forall(_, _, _) => Some("forall"),
        }
    }

    /// Check the formula under `env` (name -> sort) and verify that both
    /// sides of every (in)equality share a sort.
    pub fn sort_check(&self, sig: &Signature, env: &BTreeMap<String, SortId>) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Rel(r, args) => {
                let decl = sig.relation(*r);
                if decl.args.len() != args.len() {
                    return Err(Error::Sort {
                        term: decl.name.clone(),
                        message: format!(
                            "relation `{}` expects {} arguments, got {}",
                            decl.name,
                            decl.args.len(),
                            args.len()
                        ),
                    });
                }
                for (arg, &expected) in args.iter().zip(&decl.args) {
                    let actual = arg.sort(sig, env)?;
                    if actual != expected {
                        return Err(Error::Sort {
                            term: print_term(sig, arg),
                            message: format!(
                                "argument of `{}` has sort `{}`, expected `{}`",
                                decl.name,
                                sig.sort_name(actual),
                                sig.sort_name(expected)
                            ),
                        });
                    }
                }
                Ok(())
            }
            Formula::Eq(l, r) | Formula::Neq(l, r) => {
                let ls = l.sort(sig, env)?;
                let rs = r.sort(sig, env)?;
                if ls != rs {
                    return Err(Error::Sort {
                        term: format!("{} / {}", print_term(sig, l), print_term(sig, r)),
                        message: format!(
                            "(in)equality between sorts `{}` and `{}`",
                            sig.sort_name(ls),
                            sig.sort_name(rs)
                        ),
                    });
                }
                Ok(())
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                l.sort_check(sig, env)?;
                r.sort_check(sig, env)
            }
            Formula::Not(f) => f.sort_check(sig, env),
            Formula::Exists(v, s, f) | Formula::Forall(v, s, f) => {
                let mut inner = env.clone();
                inner.insert(v.clone(), *s);
                f.sort_check(sig, &inner)
            }
        }
    }

    /// Capture-avoiding renaming of free variables. Bound variables that
    /// would capture an incoming name are freshened first.
    pub fn rename_free(&self, map: &BTreeMap<String, String>) -> Formula {
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Rel(r, args) => {
                Formula::Rel(*r, args.iter().map(|t| t.rename(map)).collect())
            }
            Formula::Eq(l, r) => Formula::Eq(l.rename(map), r.rename(map)),
            Formula::Neq(l, r) => Formula::Neq(l.rename(map), r.rename(map)),
            Formula::And(l, r) => Formula::And(
                Box::new(l.rename_free(map)),
                Box::new(r.rename_free(map)),
            ),
            Formula::Or(l, r) => Formula::Or(
                Box::new(l.rename_free(map)),
                Box::new(r.rename_free(map)),
            ),
            Formula::Implies(l, r) => Formula::Implies(
                Box::new(l.rename_free(map)),
                Box::new(r.rename_free(map)),
            ),
            Formula::Not(f) => Formula::Not(Box::new(f.rename_free(map))),
            Formula::Exists(v, s, f) => {
                let (v, f) = rename_under_binder(v, f, map);
                Formula::Exists(v, *s, Box::new(f))
            }
            Formula::Forall(v, s, f) => {
                let (v, f) = rename_under_binder(v, f, map);
                Formula::Forall(v, *s, Box::new(f))
            }
        }
    }

    /// Fold a conjunction; empty input gives `true`.
    pub fn conjoin(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, |acc, f| Formula::And(Box::new(acc), Box::new(f))),
        }
    }

    /// Fold a disjunction; empty input gives `false`.
    pub fn disjoin(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, |acc, f| Formula::Or(Box::new(acc), Box::new(f))),
        }
    }

    /// Existentially close over `vars`, innermost binder last.
    pub fn exists_close(self, vars: &[(String, SortId)]) -> Formula {
        vars.iter().rev().fold(self, |acc, (v, s)| {
            Formula::Exists(v.clone(), *s, Box::new(acc))
        })
    }
}

fn rename_under_binder(
    v: &str,
    body: &Formula,
    map: &BTreeMap<String, String>,
) -> (String, Formula) {
    let mut inner = map.clone();
    inner.remove(v);
    // Freshen the binder when some incoming name would be captured by it.
    let captured = inner.values().any(|target| target == v);
    if captured {
        let taken: Vec<&String> = inner.values().chain(inner.keys()).collect();
        let mut fresh = format!("{v}_");
        while taken.iter().any(|t| **t == fresh) || body.free_vars().contains(&fresh) {
            fresh.push('_');
        }
        inner.insert(v.to_string(), fresh.clone());
        (fresh, body.rename_free(&inner))
    } else {
        (v.to_string(), body.rename_free(&inner))
    }
}

impl FormulaInContext {
    pub fn new(context: Vec<(String, SortId)>, body: Formula) -> Self {
        Self { context, body }
    }

    /// Sorts of the context, in order.
    pub fn context_sorts(&self) -> Vec<SortId> {
        self.context.iter().map(|(_, s)| *s).collect()
    }

    /// Check that the context has no duplicate names, that the body's free
    /// variables all appear in it, and that everything sort-checks.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        let mut env = BTreeMap::new();
        for (name, sort) in &self.context {
            if env.insert(name.clone(), *sort).is_some() {
                return Err(Error::Invalid(format!(
                    "context declares variable `{name}` twice"
                )));
            }
        }
        for v in self.body.free_vars() {
            if !env.contains_key(&v) {
                return Err(Error::Sort {
                    term: v.clone(),
                    message: "free variable missing from the context".into(),
                });
            }
        }
        self.body.sort_check(sig, &env)
    }

    /// Canonical renaming normal form: context variables become `x0, x1, …`
    /// positionally and bound variables become `b0, b1, …` in traversal
    /// order. Alpha-equivalent inputs yield identical outputs.
    pub fn canonicalize(&self) -> FormulaInContext {
        let mut map = BTreeMap::new();
        let mut context = Vec::new();
        for (i, (name, sort)) in self.context.iter().enumerate() {
            let canon = format!("x{i}");
            map.insert(name.clone(), canon.clone());
            context.push((canon, *sort));
        }
        let mut counter = 0usize;
        let body = canonicalize_bound(&self.body, &map, &mut counter);
        FormulaInContext { context, body }
    }

    /// Alpha-equivalence: equality of canonical forms (context sorts must
    /// match positionally).
    pub fn alpha_eq(&self, other: &FormulaInContext) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

/// Rename bound variables to `b{n}` in traversal order while applying `map`
/// to free occurrences. `map` must already cover all free variables.
fn canonicalize_bound(
    f: &Formula,
    map: &BTreeMap<String, String>,
    counter: &mut usize,
) -> Formula {
    match f {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Rel(r, args) => Formula::Rel(*r, args.iter().map(|t| t.rename(map)).collect()),
        Formula::Eq(l, r) => Formula::Eq(l.rename(map), r.rename(map)),
        Formula::Neq(l, r) => Formula::Neq(l.rename(map), r.rename(map)),
        Formula::And(l, r) => Formula::And(
            Box::new(canonicalize_bound(l, map, counter)),
            Box::new(canonicalize_bound(r, map, counter)),
        ),
        Formula::Or(l, r) => Formula::Or(
            Box::new(canonicalize_bound(l, map, counter)),
            Box::new(canonicalize_bound(r, map, counter)),
        ),
        Formula::Implies(l, r) => Formula::Implies(
            Box::new(canonicalize_bound(l, map, counter)),
            Box::new(canonicalize_bound(r, map, counter)),
        ),
        Formula::Not(inner) => Formula::Not(Box::new(canonicalize_bound(inner, map, counter))),
        Formula::Exists(v, s, inner) => {
            let fresh = format!("b{counter}");
            *counter += 1;
            let mut inner_map = map.clone();
            inner_map.insert(v.clone(), fresh.clone());
            Formula::Exists(fresh, *s, Box::new(canonicalize_bound(inner, &inner_map, counter)))
        }
        Formula::Forall(v, s, inner) => {
            let fresh = format!("b{counter}");
            *counter += 1;
            let mut inner_map = map.clone();
            inner_map.insert(v.clone(), fresh.clone());
            Formula::Forall(fresh, *s, Box::new(canonicalize_bound(inner, &inner_map, counter)))
        }
    }
}

impl Sequent {
    pub fn new(
        context: Vec<(String, SortId)>,
        antecedent: Formula,
        succedent: Formula,
    ) -> Self {
        Self {
            context,
            antecedent,
            succedent,
        }
    }

    pub fn validate(&self, sig: &Signature) -> Result<()> {
        FormulaInContext::new(self.context.clone(), self.antecedent.clone()).validate(sig)?;
        FormulaInContext::new(self.context.clone(), self.succedent.clone()).validate(sig)
    }

    /// Both sides inside the positive fragment?
    pub fn is_coherent(&self) -> bool {
        self.antecedent.is_coherent() && self.succedent.is_coherent()
    }

    /// Canonical renaming of the whole sequent, for modulo-alpha comparisons.
    pub fn canonicalize(&self) -> Sequent {
        let both = FormulaInContext::new(
            self.context.clone(),
            Formula::And(
                Box::new(self.antecedent.clone()),
                Box::new(self.succedent.clone()),
            ),
        )
        .canonicalize();
        match both.body {
            Formula::And(l, r) => Sequent::new(both.context, *l, *r),
            _ => unreachable!("canonicalization preserves the top-level connective"),
        }
    }
}
