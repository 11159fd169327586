//! Translation of a classical theory into a positive one with the same
//! models: every subformula of the axioms gets a pair of fresh predicates
//! (one for the subformula, one for its complement), axioms force the pair
//! to partition each context product and to unfold according to the
//! connective, and every sort receives the two inequality axioms. Models of
//! the translated theory over a fixed carrier correspond one-to-one with
//! classical models of the original: the new tables are forced.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::logic::{
    Formula, FormulaInContext, Fragment, RelId, Sequent, SortId, Term, Theory,
};

/// Translate `t` into a positive, inequality-complete theory with the same
/// models. A theory that is already positive only gains the inequality
/// axioms it is missing.
pub fn morleyize(t: &Theory) -> Result<Theory> {
    if t.fragment == Fragment::Coherent {
        let mut axioms = t.axioms.clone();
        for s in t.signature.sort_ids() {
            if !t.signature.has_inequality(s) {
                axioms.extend(Theory::inequality_axioms(s));
            }
        }
        return Theory::new(
            format!("{}_complemented", t.name),
            t.signature.clone(),
            axioms,
        );
    }

    // Collect every subformula of every axiom side, children before parents,
    // deduplicated up to alpha-equivalence of (free context, formula).
    let mut keys: Vec<FormulaInContext> = Vec::new();
    let mut index: BTreeMap<FormulaInContext, usize> = BTreeMap::new();
    for ax in &t.axioms {
        let env: BTreeMap<String, SortId> = ax.context.iter().cloned().collect();
        collect(&ax.antecedent, &env, &mut keys, &mut index);
        collect(&ax.succedent, &env, &mut keys, &mut index);
    }

    // Fresh relation names C{i}/D{i}, dodging existing symbols.
    let mut sig = t.signature.clone();
    let taken: Vec<String> = sig
        .functions()
        .iter()
        .map(|f| f.name.clone())
        .chain(sig.relations().iter().map(|r| r.name.clone()))
        .collect();
    let fresh = |base: String| -> String {
        let mut name = base;
        while taken.contains(&name) {
            name.insert(0, '_');
        }
        name
    };
    let mut holds_rel: Vec<RelId> = Vec::new();
    let mut fails_rel: Vec<RelId> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let sorts = key.context_sorts();
        holds_rel.push(sig.add_relation(fresh(format!("C{i}")), sorts.clone())?);
        fails_rel.push(sig.add_relation(fresh(format!("D{i}")), sorts)?);
    }

    // An application `C_f(free vars of f)` / `D_f(...)`. Argument order is
    // first-occurrence order, which canonicalization preserves, so every
    // instance of one key applies its predicate consistently.
    let atom = |table: &[RelId], f: &Formula, env: &BTreeMap<String, SortId>| -> Formula {
        let key = key_of(f, env);
        let idx = index[&key];
        let args = f.free_vars().into_iter().map(Term::Var).collect();
        Formula::Rel(table[idx], args)
    };

    let mut axioms: Vec<Sequent> = Vec::new();
    for (i, key) in keys.iter().enumerate() {
        let ctx = key.context.clone();
        let env: BTreeMap<String, SortId> = ctx.iter().cloned().collect();
        let args: Vec<Term> = ctx.iter().map(|(v, _)| Term::Var(v.clone())).collect();
        let holds = Formula::Rel(holds_rel[i], args.clone());
        let fails = Formula::Rel(fails_rel[i], args);

        // The pair partitions the context product.
        axioms.push(Sequent::new(
            ctx.clone(),
            Formula::And(Box::new(holds.clone()), Box::new(fails.clone())),
            Formula::False,
        ));
        axioms.push(Sequent::new(
            ctx.clone(),
            Formula::True,
            Formula::Or(Box::new(holds.clone()), Box::new(fails.clone())),
        ));

        // Pin the positive predicate (or, for `forall`, the complement) to
        // the connective's meaning; the partition axioms force the rest.
        let mut both = |lhs: Formula, rhs: Formula| {
            axioms.push(Sequent::new(ctx.clone(), lhs.clone(), rhs.clone()));
            axioms.push(Sequent::new(ctx.clone(), rhs, lhs));
        };
        match &key.body {
            Formula::True => axioms.push(Sequent::new(ctx.clone(), Formula::True, holds)),
            Formula::False => axioms.push(Sequent::new(ctx.clone(), holds, Formula::False)),
            f @ (Formula::Rel(..) | Formula::Eq(..) | Formula::Neq(..)) => {
                both(holds, f.clone());
            }
            Formula::And(l, r) => both(
                holds,
                Formula::And(
                    Box::new(atom(&holds_rel, l, &env)),
                    Box::new(atom(&holds_rel, r, &env)),
                ),
            ),
            Formula::Or(l, r) => both(
                holds,
                Formula::Or(
                    Box::new(atom(&holds_rel, l, &env)),
                    Box::new(atom(&holds_rel, r, &env)),
                ),
            ),
            Formula::Not(inner) => both(holds, atom(&fails_rel, inner, &env)),
            Formula::Implies(l, r) => both(
                holds,
                Formula::Or(
                    Box::new(atom(&fails_rel, l, &env)),
                    Box::new(atom(&holds_rel, r, &env)),
                ),
            ),
            Formula::Exists(v, s, inner) => {
                let mut inner_env = env.clone();
                inner_env.insert(v.clone(), *s);
                both(
                    holds,
                    Formula::Exists(
                        v.clone(),
                        *s,
                        Box::new(atom(&holds_rel, inner, &inner_env)),
                    ),
                );
            }
            Formula::Forall(v, s, inner) => {
                let mut inner_env = env.clone();
                inner_env.insert(v.clone(), *s);
                both(
                    fails,
                    Formula::Exists(
                        v.clone(),
                        *s,
                        Box::new(atom(&fails_rel, inner, &inner_env)),
                    ),
                );
            }
        }
    }

    // The original axioms, restated through the positive predicates.
    for ax in &t.axioms {
        let env: BTreeMap<String, SortId> = ax.context.iter().cloned().collect();
        axioms.push(Sequent::new(
            ax.context.clone(),
            atom(&holds_rel, &ax.antecedent, &env),
            atom(&holds_rel, &ax.succedent, &env),
        ));
    }

    // Complemented equality on every sort.
    for s in sig.sort_ids().collect::<Vec<_>>() {
        axioms.extend(Theory::inequality_axioms(s));
    }

    Theory::new(format!("{}_positive", t.name), sig, axioms)
}

fn key_of(f: &Formula, env: &BTreeMap<String, SortId>) -> FormulaInContext {
    let context = f
        .free_vars()
        .into_iter()
        .map(|v| {
            let sort = *env
                .get(&v)
                .expect("free variable of a validated axiom has a sort");
            (v, sort)
        })
        .collect();
    FormulaInContext::new(context, f.clone()).canonicalize()
}

fn collect(
    f: &Formula,
    env: &BTreeMap<String, SortId>,
    keys: &mut Vec<FormulaInContext>,
    index: &mut BTreeMap<FormulaInContext, usize>,
) {
    match f {
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            collect(l, env, keys, index);
            collect(r, env, keys, index);
        }
        Formula::Not(inner) => collect(inner, env, keys, index),
        Formula::Exists(v, s, inner) | Formula::Forall(v, s, inner) => {
            let mut inner_env = env.clone();
            inner_env.insert(v.clone(), *s);
            collect(inner, &inner_env, keys, index);
        }
        _ => {}
    }
    let key = key_of(f, env);
    if !index.contains_key(&key) {
        index.insert(key.clone(), keys.len());
        keys.push(key);
    }
}
