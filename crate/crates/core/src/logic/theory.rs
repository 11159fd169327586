//! Theories: a signature, a finite axiom list of sequents, and two computed
//! flags — the connective fragment the axioms live in, and whether every
//! sort is equipped with the two inequality axioms that make equality
//! complemented.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{Formula, Sequent, Signature, SortId, Term};

/// Which connective fragment a theory's axioms use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fragment {
    /// Positive-existential connectives only (plus primitive `!=`).
    Coherent,
    /// At least one of `not`, `->`, `forall` appears.
    Classical,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fragment::Coherent => write!(f, "coherent"),
            Fragment::Classical => write!(f, "classical"),
        }
    }
}

/// A finite theory. Construct through [`Theory::new`] so the fragment and
/// decidability flags are always consistent with the axioms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theory {
    pub name: String,
    pub signature: Signature,
    pub axioms: Vec<Sequent>,
    pub fragment: Fragment,
    /// True when every sort carries both inequality axioms
    /// (`x != y & x = y |- false` and `true |- x != y | x = y`), making the
    /// inequality predicate a genuine complement of equality in the syntax.
    pub decidable: bool,
}

impl Theory {
    /// Build a theory, validating every axiom and computing the flags.
    /// The signature's per-sort inequality flags are synchronized with the
    /// axioms found.
    pub fn new(
        name: impl Into<String>,
        mut signature: Signature,
        axioms: Vec<Sequent>,
    ) -> Result<Theory> {
        for ax in &axioms {
            ax.validate(&signature)?;
        }
        let fragment = if axioms.iter().all(Sequent::is_coherent) {
            Fragment::Coherent
        } else {
            Fragment::Classical
        };
        for s in signature.sort_ids().collect::<Vec<_>>() {
            let has = has_inequality_axioms(&axioms, s);
            signature.set_inequality(s, has);
        }
        let decidable = signature.all_sorts_have_inequality();
        Ok(Theory {
            name: name.into(),
            signature,
            axioms,
            fragment,
            decidable,
        })
    }

    /// The two inequality axioms for sort `s`.
    pub fn inequality_axioms(s: SortId) -> [Sequent; 2] {
        let x = || Term::Var("x".to_string());
        let y = || Term::Var("y".to_string());
        let ctx = vec![("x".to_string(), s), ("y".to_string(), s)];
        [
            Sequent::new(
                ctx.clone(),
                Formula::And(
                    Box::new(Formula::Neq(x(), y())),
                    Box::new(Formula::Eq(x(), y())),
                ),
                Formula::False,
            ),
            Sequent::new(
                ctx,
                Formula::True,
                Formula::Or(
                    Box::new(Formula::Neq(x(), y())),
                    Box::new(Formula::Eq(x(), y())),
                ),
            ),
        ]
    }

    /// Fail unless the theory is in the positive fragment.
    pub fn require_coherent(&self) -> Result<()> {
        if self.fragment == Fragment::Coherent {
            return Ok(());
        }
        for ax in &self.axioms {
            for side in [&ax.antecedent, &ax.succedent] {
                if let Some(conn) = side.first_classical_connective() {
                    return Err(Error::NonCoherent {
                        formula: crate::logic::print_formula(&self.signature, side),
                        connective: conn.to_string(),
                    });
                }
            }
        }
        unreachable!("a classical theory has a classical axiom")
    }
}

/// Does the axiom list contain both inequality axioms for sort `s`
/// (up to alpha-equivalence and the order of the two disjuncts/conjuncts)?
fn has_inequality_axioms(axioms: &[Sequent], s: SortId) -> bool {
    let [bot, total] = Theory::inequality_axioms(s);
    let matches_modulo = |ax: &Sequent, template: &Sequent| -> bool {
        let a = ax.canonicalize();
        if a == template.canonicalize() {
            return true;
        }
        // Accept the commuted forms (`x = y & x != y`, `x = y | x != y`).
        let swapped = Sequent::new(
            ax.context.clone(),
            swap_binary(&ax.antecedent),
            swap_binary(&ax.succedent),
        )
        .canonicalize();
        swapped == template.canonicalize()
    };
    axioms.iter().any(|ax| matches_modulo(ax, &bot))
        && axioms.iter().any(|ax| matches_modulo(ax, &total))
}

fn swap_binary(f: &Formula) -> Formula {
    match f {
        Formula::And(l, r) => Formula::And(r.clone(), l.clone()),
        Formula::Or(l, r) => Formula::Or(r.clone(), l.clone()),
        other => other.clone(),
    }
}
