//! Pretty-printer for the surface grammar. `parse(print(t))` is the
//! round-trip contract: printing uses exactly the token vocabulary the
//! parser accepts, with parentheses only where precedence demands them.

use crate::logic::{Formula, FormulaInContext, Sequent, Signature, Term, Theory};

pub fn print_term(sig: &Signature, t: &Term) -> String {
    match t {
        Term::Var(v) => v.clone(),
        Term::App(f, args) => {
            let name = &sig.function(*f).name;
            if args.is_empty() {
                name.clone()
            } else {
                let inner: Vec<String> = args.iter().map(|a| print_term(sig, a)).collect();
                format!("{}({})", name, inner.join(", "))
            }
        }
    }
}

/// Precedence levels, loosest first: `->` (1), `|` (2), `&` (3), prefix (4).
fn level(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

fn print_at(sig: &Signature, f: &Formula, min_level: u8) -> String {
    let own = level(f);
    let body = match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Rel(r, args) => {
            let name = &sig.relation(*r).name;
            if args.is_empty() {
                name.clone()
            } else {
                let inner: Vec<String> = args.iter().map(|a| print_term(sig, a)).collect();
                format!("{}({})", name, inner.join(", "))
            }
        }
        Formula::Eq(l, r) => format!("{} = {}", print_term(sig, l), print_term(sig, r)),
        Formula::Neq(l, r) => format!("{} != {}", print_term(sig, l), print_term(sig, r)),
        Formula::And(l, r) => format!(
            "{} & {}",
            print_at(sig, l, 3),
            // Right operand one level tighter: `&` associates to the left.
            print_at(sig, r, 4)
        ),
        Formula::Or(l, r) => format!("{} | {}", print_at(sig, l, 2), print_at(sig, r, 3)),
        Formula::Implies(l, r) => format!(
            "{} -> {}",
            // `->` associates to the right.
            print_at(sig, l, 2),
            print_at(sig, r, 1)
        ),
        Formula::Not(inner) => format!("not {}", print_at(sig, inner, 4)),
        Formula::Exists(v, s, inner) => {
            format!("exists {}:{}. {}", v, sig.sort_name(*s), print_at(sig, inner, 1))
        }
        Formula::Forall(v, s, inner) => {
            format!("forall {}:{}. {}", v, sig.sort_name(*s), print_at(sig, inner, 1))
        }
    };
    // Quantifiers and `not` reach as far right as possible, so as a right
    // operand they never need parentheses; anywhere else they do when a
    // tighter position wants them.
    let needs_parens = match f {
        Formula::Exists(..) | Formula::Forall(..) | Formula::Not(..) => false,
        _ => own < min_level,
    };
    if needs_parens {
        format!("({body})")
    } else {
        body
    }
}

pub fn print_formula(sig: &Signature, f: &Formula) -> String {
    print_at(sig, f, 1)
}

pub fn print_context(sig: &Signature, context: &[(String, SortId)]) -> String {
    context
        .iter()
        .map(|(v, s)| format!("{}:{}", v, sig.sort_name(*s)))
        .collect::<Vec<_>>()
        .join(" ")
}

use crate::logic::SortId;

pub fn print_formula_in_context(sig: &Signature, f: &FormulaInContext) -> String {
    format!(
        "{} | {}",
        print_context(sig, &f.context),
        print_formula(sig, &f.body)
    )
}

pub fn print_sequent(sig: &Signature, s: &Sequent) -> String {
    format!(
        "axiom {} | {} |- {}",
        print_context(sig, &s.context),
        print_formula(sig, &s.antecedent),
        print_formula(sig, &s.succedent)
    )
}

/// Render a theory back to the surface grammar.
pub fn print_theory(t: &Theory) -> String {
    let sig = &t.signature;
    let mut lines = Vec::new();
    if !t.name.is_empty() {
        lines.push(format!("# theory: {}", t.name));
    }
    lines.push(format!("fragment {}", t.fragment));
    for s in sig.sort_ids() {
        lines.push(format!("sort {}", sig.sort_name(s)));
    }
    for f in sig.functions() {
        let args = f
            .args
            .iter()
            .map(|s| sig.sort_name(*s).to_string())
            .collect::<Vec<_>>()
            .join(" x ");
        lines.push(format!(
            "fun {} : {} -> {}",
            f.name,
            args,
            sig.sort_name(f.result)
        ));
    }
    for r in sig.relations() {
        let args = r
            .args
            .iter()
            .map(|s| sig.sort_name(*s).to_string())
            .collect::<Vec<_>>()
            .join(" x ");
        lines.push(format!("rel {} : {}", r.name, args));
    }
    for ax in &t.axioms {
        lines.push(print_sequent(sig, ax));
    }
    lines.join("\n") + "\n"
}
