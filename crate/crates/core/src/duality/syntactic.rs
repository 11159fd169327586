//! The syntactic category of a theory at a finite bound: objects are
//! formulas-in-context, arrows are provably functional relations. Both
//! object equality and the hom-sets are computed semantically over the
//! bounded model groupoid — two formulas are equal when they define the
//! same set in every model, and the arrows from `φ` to `ψ` are read off
//! from the continuous equivariant maps between their definable sheaves,
//! each map decomposed back into a defining formula through its graph.
//!
//! The bridge in the last step is the finite-scale graph lemma: a
//! fiber-preserving equivariant map between definable sheaves is continuous
//! exactly when its graph is an open set of the product's total space, so
//! the graphs of the maps found by the hom-search are guaranteed to
//! decompose into formulas, and conversely a functional relation whose
//! graph is not open names a discontinuous map and is rejected.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{print_formula_in_context, Formula, FormulaInContext, Term};
use crate::model::{definable_set, Atom, Limits, ModelGroupoid};
use crate::sheaf::{decompose_stable_open, definable_sheaf, sheaf_homs, Elem, EquivariantSheaf};
use crate::topology::{point_set, LogicalTopologies};

/// An object of the syntactic category: a formula-in-context, stored in
/// canonical form so that alpha-variants collapse to one representative.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SyntacticObject {
    pub formula: FormulaInContext,
}

impl SyntacticObject {
    /// Wrap a formula as an object, canonicalizing its variable names.
    pub fn new(f: &FormulaInContext) -> Self {
        Self {
            formula: f.canonicalize(),
        }
    }
}

/// An arrow of the syntactic category: a functional relation from `source`
/// to `target`, presented by its graph formula over the concatenated
/// context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntacticArrow {
    pub source: SyntacticObject,
    pub target: SyntacticObject,
    pub graph: FormulaInContext,
}

/// Decide whether two formulas define the same object: same context sorts
/// and the same definable set in every model of the groupoid. Formulas in
/// contexts of different sorts are simply different objects.
pub fn objects_equal(
    g: &ModelGroupoid,
    a: &FormulaInContext,
    b: &FormulaInContext,
) -> Result<bool> {
    let sig = &g.theory.signature;
    a.validate(sig)?;
    b.validate(sig)?;
    if a.context_sorts() != b.context_sorts() {
        return Ok(false);
    }
    for m in &g.models {
        if definable_set(sig, m, a)? != definable_set(sig, m, b)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The three laws a graph formula must satisfy to present an arrow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionalityLaw {
    /// The graph must be contained in the product of source and target.
    Relation,
    /// Every source tuple must be related to at least one target tuple.
    Total,
    /// Every source tuple must be related to at most one target tuple.
    SingleValued,
}

impl fmt::Display for FunctionalityLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionalityLaw::Relation => write!(f, "relation containment"),
            FunctionalityLaw::Total => write!(f, "totality"),
            FunctionalityLaw::SingleValued => write!(f, "single-valuedness"),
        }
    }
}

/// A concrete counterexample to functionality: which law fails, in which
/// model, at which tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalityWitness {
    pub law: FunctionalityLaw,
    pub model: usize,
    pub tuple: Vec<Atom>,
}

/// Check that `sigma` is a functional relation from `phi` to `psi` in every
/// model: contained in the product, total, and single-valued. Returns the
/// first counterexample, or `None` when all three laws hold everywhere.
pub fn is_functional_relation(
    g: &ModelGroupoid,
    sigma: &FormulaInContext,
    phi: &FormulaInContext,
    psi: &FormulaInContext,
) -> Result<Option<FunctionalityWitness>> {
    let sig = &g.theory.signature;
    sigma.validate(sig)?;
    phi.validate(sig)?;
    psi.validate(sig)?;
    let mut expected = phi.context_sorts();
    expected.extend(psi.context_sorts());
    if sigma.context_sorts() != expected {
        return Err(Error::Sort {
            term: print_formula_in_context(sig, sigma),
            message: "graph context must concatenate the source and target contexts".into(),
        });
    }
    let m = phi.context.len();
    for (mi, model) in g.models.iter().enumerate() {
        let p: BTreeSet<Vec<Atom>> = definable_set(sig, model, phi)?.into_iter().collect();
        let q: BTreeSet<Vec<Atom>> = definable_set(sig, model, psi)?.into_iter().collect();
        let graph = definable_set(sig, model, sigma)?;
        let mut images: BTreeMap<Vec<Atom>, Vec<Vec<Atom>>> = BTreeMap::new();
        for t in graph {
            let (ta, tb) = t.split_at(m);
            if !p.contains(ta) || !q.contains(tb) {
                return Ok(Some(FunctionalityWitness {
                    law: FunctionalityLaw::Relation,
                    model: mi,
                    tuple: t,
                }));
            }
            images.entry(ta.to_vec()).or_default().push(tb.to_vec());
        }
        for a in &p {
            match images.get(a).map_or(0, Vec::len) {
                0 => {
                    return Ok(Some(FunctionalityWitness {
                        law: FunctionalityLaw::Total,
                        model: mi,
                        tuple: a.clone(),
                    }))
                }
                1 => {}
                _ => {
                    return Ok(Some(FunctionalityWitness {
                        law: FunctionalityLaw::SingleValued,
                        model: mi,
                        tuple: a.clone(),
                    }))
                }
            }
        }
    }
    Ok(None)
}

/// The binary product object `φ(x̄) ∧ ψ(ȳ)` over the concatenated context,
/// with both halves canonicalized and the second half's variables shifted
/// past the first. The result carries canonical names throughout.
pub fn product_object(a: &FormulaInContext, b: &FormulaInContext) -> FormulaInContext {
    let ca = a.canonicalize();
    let cb = b.canonicalize();
    let m = ca.context.len();
    let shift: BTreeMap<String, String> = cb
        .context
        .iter()
        .enumerate()
        .map(|(i, (name, _))| (name.clone(), format!("x{}", m + i)))
        .collect();
    let body_b = cb.body.rename_free(&shift);
    let mut context = ca.context.clone();
    context.extend(
        cb.context
            .iter()
            .enumerate()
            .map(|(i, (_, s))| (format!("x{}", m + i), *s)),
    );
    FormulaInContext::new(context, Formula::conjoin([ca.body, body_b]))
}

/// The identity arrow on an object: the graph is the product of the object
/// with itself cut down to the diagonal.
pub fn identity_arrow(a: &FormulaInContext) -> SyntacticArrow {
    let object = SyntacticObject::new(a);
    let gamma = product_object(&object.formula, &object.formula);
    let m = object.formula.context.len();
    let eqs = (0..m).map(|i| {
        Formula::Eq(
            Term::Var(format!("x{i}")),
            Term::Var(format!("x{}", m + i)),
        )
    });
    let body = Formula::conjoin(std::iter::once(gamma.body).chain(eqs));
    SyntacticArrow {
        source: object.clone(),
        target: object,
        graph: FormulaInContext::new(gamma.context, body),
    }
}

/// Relational composite of two arrows: existentially quantify the shared
/// middle context out of the conjunction of the two graphs. `first` is
/// applied first, so the result is `then ∘ first`.
pub fn compose_arrows(first: &SyntacticArrow, then: &SyntacticArrow) -> Result<SyntacticArrow> {
    let middle = first.target.formula.context_sorts();
    if then.source.formula.context_sorts() != middle {
        return Err(Error::Sort {
            term: format!("{:?}", then.source.formula.context),
            message: "arrows compose only along a shared middle context".into(),
        });
    }
    let m = first.source.formula.context.len();
    let n = middle.len();
    let p = then.target.formula.context.len();
    let fg = first.graph.canonicalize();
    let kg = then.graph.canonicalize();
    let f_map: BTreeMap<String, String> = (0..n)
        .map(|i| (format!("x{}", m + i), format!("mid{i}")))
        .collect();
    let mut k_map: BTreeMap<String, String> = (0..n)
        .map(|i| (format!("x{i}"), format!("mid{i}")))
        .collect();
    k_map.extend((0..p).map(|j| (format!("x{}", n + j), format!("x{}", m + j))));
    let f_body = fg.body.rename_free(&f_map);
    let k_body = kg.body.rename_free(&k_map);
    let mids: Vec<(String, crate::logic::SortId)> = middle
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("mid{i}"), *s))
        .collect();
    let body = Formula::And(Box::new(f_body), Box::new(k_body)).exists_close(&mids);
    let mut context = first.source.formula.context.clone();
    context.extend(
        then.target
            .formula
            .context
            .iter()
            .enumerate()
            .map(|(j, (_, s))| (format!("x{}", m + j), *s)),
    );
    Ok(SyntacticArrow {
        source: first.source.clone(),
        target: then.target.clone(),
        graph: FormulaInContext::new(context, body).canonicalize(),
    })
}

/// The result of a hom-set search: the endpoint sheaves, the sheaf of the
/// product object, the raw total-space maps, and one syntactic arrow per
/// map, in the same order.
#[derive(Debug, Clone)]
pub struct HomSearch {
    pub source_sheaf: EquivariantSheaf,
    pub target_sheaf: EquivariantSheaf,
    pub graph_sheaf: EquivariantSheaf,
    pub maps: Vec<Vec<usize>>,
    pub arrows: Vec<SyntacticArrow>,
}

/// Compute the hom-set from `a` to `b` together with the sheaf data it came
/// from: enumerate the continuous equivariant maps between the definable
/// sheaves, take each map's graph as a point set of the product sheaf, and
/// decompose that stable open back into a defining formula.
pub fn hom_search(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    a: &FormulaInContext,
    b: &FormulaInContext,
    limits: &Limits,
) -> Result<HomSearch> {
    let oa = SyntacticObject::new(a);
    let ob = SyntacticObject::new(b);
    let sa = definable_sheaf(g, tops, &oa.formula)?;
    let sb = definable_sheaf(g, tops, &ob.formula)?;
    let gamma = product_object(&oa.formula, &ob.formula);
    let sg = definable_sheaf(g, tops, &gamma)?;
    let maps = sheaf_homs(&sa, &sb, limits)?;
    let m = oa.formula.context.len();
    let mut arrows = Vec::with_capacity(maps.len());
    for f in &maps {
        let mut graph_points = Vec::new();
        for (idx, (x, e)) in sg.total.iter().enumerate() {
            let Elem::Tuple(t) = e else {
                return Err(Error::Invalid(
                    "definable sheaf elements must be tuples".into(),
                ));
            };
            let (ta, tb) = t.split_at(m);
            let i = sa
                .point_index(*x, &Elem::Tuple(ta.to_vec()))
                .ok_or_else(|| {
                    Error::Invalid("graph tuple does not restrict to a source point".into())
                })?;
            let (y, image) = &sb.total[f[i]];
            if y == x && *image == Elem::Tuple(tb.to_vec()) {
                graph_points.push(idx);
            }
        }
        let u = point_set(sg.total.len(), graph_points);
        let pieces = decompose_stable_open(g, &sg, &u)?;
        let body = Formula::disjoin(pieces.into_iter().map(|p| p.body));
        arrows.push(SyntacticArrow {
            source: oa.clone(),
            target: ob.clone(),
            graph: FormulaInContext::new(gamma.context.clone(), body),
        });
    }
    Ok(HomSearch {
        source_sheaf: sa,
        target_sheaf: sb,
        graph_sheaf: sg,
        maps,
        arrows,
    })
}

/// The syntactic arrows from `a` to `b`: every functional relation that is
/// continuous as a map of definable sheaves, one per map.
pub fn hom_set(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    a: &FormulaInContext,
    b: &FormulaInContext,
    limits: &Limits,
) -> Result<Vec<SyntacticArrow>> {
    Ok(hom_search(g, tops, a, b, limits)?.arrows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::logic::{parse_formula_in_context, parse_theory};
    use crate::model::{build_groupoid, AtomUniverse};
    use crate::topology::build_logical_topologies;

    fn eq_theory() -> crate::logic::Theory {
        parse_theory(
            "t_eq",
            "sort X\naxiom x:X y:X | x != y & x = y |- false\naxiom x:X y:X | true |- x != y | x = y\n",
        )
        .unwrap()
    }

    fn eq_setup() -> (ModelGroupoid, LogicalTopologies) {
        let t = eq_theory();
        let g = build_groupoid(&t, &AtomUniverse::new(2), &Limits::default()).unwrap();
        let tracked =
            vec![parse_formula_in_context(&g.theory.signature, "x:X | true").unwrap()];
        let tops = build_logical_topologies(&g, &tracked).unwrap();
        (g, tops)
    }

    fn parse(g: &ModelGroupoid, text: &str) -> FormulaInContext {
        parse_formula_in_context(&g.theory.signature, text).unwrap()
    }

    #[test]
    fn object_equality_is_semantic() {
        let (g, _) = eq_setup();
        let top = parse(&g, "x:X | true");
        let redundant = parse(&g, "x:X | true & true");
        let alpha = parse(&g, "y:X | true");
        let inhabited_twice = parse(&g, "x:X | exists y:X. x != y");
        assert!(objects_equal(&g, &top, &redundant).unwrap());
        assert!(objects_equal(&g, &top, &alpha).unwrap());
        assert!(!objects_equal(&g, &top, &inhabited_twice).unwrap());
        // Different context sorts are different objects, not an error.
        let pair = parse(&g, "x:X y:X | true");
        assert!(!objects_equal(&g, &top, &pair).unwrap());
    }

    #[test]
    fn functionality_finds_the_first_broken_law() {
        let (g, _) = eq_setup();
        let top = parse(&g, "x:X | true");

        // The diagonal is the identity: functional.
        let diagonal = parse(&g, "x:X y:X | x = y");
        assert_eq!(
            is_functional_relation(&g, &diagonal, &top, &top).unwrap(),
            None
        );

        // Inequality fails totality in a singleton model: model 1 is {0}
        // and atom 0 has nowhere to go.
        let apart = parse(&g, "x:X y:X | x != y");
        let witness = is_functional_relation(&g, &apart, &top, &top)
            .unwrap()
            .unwrap();
        assert_eq!(witness.law, FunctionalityLaw::Total);
        assert_eq!(witness.model, 1);
        assert_eq!(witness.tuple, vec![0]);

        // The full square relates one source to two targets in the
        // two-atom model.
        let square = parse(&g, "x:X y:X | true");
        let witness = is_functional_relation(&g, &square, &top, &top)
            .unwrap()
            .unwrap();
        assert_eq!(witness.law, FunctionalityLaw::SingleValued);
        assert_eq!(witness.model, 3);

        // A graph escaping the source object breaks relation containment.
        let empty = parse(&g, "x:X | false");
        let witness = is_functional_relation(&g, &diagonal, &empty, &top)
            .unwrap()
            .unwrap();
        assert_eq!(witness.law, FunctionalityLaw::Relation);

        // A graph context that does not concatenate the endpoint contexts
        // is a sort error.
        let short = parse(&g, "x:X | true");
        assert!(matches!(
            is_functional_relation(&g, &short, &top, &top),
            Err(Error::Sort { .. })
        ));
    }

    #[test]
    fn hom_from_the_terminal_object_is_the_identity_alone() {
        let (g, tops) = eq_setup();
        let top = parse(&g, "x:X | true");
        let arrows = hom_set(&g, &tops, &top, &top, &Limits::default()).unwrap();
        assert_eq!(arrows.len(), 1);
        let diagonal = parse(&g, "x:X y:X | x = y");
        assert!(objects_equal(&g, &arrows[0].graph, &diagonal).unwrap());
        assert_eq!(
            is_functional_relation(&g, &arrows[0].graph, &top, &top).unwrap(),
            None
        );
    }

    #[test]
    fn hom_from_the_empty_object_is_the_empty_graph() {
        let (g, tops) = eq_setup();
        let bot = parse(&g, "x:X | false");
        let top = parse(&g, "x:X | true");
        let arrows = hom_set(&g, &tops, &bot, &top, &Limits::default()).unwrap();
        assert_eq!(arrows.len(), 1);
        let never = parse(&g, "x:X y:X | false");
        assert!(objects_equal(&g, &arrows[0].graph, &never).unwrap());
    }

    #[test]
    fn hom_from_the_apart_pair_is_the_two_projections() {
        let (g, tops) = eq_setup();
        let apart = parse(&g, "x:X y:X | x != y");
        let top = parse(&g, "z:X | true");
        let arrows = hom_set(&g, &tops, &apart, &top, &Limits::default()).unwrap();
        assert_eq!(arrows.len(), 2);
        let first = parse(&g, "x:X y:X z:X | x != y & z = x");
        let second = parse(&g, "x:X y:X z:X | x != y & z = y");
        // Maps are enumerated lexicographically, so the first projection
        // comes first.
        assert!(objects_equal(&g, &arrows[0].graph, &first).unwrap());
        assert!(objects_equal(&g, &arrows[1].graph, &second).unwrap());
        for arrow in &arrows {
            assert_eq!(
                is_functional_relation(&g, &arrow.graph, &apart, &top).unwrap(),
                None
            );
        }
    }

    #[test]
    fn endomorphisms_of_the_apart_pair_compose_like_the_swap() {
        let (g, tops) = eq_setup();
        let apart = parse(&g, "x:X y:X | x != y");
        let arrows = hom_set(&g, &tops, &apart, &apart, &Limits::default()).unwrap();
        assert_eq!(arrows.len(), 2);
        let id = identity_arrow(&apart);
        let id_pos = arrows
            .iter()
            .position(|a| objects_equal(&g, &a.graph, &id.graph).unwrap())
            .expect("the identity is an endomorphism");
        let swap = &arrows[1 - id_pos];
        let swap_formula = parse(&g, "x:X y:X u:X v:X | x != y & u = y & v = x");
        assert!(objects_equal(&g, &swap.graph, &swap_formula).unwrap());
        // The swap is an involution: swap ∘ swap = id.
        let twice = compose_arrows(swap, swap).unwrap();
        assert!(objects_equal(&g, &twice.graph, &id.graph).unwrap());
        // Identity laws on both sides.
        let left = compose_arrows(&id, swap).unwrap();
        let right = compose_arrows(swap, &id).unwrap();
        assert!(objects_equal(&g, &left.graph, &swap.graph).unwrap());
        assert!(objects_equal(&g, &right.graph, &swap.graph).unwrap());
    }

    #[test]
    fn discontinuous_functional_relation_has_a_non_open_graph() {
        // Swapping the two atoms in the doubleton model while fixing the
        // singletons is equivariant and functional, but not continuous:
        // the minimal neighbourhood of a singleton point contains the
        // doubleton extension, which the map moves off the diagonal. Its
        // graph is stable but not open, and decomposition refuses it.
        let (g, tops) = eq_setup();
        let top = parse(&g, "x:X | true");
        let search = hom_search(&g, &tops, &top, &top, &Limits::default()).unwrap();
        let sa = &search.source_sheaf;
        let sg = &search.graph_sheaf;
        assert_eq!(search.maps, vec![vec![0, 1, 2, 3]]);

        let twisted = vec![0, 1, 3, 2];
        let mut graph_points = Vec::new();
        for (idx, (x, e)) in sg.total.iter().enumerate() {
            let Elem::Tuple(t) = e else { unreachable!() };
            let i = sa.point_index(*x, &Elem::Tuple(vec![t[0]])).unwrap();
            if sa.total[twisted[i]] == (*x, Elem::Tuple(vec![t[1]])) {
                graph_points.push(idx);
            }
        }
        let u = point_set(sg.total.len(), graph_points);
        assert!(matches!(
            decompose_stable_open(&g, sg, &u),
            Err(Error::NotOpen { .. })
        ));
    }

    #[test]
    fn composition_renames_the_middle_apart() {
        let (g, tops) = eq_setup();
        let apart = parse(&g, "x:X y:X | x != y");
        let top = parse(&g, "z:X | true");
        let projections = hom_set(&g, &tops, &apart, &top, &Limits::default()).unwrap();
        let endos = hom_set(&g, &tops, &apart, &apart, &Limits::default()).unwrap();
        // Composing the swap with the first projection gives the second.
        let id = identity_arrow(&apart);
        let swap = endos
            .iter()
            .find(|a| !objects_equal(&g, &a.graph, &id.graph).unwrap())
            .unwrap();
        let composite = compose_arrows(swap, &projections[0]).unwrap();
        assert!(objects_equal(&g, &composite.graph, &projections[1].graph).unwrap());
        // Sort mismatch in the middle is rejected.
        assert!(matches!(
            compose_arrows(&projections[0], &projections[0]),
            Err(Error::Sort { .. })
        ));
    }

    #[test]
    fn empty_context_objects_have_a_hom_set() {
        // Propositional objects (empty context) work throughout: over the
        // inequality theory, truth is the terminal object and there is one
        // arrow from it to itself.
        let (g, tops) = eq_setup();
        let point = parse(&g, "| true");
        let arrows = hom_set(&g, &tops, &point, &point, &Limits::default()).unwrap();
        assert_eq!(arrows.len(), 1);
        assert!(objects_equal(&g, &arrows[0].graph, &point).unwrap());
    }
}
