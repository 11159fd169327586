//! The three logical topologies: on the model space, on the total space of
//! each definable set, and on the isomorphism space.
//!
//! Basic opens are "realizes φ at parameters b̄" sets. Generating from a
//! finite tracked formula list alone would give a topology coarser than the
//! logical one, so the built subbases also include one *diagram open* per
//! model — the basic open of the model's positive diagram at its own
//! carrier tuple. Coherent formulas are preserved under the substructure
//! extensions that diagram opens carve out, so at a finite bound these
//! generators realize every minimal neighbourhood of the full logical
//! topology exactly: min(M) = {N ⊇ M}, min((M,ā)) = {(N,ā) : N ⊇ M}, and
//! min(f) = the set of isomorphisms extending f between extensions.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::logic::{
    print_formula_in_context, Formula, FormulaInContext, Signature, SortId, Term,
};
use crate::model::{tuple_in_definable, tuples_over, Atom, Model, ModelGroupoid};
use crate::topology::bundle::{check_topological_groupoid, TopologicalGroupoid};
use crate::topology::space::{point_set, FiniteTopology, NamedOpen, PointSet};

/// ⟨φ, b̄⟩ on the model space: all models where b̄ lies in φ's extension.
pub fn model_open(
    g: &ModelGroupoid,
    f: &FormulaInContext,
    params: &[Atom],
) -> Result<PointSet> {
    f.validate(&g.theory.signature)?;
    if params.len() != f.context.len() {
        return Err(Error::EnvMismatch(format!(
            "basic open of a {}-variable context needs {} parameters, got {}",
            f.context.len(),
            f.context.len(),
            params.len()
        )));
    }
    Ok(point_set(
        g.models.len(),
        g.models
            .iter()
            .enumerate()
            .filter(|(_, m)| tuple_in_definable(m, f, params))
            .map(|(i, _)| i),
    ))
}

/// The total space of a definable set: all (model index, tuple) pairs with
/// the tuple in the formula's extension, sorted by model then tuple.
pub fn total_space(g: &ModelGroupoid, f: &FormulaInContext) -> Result<Vec<(usize, Vec<Atom>)>> {
    f.validate(&g.theory.signature)?;
    let mut out = Vec::new();
    for (i, m) in g.models.iter().enumerate() {
        let carriers: Vec<&[Atom]> = f.context.iter().map(|(_, s)| m.carrier(*s)).collect();
        for tuple in tuples_over(&carriers) {
            if tuple_in_definable(m, f, &tuple) {
                out.push((i, tuple));
            }
        }
    }
    Ok(out)
}

/// ⟨ψ, b̄⟩ on a total space over φ: the points (M, ā) with ā∗b̄ in the
/// extension of φ∧ψ. `psi`'s context must extend φ's context; `params`
/// instantiates the extension variables.
pub fn sheaf_open(
    g: &ModelGroupoid,
    phi: &FormulaInContext,
    total: &[(usize, Vec<Atom>)],
    psi: &FormulaInContext,
    params: &[Atom],
) -> Result<PointSet> {
    phi.validate(&g.theory.signature)?;
    psi.validate(&g.theory.signature)?;
    let prefix = phi.context.len();
    if psi.context.len() < prefix
        || psi.context_sorts()[..prefix] != phi.context_sorts()[..]
    {
        return Err(Error::EnvMismatch(format!(
            "sheaf-open formula context must extend the sheaf's context {}",
            print_formula_in_context(&g.theory.signature, phi)
        )));
    }
    if params.len() != psi.context.len() - prefix {
        return Err(Error::EnvMismatch(format!(
            "sheaf open needs {} parameters, got {}",
            psi.context.len() - prefix,
            params.len()
        )));
    }
    // Move both bodies into one fresh context (`#`-prefixed names cannot
    // collide with anything the parser produces) so the conjunction φ∧ψ
    // is well-formed even when φ's and ψ's variable names overlap.
    let mut context = Vec::new();
    let mut phi_map = std::collections::BTreeMap::new();
    let mut psi_map = std::collections::BTreeMap::new();
    for (i, (name, sort)) in psi.context.iter().enumerate() {
        let fresh = format!("#v{i}");
        if i < prefix {
            phi_map.insert(phi.context[i].0.clone(), fresh.clone());
        }
        psi_map.insert(name.clone(), fresh.clone());
        context.push((fresh, *sort));
    }
    let conjunction = FormulaInContext::new(
        context,
        Formula::conjoin([
            phi.body.rename_free(&phi_map),
            psi.body.rename_free(&psi_map),
        ]),
    );
    Ok(point_set(
        total.len(),
        total.iter().enumerate().filter_map(|(k, (mi, tuple))| {
            let mut env = tuple.clone();
            env.extend_from_slice(params);
            tuple_in_definable(&g.models[*mi], &conjunction, &env).then_some(k)
        }),
    ))
}

/// A subbasic open on the isomorphism space: the arrows whose source lies
/// in a basic open, whose target lies in another, and which map specific
/// atoms to specific atoms.
#[derive(Debug, Clone, Default)]
pub struct ArrowOpenSpec {
    pub source: Option<(FormulaInContext, Vec<Atom>)>,
    pub target: Option<(FormulaInContext, Vec<Atom>)>,
    /// Sort-tagged preservation conditions b ↦ c.
    pub preserve: Vec<(SortId, Atom, Atom)>,
}

/// Evaluate an [`ArrowOpenSpec`]: the intersection of its source, target,
/// and preservation conditions over all arrows.
pub fn arrow_open(g: &ModelGroupoid, spec: &ArrowOpenSpec) -> Result<PointSet> {
    let source_set = match &spec.source {
        Some((f, params)) => Some(model_open(g, f, params)?),
        None => None,
    };
    let target_set = match &spec.target {
        Some((f, params)) => Some(model_open(g, f, params)?),
        None => None,
    };
    for &(s, _, _) in &spec.preserve {
        if s.0 >= g.theory.signature.sort_count() {
            return Err(Error::Invalid(format!(
                "preservation condition names sort {} outside the signature",
                s.0
            )));
        }
    }
    Ok(point_set(
        g.arrows.len(),
        g.arrows.iter().enumerate().filter_map(|(k, arrow)| {
            if let Some(src) = &source_set {
                if !src.contains(arrow.source) {
                    return None;
                }
            }
            if let Some(tgt) = &target_set {
                if !tgt.contains(arrow.target) {
                    return None;
                }
            }
            let model = &g.models[arrow.source];
            spec.preserve
                .iter()
                .all(|&(s, b, c)| {
                    model.carrier(s).contains(&b) && arrow.map.apply(model, s, b) == c
                })
                .then_some(k)
        }),
    ))
}

/// The positive diagram of a model: one context variable per carrier
/// element (all sorts, in order), conjoining every relation tuple and
/// function entry that holds; the parameter tuple is the carrier itself,
/// so ⟨δ_M, carrier(M)⟩ is exactly {N : N extends M}.
pub fn positive_diagram(sig: &Signature, m: &Model) -> (FormulaInContext, Vec<Atom>) {
    let mut context = Vec::new();
    let mut params = Vec::new();
    // Variable for atom `a` of sort `s` is at a fixed index.
    // `#`-prefixed names cannot collide with parsed variable names, which
    // matters when the diagram is conjoined with a user formula.
    let var = |s: usize, a: Atom, carriers: &[Vec<Atom>]| -> String {
        let offset: usize = carriers[..s].iter().map(Vec::len).sum();
        let pos = carriers[s].binary_search(&a).expect("atom in carrier");
        format!("#d{}", offset + pos)
    };
    for (s, carrier) in m.carriers.iter().enumerate() {
        for &a in carrier {
            context.push((var(s, a, &m.carriers), SortId(s)));
            params.push(a);
        }
    }
    let mut conjuncts = Vec::new();
    for (r, decl) in sig.relations().iter().enumerate() {
        for tuple in &m.relations[r] {
            let args = tuple
                .iter()
                .zip(&decl.args)
                .map(|(&a, s)| Term::Var(var(s.0, a, &m.carriers)))
                .collect();
            conjuncts.push(Formula::Rel(crate::logic::RelId(r), args));
        }
    }
    for (fi, decl) in sig.functions().iter().enumerate() {
        for (tuple, &value) in &m.functions[fi] {
            let args = tuple
                .iter()
                .zip(&decl.args)
                .map(|(&a, s)| Term::Var(var(s.0, a, &m.carriers)))
                .collect();
            conjuncts.push(Formula::Eq(
                Term::App(crate::logic::FunId(fi), args),
                Term::Var(var(decl.result.0, value, &m.carriers)),
            ));
        }
    }
    (
        FormulaInContext::new(context, Formula::conjoin(conjuncts)),
        params,
    )
}

/// The diagram of `m` pinned to a total-space point: context is φ's
/// context followed by the diagram variables, with equalities identifying
/// each φ-variable with the diagram variable of its anchor atom. The basic
/// open ⟨this, carrier(m)⟩ on the total space of φ is exactly
/// {(N, anchor) : N extends m}.
pub fn pinned_diagram(
    sig: &Signature,
    m: &Model,
    phi_context: &[(String, SortId)],
    anchor: &[Atom],
) -> (FormulaInContext, Vec<Atom>) {
    let (diagram, params) = positive_diagram(sig, m);
    let mut conjuncts = vec![diagram.body.clone()];
    for ((x, sort), &a) in phi_context.iter().zip(anchor) {
        let pos = params
            .iter()
            .zip(&diagram.context)
            .position(|(&p, (_, s))| p == a && *s == *sort)
            .expect("anchor atom is in the carrier");
        conjuncts.push(Formula::Eq(
            Term::Var(x.clone()),
            Term::Var(diagram.context[pos].0.clone()),
        ));
    }
    let context = phi_context
        .iter()
        .cloned()
        .chain(diagram.context.iter().cloned())
        .collect();
    (
        FormulaInContext::new(context, Formula::conjoin(conjuncts)),
        params,
    )
}

/// One tracked definable set with its total space and topology.
#[derive(Debug, Clone)]
pub struct TrackedTotal {
    pub formula: FormulaInContext,
    pub points: Vec<(usize, Vec<Atom>)>,
    pub topology: FiniteTopology,
}

/// The model-space, total-space, and isomorphism-space topologies built
/// from a tracked formula list plus the diagram opens.
#[derive(Debug, Clone)]
pub struct LogicalTopologies {
    pub base: FiniteTopology,
    pub totals: Vec<TrackedTotal>,
    pub arrow: FiniteTopology,
}

/// Build all three logical topologies. Every tracked formula contributes
/// its basic opens at all parameter tuples; every model contributes its
/// diagram open; the arrow space gets source/target preimages of the base
/// subbasis plus all atom-preservation opens.
pub fn build_logical_topologies(
    g: &ModelGroupoid,
    tracked: &[FormulaInContext],
) -> Result<LogicalTopologies> {
    let sig = &g.theory.signature;
    for f in tracked {
        f.validate(sig)?;
        if let Some(connective) = f.body.first_classical_connective() {
            return Err(Error::NonCoherent {
                formula: print_formula_in_context(sig, f),
                connective: connective.into(),
            });
        }
    }
    let universe: Vec<Atom> = g.universe.atoms().collect();

    // Model-space subbasis: tracked opens at every parameter tuple, then
    // diagram opens.
    let mut base_subbasis = Vec::new();
    for f in tracked {
        for params in std::iter::repeat(universe.iter().copied())
            .take(f.context.len())
            .multi_cartesian_product()
        {
            base_subbasis.push(NamedOpen {
                name: format!("<{}, ({})>", print_formula_in_context(sig, f), fmt_atoms(&params)),
                points: model_open(g, f, &params)?,
            });
        }
    }
    for (i, m) in g.models.iter().enumerate() {
        let (diagram, params) = positive_diagram(sig, m);
        base_subbasis.push(NamedOpen {
            name: format!("<diagram(model {i}), ({})>", fmt_atoms(&params)),
            points: model_open(g, &diagram, &params)?,
        });
    }
    let base = FiniteTopology::from_subbasis(g.models.len(), base_subbasis);

    // Total-space topologies: projection preimages of the base subbasis
    // plus one pinned diagram open per total point.
    let mut totals = Vec::new();
    for f in tracked {
        let points = total_space(g, f)?;
        let topology = total_topology(g, &base, f, &points)?;
        totals.push(TrackedTotal {
            formula: f.clone(),
            points,
            topology,
        });
    }

    // Arrow-space subbasis: s/t preimages and preservation opens.
    let mut arrow_subbasis = Vec::new();
    for open in base.subbasis() {
        for (tag, endpoint) in [("s", true), ("t", false)] {
            arrow_subbasis.push(NamedOpen {
                name: format!("{tag}^-1({})", open.name),
                points: point_set(
                    g.arrows.len(),
                    g.arrows
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| {
                            open.points
                                .contains(if endpoint { a.source } else { a.target })
                        })
                        .map(|(k, _)| k),
                ),
            });
        }
    }
    for s in sig.sort_ids() {
        for &b in &universe {
            for &c in &universe {
                let spec = ArrowOpenSpec {
                    preserve: vec![(s, b, c)],
                    ..ArrowOpenSpec::default()
                };
                arrow_subbasis.push(NamedOpen {
                    name: format!("<{}: {b} -> {c}>", sig.sort_name(s)),
                    points: arrow_open(g, &spec)?,
                });
            }
        }
    }
    let arrow = FiniteTopology::from_subbasis(g.arrows.len(), arrow_subbasis);

    Ok(LogicalTopologies {
        base,
        totals,
        arrow,
    })
}

fn fmt_atoms(atoms: &[Atom]) -> String {
    atoms.iter().map(|a| a.to_string()).join(", ")
}

/// The logical topology on the total space of one definable set: projection
/// preimages of the base subbasis plus one pinned diagram open per point,
/// making each minimal neighbourhood the extension set that keeps the
/// anchor tuple fixed.
pub fn total_topology(
    g: &ModelGroupoid,
    base: &FiniteTopology,
    f: &FormulaInContext,
    points: &[(usize, Vec<Atom>)],
) -> Result<FiniteTopology> {
    let sig = &g.theory.signature;
    let mut subbasis = Vec::new();
    for open in base.subbasis() {
        subbasis.push(NamedOpen {
            name: format!("proj^-1({})", open.name),
            points: point_set(
                points.len(),
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, (mi, _))| open.points.contains(*mi))
                    .map(|(k, _)| k),
            ),
        });
    }
    for (k, (mi, tuple)) in points.iter().enumerate() {
        let (pinned, params) = pinned_diagram(sig, &g.models[*mi], &f.context, tuple);
        subbasis.push(NamedOpen {
            name: format!("<pinned-diagram(point {k}), ({})>", fmt_atoms(&params)),
            points: sheaf_open(g, f, points, &pinned, &params)?,
        });
    }
    Ok(FiniteTopology::from_subbasis(points.len(), subbasis))
}

/// Bundle a model groupoid with its built topologies into the generic
/// topological-groupoid form used by the sheaf machinery.
pub fn model_topological_groupoid(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
) -> TopologicalGroupoid {
    TopologicalGroupoid {
        shape: g.shape.clone(),
        objects: tops.base.clone(),
        arrows: tops.arrow.clone(),
    }
}

/// Verify the topological-groupoid laws on the built topologies: source
/// and target are continuous open maps; identity, inverse, and composition
/// (on the fibred product of composable pairs) are continuous.
pub fn check_groupoid_topology(g: &ModelGroupoid, tops: &LogicalTopologies) -> Result<()> {
    check_topological_groupoid(&model_topological_groupoid(g, tops))
}

/// Exhaustive finite-scale transfer check: for every model M, every
/// duplicate-free tuple ā over M, and every duplicate-free target tuple b̄
/// of matching sorts over the universe, some isomorphism out of M sends ā
/// to b̄. (Enumeration is closed under atom renaming, so this must hold.)
pub fn check_star_transfer(g: &ModelGroupoid) -> Result<()> {
    let universe: Vec<Atom> = g.universe.atoms().collect();
    let all_sorts: Vec<SortId> = g.theory.signature.sort_ids().collect();
    for (mi, m) in g.models.iter().enumerate() {
        for len in 0..=2usize {
            for sorts in std::iter::repeat(all_sorts.iter().copied())
                .take(len)
                .multi_cartesian_product()
            {
                let source_carriers: Vec<&[Atom]> =
                    sorts.iter().map(|s| m.carrier(*s)).collect();
                for a_tuple in tuples_over(&source_carriers) {
                    if has_same_sort_duplicate(&sorts, &a_tuple) {
                        continue;
                    }
                    let universe_slices: Vec<&[Atom]> =
                        sorts.iter().map(|_| &universe[..]).collect();
                    for b_tuple in tuples_over(&universe_slices) {
                        if has_same_sort_duplicate(&sorts, &b_tuple) {
                            continue;
                        }
                        let found = g.arrows.iter().any(|arrow| {
                            arrow.source == mi
                                && sorts.iter().zip(&a_tuple).zip(&b_tuple).all(
                                    |((s, &a), &b)| arrow.map.apply(m, *s, a) == b,
                                )
                        });
                        if !found {
                            return Err(Error::Invalid(format!(
                                "transfer fails: no isomorphism out of model {mi} maps \
                                 ({}) to ({})",
                                fmt_atoms(&a_tuple),
                                fmt_atoms(&b_tuple)
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn has_same_sort_duplicate(sorts: &[SortId], tuple: &[Atom]) -> bool {
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if sorts[i] == sorts[j] && tuple[i] == tuple[j] {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula_in_context, parse_theory};
    use crate::model::{build_groupoid, AtomUniverse, Limits};
    use crate::topology::checks::is_local_homeomorphism;

    fn eq_groupoid() -> ModelGroupoid {
        let t = parse_theory(
            "t_eq",
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n",
        )
        .unwrap();
        build_groupoid(&t, &AtomUniverse::new(2), &Limits::default()).unwrap()
    }

    #[test]
    fn basic_model_opens_match_the_frozen_examples() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        // Models in canonical order: ∅, {0}, {1}, {0,1}.
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        assert_eq!(model_open(&g, &top, &[0]).unwrap(), point_set(4, [1, 3]));
        let neq = parse_formula_in_context(sig, "x:X y:X | x != y").unwrap();
        assert_eq!(model_open(&g, &neq, &[0, 1]).unwrap(), point_set(4, [3]));
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        assert_eq!(model_open(&g, &bot, &[0]).unwrap(), point_set(4, []));
    }

    #[test]
    fn sheaf_opens_match_the_frozen_examples() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let total = total_space(&g, &top).unwrap();
        // Total points in order: ({0},0), ({1},1), ({0,1},0), ({0,1},1).
        assert_eq!(
            total,
            vec![(1, vec![0]), (2, vec![1]), (3, vec![0]), (3, vec![1])]
        );
        let neq = parse_formula_in_context(sig, "x:X y:X | x != y").unwrap();
        assert_eq!(
            sheaf_open(&g, &top, &total, &neq, &[1]).unwrap(),
            point_set(4, [2])
        );
        let eq = parse_formula_in_context(sig, "x:X y:X | x = y").unwrap();
        assert_eq!(
            sheaf_open(&g, &top, &total, &eq, &[0]).unwrap(),
            point_set(4, [0, 2])
        );
        // ψ = ⊤ with no extra variables selects everything.
        assert_eq!(
            sheaf_open(&g, &top, &total, &top, &[]).unwrap(),
            point_set(4, [0, 1, 2, 3])
        );
    }

    #[test]
    fn arrow_opens_match_the_frozen_examples() {
        let g = eq_groupoid();
        // Arrows in canonical order: id_∅, id_{0}, {0}→{1}, {1}→{0},
        // id_{1}, id_{0,1}, swap.
        assert_eq!(g.arrows.len(), 7);
        let send = ArrowOpenSpec {
            preserve: vec![(SortId(0), 0, 1)],
            ..ArrowOpenSpec::default()
        };
        assert_eq!(arrow_open(&g, &send).unwrap(), point_set(7, [2, 6]));
        let everything = ArrowOpenSpec::default();
        assert_eq!(
            arrow_open(&g, &everything).unwrap(),
            point_set(7, [0, 1, 2, 3, 4, 5, 6])
        );
        let sig = &g.theory.signature;
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        let empty_source = ArrowOpenSpec {
            source: Some((bot, vec![0])),
            ..ArrowOpenSpec::default()
        };
        assert_eq!(arrow_open(&g, &empty_source).unwrap(), point_set(7, []));
    }

    #[test]
    fn base_topology_minimal_neighbourhoods_are_extension_sets() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        // min(∅) = everything, min({0}) = {{0},{0,1}}, min({0,1}) = itself.
        assert_eq!(*tops.base.min_neighborhood(0), point_set(4, [0, 1, 2, 3]));
        assert_eq!(*tops.base.min_neighborhood(1), point_set(4, [1, 3]));
        assert_eq!(*tops.base.min_neighborhood(2), point_set(4, [2, 3]));
        assert_eq!(*tops.base.min_neighborhood(3), point_set(4, [3]));
        // The lattice has exactly the six up-sets.
        assert_eq!(tops.base.opens(100).unwrap().len(), 6);
    }

    #[test]
    fn expected_opens_appear_in_the_base_lattice() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        let opens = tops.base.opens(100).unwrap();
        for expected in [
            point_set(4, [1, 3]),
            point_set(4, [2, 3]),
            point_set(4, [3]),
        ] {
            assert!(opens.contains(&expected));
        }
    }

    #[test]
    fn total_space_minimal_neighbourhoods_pin_the_tuple() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        let total = &tops.totals[0];
        // Points: ({0},0), ({1},1), ({0,1},0), ({0,1},1).
        // min(({0},0)) = {({0},0), ({0,1},0)}: extensions keep the anchor.
        assert_eq!(*total.topology.min_neighborhood(0), point_set(4, [0, 2]));
        assert_eq!(*total.topology.min_neighborhood(1), point_set(4, [1, 3]));
        assert_eq!(*total.topology.min_neighborhood(2), point_set(4, [2]));
        assert_eq!(*total.topology.min_neighborhood(3), point_set(4, [3]));
    }

    #[test]
    fn projection_is_a_local_homeomorphism_and_groupoid_maps_behave() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        let total = &tops.totals[0];
        let proj: Vec<usize> = total.points.iter().map(|(mi, _)| *mi).collect();
        is_local_homeomorphism(&proj, &total.topology, &tops.base).unwrap();
        check_groupoid_topology(&g, &tops).unwrap();
    }

    #[test]
    fn arrow_minimal_neighbourhoods_are_extension_sets() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        // Arrow 2 is {0}→{1}, 0↦1; its extensions are itself and the swap.
        assert_eq!(*tops.arrow.min_neighborhood(2), point_set(7, [2, 6]));
        // The identity of the doubleton extends only to itself.
        assert_eq!(*tops.arrow.min_neighborhood(5), point_set(7, [5]));
        // The identity of the empty model extends to every arrow.
        assert_eq!(
            *tops.arrow.min_neighborhood(0),
            point_set(7, [0, 1, 2, 3, 4, 5, 6])
        );
    }

    #[test]
    fn star_transfer_holds_at_small_bounds() {
        let g = eq_groupoid();
        check_star_transfer(&g).unwrap();
        let graph = parse_theory(
            "t_graph",
            "sort V\n\
             rel E : V x V\n\
             axiom x:V | E(x, x) |- false\n\
             axiom x:V y:V | E(x, y) |- E(y, x)\n\
             axiom x:V y:V | x != y & x = y |- false\n\
             axiom x:V y:V | true |- x != y | x = y\n",
        )
        .unwrap();
        let gg = build_groupoid(&graph, &AtomUniverse::new(2), &Limits::default()).unwrap();
        check_star_transfer(&gg).unwrap();
    }

    #[test]
    fn edge_isolating_open_exists_for_graphs() {
        let graph = parse_theory(
            "t_graph",
            "sort V\n\
             rel E : V x V\n\
             axiom x:V | E(x, x) |- false\n\
             axiom x:V y:V | E(x, y) |- E(y, x)\n\
             axiom x:V y:V | x != y & x = y |- false\n\
             axiom x:V y:V | true |- x != y | x = y\n",
        )
        .unwrap();
        let g = build_groupoid(&graph, &AtomUniverse::new(2), &Limits::default()).unwrap();
        let e = parse_formula_in_context(&g.theory.signature, "x:V y:V | E(x, y)").unwrap();
        // Only the edged doubleton (the last of the five models) realizes
        // E at (0,1).
        assert_eq!(model_open(&g, &e, &[0, 1]).unwrap(), point_set(5, [4]));
    }

    #[test]
    fn tracked_formulas_must_be_coherent() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let classical =
            parse_formula_in_context(sig, "x:X | not x = x").unwrap();
        assert!(matches!(
            build_logical_topologies(&g, &[classical]),
            Err(Error::NonCoherent { .. })
        ));
    }
}
