//! The bridge between formulas and sheaves, in both directions. A coherent
//! formula-in-context yields an equivariant sheaf — its total space with the
//! logical topology and the tautological isomorphism action. Conversely,
//! every stable open of such a sheaf decomposes into formulas again via
//! stabilized pinned diagrams, and every abstract equivariant sheaf over the
//! model groupoid is covered by morphisms out of definable ones.

use crate::error::{Error, Result};
use crate::logic::{
    print_formula_in_context, Formula, FormulaInContext, Signature, Term,
};
use crate::model::{tuple_in_definable, Atom, Limits, ModelGroupoid};
use crate::sheaf::equivariant::{Elem, EquivariantSheaf, SheafMorphism};
use crate::topology::{
    model_topological_groupoid, pinned_diagram, positive_diagram, point_set, total_space,
    total_topology, LogicalTopologies, PointSet,
};

/// The sheaf of a coherent formula-in-context: total space = all realizing
/// tuples across all models, topology = the logical one (carried over from
/// the tracked construction), action = apply the isomorphism to the tuple.
///
/// Coherence is required regardless of the ambient theory's fragment:
/// the logical topology's minimal neighbourhoods are extension sets, and
/// only coherent formulas are preserved under extension, so a classical
/// formula would not define a sheaf over this topology.
pub fn definable_sheaf(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    f: &FormulaInContext,
) -> Result<EquivariantSheaf> {
    let sig = &g.theory.signature;
    f.validate(sig)?;
    if let Some(connective) = f.body.first_classical_connective() {
        return Err(Error::NonCoherent {
            formula: print_formula_in_context(sig, f),
            connective: connective.into(),
        });
    }
    let total = total_space(g, f)?;
    let topology = total_topology(g, &tops.base, f, &total)?;
    let sorts = f.context_sorts();
    let mut action = Vec::with_capacity(g.arrows.len());
    for arrow in &g.arrows {
        let mut row = vec![None; total.len()];
        for (i, (x, tuple)) in total.iter().enumerate() {
            if *x != arrow.source {
                continue;
            }
            let mapped = arrow.map.apply_tuple(&g.models[*x], &sorts, tuple);
            let j = total
                .binary_search_by(|(y, t)| {
                    y.cmp(&arrow.target).then_with(|| t.cmp(&mapped))
                })
                .map_err(|_| {
                    Error::Invalid(format!(
                        "isomorphism image of a definable tuple left the definable set \
                         (arrow into model {}, tuple {:?})",
                        arrow.target, mapped
                    ))
                })?;
            row[i] = Some(j);
        }
        action.push(row);
    }
    Ok(EquivariantSheaf {
        base: model_topological_groupoid(g, tops),
        total: total
            .into_iter()
            .map(|(x, t)| (x, Elem::Tuple(t)))
            .collect(),
        topology,
        action,
        formula: Some(f.clone()),
    })
}

/// The formula whose extension is the orbit closure of the basic open
/// ⟨ψ, b̄⟩ of the sheaf of φ: existentially close ψ's extension variables,
/// remembering of the pinned parameters b̄ exactly what isomorphisms
/// preserve — which same-sort parameters coincide and which differ.
///
/// `psi`'s context must literally extend `phi`'s; `params` pins the
/// extension variables. Same-sort extension variables pinned to the same
/// atom are merged (isomorphisms keep them equal); the remaining same-sort
/// pairs get explicit inequalities (isomorphisms keep them distinct).
/// For ψ = ⊤ with no extension variables the result is φ itself.
pub fn stabilize_formula(
    sig: &Signature,
    phi: &FormulaInContext,
    psi: &FormulaInContext,
    params: &[Atom],
) -> Result<FormulaInContext> {
    phi.validate(sig)?;
    psi.validate(sig)?;
    for (f, name) in [(phi, "base formula"), (psi, "pinned formula")] {
        if let Some(connective) = f.body.first_classical_connective() {
            return Err(Error::NonCoherent {
                formula: format!("{name} {}", print_formula_in_context(sig, f)),
                connective: connective.into(),
            });
        }
    }
    let prefix = phi.context.len();
    if psi.context.len() < prefix || psi.context[..prefix] != phi.context[..] {
        return Err(Error::EnvMismatch(
            "the pinned formula's context must literally extend the base context".into(),
        ));
    }
    let extension = &psi.context[prefix..];
    if params.len() != extension.len() {
        return Err(Error::EnvMismatch(format!(
            "{} extension variables pinned by {} parameters",
            extension.len(),
            params.len()
        )));
    }

    // Merge same-sort variables pinned to the same atom.
    let mut rename = std::collections::BTreeMap::new();
    let mut reduced: Vec<(String, crate::logic::SortId, Atom)> = Vec::new();
    for ((name, sort), &b) in extension.iter().zip(params) {
        match reduced.iter().find(|(_, s, p)| *s == *sort && *p == b) {
            Some((earlier, _, _)) => {
                rename.insert(name.clone(), earlier.clone());
            }
            None => reduced.push((name.clone(), *sort, b)),
        }
    }
    let psi_body = if rename.is_empty() {
        psi.body.clone()
    } else {
        psi.body.rename_free(&rename)
    };

    let mut parts = Vec::new();
    if phi.body != Formula::True {
        parts.push(phi.body.clone());
    }
    if psi_body != Formula::True {
        parts.push(psi_body);
    }
    for j in 1..reduced.len() {
        for i in 0..j {
            if reduced[i].1 == reduced[j].1 {
                parts.push(Formula::Neq(
                    Term::Var(reduced[i].0.clone()),
                    Term::Var(reduced[j].0.clone()),
                ));
            }
        }
    }
    let vars: Vec<(String, crate::logic::SortId)> =
        reduced.iter().map(|(n, s, _)| (n.clone(), *s)).collect();
    let body = Formula::conjoin(parts).exists_close(&vars);
    Ok(FormulaInContext::new(phi.context.clone(), body))
}

/// Decompose a stable open of a definable sheaf into finitely many
/// formulas in the sheaf's context whose extensions union to exactly the
/// open. Each uncovered point contributes the stabilization of its pinned
/// positive diagram — the orbit closure of its minimal neighbourhood.
///
/// Fails with a witness if the set is not open ([`Error::NotOpen`]) or not
/// closed under the action ([`Error::NotStable`]).
pub fn decompose_stable_open(
    g: &ModelGroupoid,
    sh: &EquivariantSheaf,
    u: &PointSet,
) -> Result<Vec<FormulaInContext>> {
    let Some(phi) = &sh.formula else {
        return Err(Error::Invalid(
            "only sheaves carrying a formula decompose symbolically".into(),
        ));
    };
    for k in 0..sh.base.shape.arrow_count() {
        for i in u.ones() {
            if let Some(j) = sh.action[k][i] {
                if !u.contains(j) {
                    return Err(Error::NotStable { arrow: k, point: i });
                }
            }
        }
    }
    if let Some(point) = sh.topology.open_violation(u) {
        return Err(Error::NotOpen { point });
    }
    if u.count_ones(..) == 0 {
        return Ok(vec![FormulaInContext::new(
            phi.context.clone(),
            Formula::False,
        )]);
    }
    if u.count_ones(..) == sh.total.len() {
        return Ok(vec![phi.clone()]);
    }

    let sig = &g.theory.signature;
    let mut pieces: Vec<FormulaInContext> = Vec::new();
    let mut union = point_set(sh.total.len(), []);
    for i in u.ones() {
        if union.contains(i) {
            continue;
        }
        let (x, elem) = &sh.total[i];
        let Elem::Tuple(anchor) = elem else {
            return Err(Error::Invalid(
                "a formula-carrying sheaf holds a non-tuple element".into(),
            ));
        };
        let (psi, pins) = pinned_diagram(sig, &g.models[*x], &phi.context, anchor);
        let xi = stabilize_formula(sig, phi, &psi, &pins)?;
        let ext = point_set(
            sh.total.len(),
            (0..sh.total.len()).filter(|&p| {
                let (y, e) = &sh.total[p];
                match e {
                    Elem::Tuple(t) => tuple_in_definable(&g.models[*y], &xi, t),
                    _ => false,
                }
            }),
        );
        if !ext.contains(i) || !ext.is_subset(u) {
            return Err(Error::Invalid(format!(
                "stabilized piece at point {i} escapes the open it should refine"
            )));
        }
        union.union_with(&ext);
        pieces.push(xi.canonicalize());
    }
    if union != *u {
        return Err(Error::Invalid(
            "stabilized pieces do not reassemble the open".into(),
        ));
    }
    Ok(pieces)
}

/// Cover an arbitrary equivariant sheaf over the model groupoid by
/// morphisms out of definable sheaves, one per orbit of generating
/// sections: each yet-uncovered total point `r` over a model `M` yields
/// the sheaf of "an injective enumeration of a copy of M" and the morphism
/// sending each enumeration to the transport of `r` along any isomorphism
/// realizing it. Disagreeing or missing transports fail with
/// [`Error::NoGeneratingSection`]; at a renaming-closed bound they cannot
/// occur for a lawful sheaf.
pub fn cover_by_definables(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    sh: &EquivariantSheaf,
    limits: &Limits,
) -> Result<Vec<SheafMorphism>> {
    sh.check()?;
    if sh.formula.is_some() {
        return Ok(vec![SheafMorphism::identity(sh)]);
    }
    let sig = &g.theory.signature;
    let mut covered = point_set(sh.total.len(), []);
    let mut covers = Vec::new();
    while let Some(r) = (0..sh.total.len()).find(|&i| !covered.contains(i)) {
        let x = sh.total[r].0;
        let (delta, listing) = positive_diagram(sig, &g.models[x]);
        let listing_sorts = delta.context_sorts();

        // Free the diagram: injectively enumerate a copy of the model.
        let mut parts = vec![delta.body.clone()];
        for j in 1..delta.context.len() {
            for i in 0..j {
                if delta.context[i].1 == delta.context[j].1 {
                    parts.push(Formula::Neq(
                        Term::Var(delta.context[i].0.clone()),
                        Term::Var(delta.context[j].0.clone()),
                    ));
                }
            }
        }
        // Canonicalize away the reserved `#d` names: the diagram formula
        // becomes a tracked formula here, and building its sheaf topology
        // pins fresh `#d` variables onto its context.
        let xi = FormulaInContext::new(delta.context.clone(), Formula::conjoin(parts))
            .canonicalize();

        let mut estimate: u128 = 0;
        for n in &g.models {
            let mut per: u128 = 1;
            for (_, s) in &xi.context {
                per = per.saturating_mul(n.carrier(*s).len() as u128);
            }
            estimate = estimate.saturating_add(per);
        }
        if estimate > limits.enumeration_ceiling {
            return Err(Error::ResourceGuard {
                what: "generating-section diagram enumeration".into(),
                estimate,
                ceiling: limits.enumeration_ceiling,
            });
        }
        let dom = definable_sheaf(g, tops, &xi)?;

        // The canonical section through r: the unique point of min(r) over
        // each extension of M (the étale projection is injective there).
        let mut section: Vec<Option<usize>> = vec![None; g.models.len()];
        for p in sh.topology.min_neighborhood(r).ones() {
            section[sh.total[p].0] = Some(p);
        }

        let mut map = Vec::with_capacity(dom.total.len());
        for (n_idx, elem) in &dom.total {
            let Elem::Tuple(cbar) = elem else {
                unreachable!("definable sheaves hold tuples")
            };
            let mut value: Option<usize> = None;
            for (k, arrow) in g.arrows.iter().enumerate() {
                if arrow.target != *n_idx {
                    continue;
                }
                let Some(sec_pt) = section[arrow.source] else {
                    continue;
                };
                let moved =
                    arrow
                        .map
                        .apply_tuple(&g.models[arrow.source], &listing_sorts, &listing);
                if moved != *cbar {
                    continue;
                }
                let w = sh.action[k][sec_pt]
                    .expect("the section point lies over the arrow's source");
                match value {
                    Some(prev) if prev != w => {
                        return Err(Error::NoGeneratingSection { point: r });
                    }
                    _ => value = Some(w),
                }
            }
            let Some(w) = value else {
                return Err(Error::NoGeneratingSection { point: r });
            };
            map.push(w);
        }

        let morphism = SheafMorphism::new(dom, sh.clone(), map)?;
        for &w in &morphism.map {
            covered.insert(w);
        }
        covers.push(morphism);
    }
    Ok(covers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula_in_context, parse_theory};
    use crate::model::{build_groupoid, AtomUniverse};
    use crate::sheaf::equivariant::stabilize;
    use crate::topology::{build_logical_topologies, sheaf_open};

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

    fn graph_groupoid() -> ModelGroupoid {
        let t = parse_theory(
            "t_graph",
            "sort V\n\
             rel E : V x V\n\
             axiom x:V | E(x, x) |- false\n\
             axiom x:V y:V | E(x, y) |- E(y, x)\n\
             axiom x:V y:V | x != y & x = y |- false\n\
             axiom x:V y:V | true |- x != y | x = y\n",
        )
        .unwrap();
        build_groupoid(&t, &AtomUniverse::new(2), &Limits::default()).unwrap()
    }

    #[test]
    fn the_tautological_sheaf_matches_the_frozen_tables() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &top).unwrap();
        sh.check().unwrap();
        assert_eq!(
            sh.total,
            vec![
                (1, Elem::Tuple(vec![0])),
                (2, Elem::Tuple(vec![1])),
                (3, Elem::Tuple(vec![0])),
                (3, Elem::Tuple(vec![1])),
            ]
        );
        assert_eq!(sh.fiber(3), vec![2, 3]);
        assert!(sh.topology.same_topology(&tops.totals[0].topology));
        // Arrow 6 is the swap of the doubleton; it exchanges the two
        // points over model 3 and acts nowhere else.
        assert_eq!(sh.action[6][2], Some(3));
        assert_eq!(sh.action[6][3], Some(2));
        assert_eq!(sh.action[6][0], None);
    }

    #[test]
    fn the_empty_sheaf_is_lawful() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        let sh = definable_sheaf(&g, &tops, &bot).unwrap();
        sh.check().unwrap();
        assert!(sh.total.is_empty());
    }

    #[test]
    fn neighbor_sheaf_of_graphs_lives_over_the_edged_model() {
        let g = graph_groupoid();
        let sig = &g.theory.signature;
        let f = parse_formula_in_context(sig, "x:V | exists y:V. E(x, y)").unwrap();
        let tops = build_logical_topologies(&g, &[f.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &f).unwrap();
        sh.check().unwrap();
        // Only the edged doubleton (model 4 of 5) has vertices with a
        // neighbor, and both of its vertices qualify.
        assert_eq!(
            sh.total,
            vec![(4, Elem::Tuple(vec![0])), (4, Elem::Tuple(vec![1]))]
        );
    }

    #[test]
    fn classical_formulas_are_rejected() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let top = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[top]).unwrap();
        let classical = parse_formula_in_context(sig, "x:X | not x = x").unwrap();
        assert!(matches!(
            definable_sheaf(&g, &tops, &classical),
            Err(Error::NonCoherent { .. })
        ));
    }

    #[test]
    fn stabilized_formulas_agree_with_orbit_closures_of_basic_opens() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();
        let raw_total = total_space(&g, &phi).unwrap();

        // Every pinned formula and parameter choice: symbolic
        // stabilization = pointwise orbit closure of the basic open.
        let pinned = [
            ("x:X y:X | x != y", vec![0]),
            ("x:X y:X | x != y", vec![1]),
            ("x:X y:X | x = y", vec![0]),
            ("x:X y:X z:X | true", vec![0, 0]),
            ("x:X y:X z:X | true", vec![0, 1]),
        ];
        for (text, params) in pinned {
            let psi = parse_formula_in_context(sig, text).unwrap();
            let basic = sheaf_open(&g, &phi, &raw_total, &psi, &params).unwrap();
            let closed = stabilize(&sh, &basic);
            let xi = stabilize_formula(sig, &phi, &psi, &params).unwrap();
            let symbolic = point_set(
                sh.total.len(),
                raw_total
                    .iter()
                    .enumerate()
                    .filter(|(_, (y, t))| tuple_in_definable(&g.models[*y], &xi, t))
                    .map(|(p, _)| p),
            );
            assert_eq!(
                symbolic, closed,
                "symbolic and pointwise stabilization disagree for ψ = {text} at {params:?}"
            );
        }
    }

    #[test]
    fn stabilizing_the_trivial_pin_returns_the_base_formula() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | exists y:X. x != y").unwrap();
        let trivial = parse_formula_in_context(sig, "x:X | true").unwrap();
        let psi = FormulaInContext::new(phi.context.clone(), trivial.body);
        let xi = stabilize_formula(sig, &phi, &psi, &[]).unwrap();
        assert_eq!(xi, phi);
    }

    #[test]
    fn equal_pins_merge_and_distinct_pins_separate() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let psi = parse_formula_in_context(sig, "x:X y:X z:X | true").unwrap();

        // Both extension variables pinned to the same atom: one witness.
        let merged = stabilize_formula(sig, &phi, &psi, &[0, 0]).unwrap();
        // Pinned to distinct atoms: two witnesses forced apart.
        let split = stabilize_formula(sig, &phi, &psi, &[0, 1]).unwrap();
        let m = &g.models[3]; // the doubleton {0, 1}
        assert!(tuple_in_definable(m, &merged, &[0]));
        assert!(tuple_in_definable(m, &split, &[0]));
        let singleton = &g.models[1]; // {0}
        assert!(tuple_in_definable(singleton, &merged, &[0]));
        assert!(
            !tuple_in_definable(singleton, &split, &[0]),
            "a singleton cannot hold two forced-distinct witnesses"
        );
    }

    #[test]
    fn context_mismatches_are_reported() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let renamed = parse_formula_in_context(sig, "w:X y:X | true").unwrap();
        assert!(matches!(
            stabilize_formula(sig, &phi, &renamed, &[0]),
            Err(Error::EnvMismatch(_))
        ));
        let psi = parse_formula_in_context(sig, "x:X y:X | true").unwrap();
        assert!(matches!(
            stabilize_formula(sig, &phi, &psi, &[0, 1]),
            Err(Error::EnvMismatch(_))
        ));
    }

    #[test]
    fn decomposition_returns_the_whole_and_empty_cases_directly() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();

        let whole = crate::topology::full_set(4);
        assert_eq!(decompose_stable_open(&g, &sh, &whole).unwrap(), vec![phi.clone()]);

        let empty = point_set(4, []);
        let bottom = decompose_stable_open(&g, &sh, &empty).unwrap();
        assert_eq!(bottom.len(), 1);
        assert_eq!(bottom[0].body, Formula::False);
        assert_eq!(bottom[0].context, phi.context);
    }

    #[test]
    fn decomposition_recovers_a_nontrivial_orbit_as_one_formula() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();

        // The two points over the doubleton form a stable open.
        let u = point_set(4, [2, 3]);
        let pieces = decompose_stable_open(&g, &sh, &u).unwrap();
        assert_eq!(pieces.len(), 1);
        // The piece is semantically ∃y. x ≠ y.
        let expected = parse_formula_in_context(sig, "x:X | exists y:X. x != y").unwrap();
        for (mi, m) in g.models.iter().enumerate() {
            for &a in m.carrier(crate::logic::SortId(0)) {
                assert_eq!(
                    tuple_in_definable(m, &pieces[0], &[a]),
                    tuple_in_definable(m, &expected, &[a]),
                    "piece disagrees with ∃y. x ≠ y at model {mi}, atom {a}"
                );
            }
        }
    }

    #[test]
    fn decomposition_rejects_unstable_and_non_open_sets() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();

        // {({0,1}, 0)} alone: open (it is a minimal neighbourhood) but the
        // swap moves it.
        assert!(matches!(
            decompose_stable_open(&g, &sh, &point_set(4, [2])),
            Err(Error::NotStable { arrow: 6, point: 2 })
        ));
        // The orbit {({0},0), ({1},1)} is stable but not open: the minimal
        // neighbourhood of ({0},0) reaches over the doubleton.
        assert!(matches!(
            decompose_stable_open(&g, &sh, &point_set(4, [0, 1])),
            Err(Error::NotOpen { point: 0 })
        ));
    }

    #[test]
    fn definable_sheaves_cover_themselves_identically() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();
        let covers = cover_by_definables(&g, &tops, &sh, &Limits::default()).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn an_abstract_sheaf_is_covered_by_diagram_sheaves() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi.clone()]).unwrap();
        // Forget the formula: the cover must be rediscovered from scratch.
        let mut sh = definable_sheaf(&g, &tops, &phi).unwrap();
        sh.formula = None;
        let covers = cover_by_definables(&g, &tops, &sh, &Limits::default()).unwrap();
        assert!(!covers.is_empty());
        // Every point is hit by some cover morphism.
        let mut hit = vec![false; sh.total.len()];
        for c in &covers {
            c.source.check().unwrap();
            assert!(c.source.formula.is_some());
            for &w in &c.map {
                hit[w] = true;
            }
        }
        assert!(hit.iter().all(|&b| b));
    }

    #[test]
    fn the_empty_abstract_sheaf_needs_no_covers() {
        let g = eq_groupoid();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        let tops = build_logical_topologies(&g, &[phi]).unwrap();
        let mut sh = definable_sheaf(&g, &tops, &bot).unwrap();
        sh.formula = None;
        let covers = cover_by_definables(&g, &tops, &sh, &Limits::default()).unwrap();
        assert!(covers.is_empty());
    }
}
