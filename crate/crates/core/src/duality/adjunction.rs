//! The counit and the triangle identities — the laws that make the model
//! and sheaf functors an adjunction at a finite bound — plus the adequacy
//! probe that decides whether the bound is large enough to trust.
//!
//! The counit evaluates the syntactic category in definable sheaves: each
//! formula goes to its sheaf, each hom-set is computed semantically, and
//! this module verifies that the assignment is a functor (identities and
//! composites of graphs match the table composites), faithful (distinct
//! maps have distinct graphs), and product-preserving (the sheaf of a
//! concatenated context is the product of the sheaves). The triangle
//! identities are checked on both sides: evaluating a model in the sheaves
//! of the generator formulas reconstructs the model and its isomorphisms
//! exactly, and pulling every catalog sheaf back along the unit recovers it
//! on the nose.
//!
//! Everything here is conditional on adequacy: the probe compares the
//! semantic equality classes and hom-set sizes of a probe set of formulas
//! at the working bound and one above. When they differ, bounded semantic
//! equality does not present the syntactic category, and the counit
//! refuses to run rather than report lies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::{
    print_formula_in_context, Formula, FormulaInContext, RelId, SortId, Term, Theory,
};
use crate::model::{
    build_groupoid, definable_set, tuple_in_definable, Atom, AtomUniverse, Limits, ModelGroupoid,
};
use crate::sheaf::{
    definable_sheaf, product_sheaf, pullback_sheaf, Elem, EquivariantSheaf, SheafMorphism,
};
use crate::topology::{
    build_logical_topologies, is_open_map, model_topological_groupoid, LogicalTopologies,
    TopologicalGroupoid,
};

use super::evaluation::{evaluation_sheaf, unit_morphism, UnitData};
use super::form::{form_category, FormCategory};
use super::syntactic::{
    compose_arrows, hom_search, identity_arrow, is_functional_relation, objects_equal,
    product_object, SyntacticArrow, SyntacticObject,
};

/// One object of the verified counit image: a formula and its sheaf.
#[derive(Debug, Clone)]
pub struct CounitObject {
    pub formula: FormulaInContext,
    pub sheaf: EquivariantSheaf,
}

/// One verified hom-set of the counit image: the syntactic arrows from
/// object `source` to object `target` and the total-space maps they
/// correspond to, in matching order.
#[derive(Debug, Clone)]
pub struct CounitHoms {
    pub source: usize,
    pub target: usize,
    pub arrows: Vec<SyntacticArrow>,
    pub maps: Vec<Vec<usize>>,
}

/// The counit evaluated on a finite set of formulas, with every functor
/// law verified.
#[derive(Debug, Clone)]
pub struct CounitData {
    pub objects: Vec<CounitObject>,
    pub homs: Vec<CounitHoms>,
}

impl CounitData {
    /// The verified hom-set from object `i` to object `j`.
    pub fn hom(&self, i: usize, j: usize) -> &CounitHoms {
        &self.homs[i * self.objects.len() + j]
    }
}

/// Evaluate and verify the counit on the tracked formulas: sheaves for
/// objects, semantically computed hom-sets for arrows, and the full battery
/// of functor laws — functionality of every graph, graph/map round trips,
/// identities, composition, faithfulness, and preservation of the binary
/// products given by context concatenation. Runs the adequacy probe first
/// and refuses an unstable bound.
pub fn counit_eval(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    tracked: &[FormulaInContext],
    limits: &Limits,
) -> Result<CounitData> {
    let probe = adequacy_probe(&g.theory, tracked, g.universe.size as usize, limits)?;
    if !probe.stable {
        return Err(Error::AdequacyUnstable {
            lower: probe.lower,
            upper: probe.upper,
            detail: probe.details.join("; "),
        });
    }
    let mut objects: Vec<CounitObject> = Vec::new();
    for t in tracked {
        let formula = SyntacticObject::new(t).formula;
        if objects.iter().any(|o| o.formula == formula) {
            continue;
        }
        let sheaf = definable_sheaf(g, tops, &formula)?;
        objects.push(CounitObject { formula, sheaf });
    }
    let n = objects.len();
    let mut homs = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let search = hom_search(
                g,
                tops,
                &objects[i].formula,
                &objects[j].formula,
                limits,
            )?;
            verify_hom_entry(g, &objects[i], &objects[j], &search.arrows, &search.maps)?;
            homs.push(CounitHoms {
                source: i,
                target: j,
                arrows: search.arrows,
                maps: search.maps,
            });
        }
    }
    let data = CounitData { objects, homs };
    verify_identities(g, &data)?;
    verify_composition(g, &data)?;
    verify_products(g, tops, &data)?;
    Ok(data)
}

/// Per-hom-set laws: every graph is a functional relation, reproduces its
/// map pointwise, and no two maps share a graph.
fn verify_hom_entry(
    g: &ModelGroupoid,
    source: &CounitObject,
    target: &CounitObject,
    arrows: &[SyntacticArrow],
    maps: &[Vec<usize>],
) -> Result<()> {
    let sig = &g.theory.signature;
    for (mi, (arrow, map)) in arrows.iter().zip(maps).enumerate() {
        if let Some(witness) =
            is_functional_relation(g, &arrow.graph, &source.formula, &target.formula)?
        {
            return Err(Error::BadFunctor(format!(
                "graph of arrow {mi} from [{}] to [{}] breaks {} in model {}",
                print_formula_in_context(sig, &source.formula),
                print_formula_in_context(sig, &target.formula),
                witness.law,
                witness.model
            )));
        }
        for (p, (x, e)) in source.sheaf.total.iter().enumerate() {
            let Elem::Tuple(a_tuple) = e else {
                return Err(Error::Invalid(
                    "definable sheaf elements must be tuples".into(),
                ));
            };
            let model = &g.models[*x];
            let matches: Vec<usize> = target
                .sheaf
                .fiber(*x)
                .into_iter()
                .filter(|&q| {
                    let Elem::Tuple(b_tuple) = &target.sheaf.total[q].1 else {
                        return false;
                    };
                    let mut env = a_tuple.clone();
                    env.extend(b_tuple);
                    tuple_in_definable(model, &arrow.graph, &env)
                })
                .collect();
            if matches != vec![map[p]] {
                return Err(Error::BadFunctor(format!(
                    "graph of arrow {mi} does not reproduce its map at total point {p}"
                )));
            }
        }
    }
    for i in 0..arrows.len() {
        for j in i + 1..arrows.len() {
            if objects_equal(g, &arrows[i].graph, &arrows[j].graph)? {
                return Err(Error::BadFunctor(format!(
                    "arrows {i} and {j} of one hom-set share a graph: evaluation is not faithful"
                )));
            }
        }
    }
    Ok(())
}

/// Identity law: each endo hom-set contains the identity map, and its
/// graph is the diagonal.
fn verify_identities(g: &ModelGroupoid, data: &CounitData) -> Result<()> {
    for (i, object) in data.objects.iter().enumerate() {
        let entry = data.hom(i, i);
        let table: Vec<usize> = (0..object.sheaf.total.len()).collect();
        let Some(pos) = entry.maps.iter().position(|m| *m == table) else {
            return Err(Error::BadFunctor(format!(
                "hom-set of object {i} is missing the identity map"
            )));
        };
        let id = identity_arrow(&object.formula);
        if !objects_equal(g, &entry.arrows[pos].graph, &id.graph)? {
            return Err(Error::BadFunctor(format!(
                "identity map of object {i} decomposes to a non-diagonal graph"
            )));
        }
    }
    Ok(())
}

/// Composition law: table composites land in the hom-set, and the
/// relational composite of the graphs is the graph of the composite.
fn verify_composition(g: &ModelGroupoid, data: &CounitData) -> Result<()> {
    let n = data.objects.len();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let fs = data.hom(i, j);
                let gs = data.hom(j, k);
                let target = data.hom(i, k);
                for (fi, f) in fs.maps.iter().enumerate() {
                    for (gi, gmap) in gs.maps.iter().enumerate() {
                        let composite: Vec<usize> = f.iter().map(|&p| gmap[p]).collect();
                        let Some(pos) = target.maps.iter().position(|m| *m == composite) else {
                            return Err(Error::BadFunctor(format!(
                                "composite of maps {fi}: {i}->{j} and {gi}: {j}->{k} escapes the hom-set"
                            )));
                        };
                        let expected =
                            compose_arrows(&fs.arrows[fi], &gs.arrows[gi])?;
                        if !objects_equal(g, &target.arrows[pos].graph, &expected.graph)? {
                            return Err(Error::BadFunctor(format!(
                                "graphs do not compose relationally for maps {fi}: {i}->{j} and {gi}: {j}->{k}"
                            )));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Product preservation: the sheaf of a concatenated context is isomorphic
/// to the product of the sheaves, by the evident pairing, as sheaves.
fn verify_products(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    data: &CounitData,
) -> Result<()> {
    for (i, a) in data.objects.iter().enumerate() {
        for (j, b) in data.objects.iter().enumerate() {
            let gamma = product_object(&a.formula, &b.formula);
            let sg = definable_sheaf(g, tops, &gamma)?;
            let prod = product_sheaf(&a.sheaf, &b.sheaf)?;
            let m = a.formula.context.len();
            let mut seen = vec![false; prod.total.len()];
            let mut map = Vec::with_capacity(sg.total.len());
            for (x, e) in &sg.total {
                let Elem::Tuple(t) = e else {
                    return Err(Error::Invalid(
                        "definable sheaf elements must be tuples".into(),
                    ));
                };
                let (ta, tb) = t.split_at(m);
                let paired = Elem::Pair(
                    Box::new(Elem::Tuple(ta.to_vec())),
                    Box::new(Elem::Tuple(tb.to_vec())),
                );
                let Some(q) = prod.point_index(*x, &paired) else {
                    return Err(Error::BadFunctor(format!(
                        "pairing misses a product point for objects {i} and {j}"
                    )));
                };
                seen[q] = true;
                map.push(q);
            }
            if map.len() != prod.total.len() || seen.iter().any(|s| !s) {
                return Err(Error::BadFunctor(format!(
                    "pairing of objects {i} and {j} is not a bijection"
                )));
            }
            SheafMorphism::new(sg.clone(), prod.clone(), map.clone())?;
            is_open_map(&map, &sg.topology, &prod.topology)?;
        }
    }
    Ok(())
}

/// Which of the two triangle identities a violation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TriangleSide {
    /// Evaluating a model in the counit's sheaves must reconstruct it.
    GroupoidSide,
    /// Pulling a catalog sheaf back along the unit must recover it.
    CategorySide,
}

impl std::fmt::Display for TriangleSide {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriangleSide::GroupoidSide => write!(f, "groupoid side"),
            TriangleSide::CategorySide => write!(f, "category side"),
        }
    }
}

/// One failed comparison, localized to the object, arrow, or sheaf where
/// the two sides of the triangle disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleViolation {
    pub side: TriangleSide,
    pub location: String,
    pub detail: String,
}

/// The outcome of checking both triangle identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleReport {
    pub violations: Vec<TriangleViolation>,
}

impl TriangleReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check both triangle identities of the adjunction over one model
/// groupoid: the groupoid side reconstructs every model and isomorphism
/// from the sheaves of the generator formulas, and the category side pulls
/// every formal sheaf back along the unit and compares it with itself.
pub fn check_triangle_identities(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    tracked: &[FormulaInContext],
    universe: u32,
    fiber_cap: usize,
    limits: &Limits,
) -> Result<TriangleReport> {
    let mut violations = groupoid_side_violations(g, tops, tracked)?;
    let h = model_topological_groupoid(g, tops);
    let form = form_category(&h, universe, fiber_cap, limits)?;
    let unit = unit_morphism(&h, &form, limits)?;
    violations.extend(category_side_violations(
        g, tops, &h, &form, &unit, tracked,
    )?);
    Ok(TriangleReport { violations })
}

/// The generator formulas of a signature: one tautology per sort, one
/// atomic formula per relation, plus the canonicalized tracked formulas.
fn generator_formulas(
    g: &ModelGroupoid,
    tracked: &[FormulaInContext],
) -> Vec<FormulaInContext> {
    let sig = &g.theory.signature;
    let mut gens: Vec<FormulaInContext> = Vec::new();
    for s in sig.sort_ids() {
        gens.push(FormulaInContext::new(
            vec![("x0".into(), s)],
            Formula::True,
        ));
    }
    for (r, decl) in sig.relations().iter().enumerate() {
        let context: Vec<(String, SortId)> = decl
            .args
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("x{i}"), *s))
            .collect();
        let terms = context.iter().map(|(n, _)| Term::Var(n.clone())).collect();
        gens.push(FormulaInContext::new(context, Formula::Rel(RelId(r), terms)));
    }
    for t in tracked {
        let c = t.canonicalize();
        if !gens.contains(&c) {
            gens.push(c);
        }
    }
    gens
}

/// The groupoid-side triangle: evaluating each model in the sheaves of the
/// generator formulas, then reading the evaluation back as a structure,
/// must reproduce the model — carriers from the sort tautologies, relation
/// tables from the atomic formulas, and every isomorphism's components from
/// the sheaf actions.
fn groupoid_side_violations(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    tracked: &[FormulaInContext],
) -> Result<Vec<TriangleViolation>> {
    let sig = &g.theory.signature;
    let gens = generator_formulas(g, tracked);
    let sheaves: Vec<EquivariantSheaf> = gens
        .iter()
        .map(|f| definable_sheaf(g, tops, f))
        .collect::<Result<_>>()?;
    let sort_count = sig.sort_count();
    let rel_count = sig.relations().len();
    let mut violations = Vec::new();

    let tuple_of = |sh: &EquivariantSheaf, p: usize| -> Vec<Atom> {
        match &sh.total[p].1 {
            Elem::Tuple(t) => t.clone(),
            _ => Vec::new(),
        }
    };

    for (x, model) in g.models.iter().enumerate() {
        for (s_idx, s) in sig.sort_ids().enumerate() {
            let fiber: Vec<Atom> = sheaves[s_idx]
                .fiber(x)
                .into_iter()
                .map(|p| tuple_of(&sheaves[s_idx], p)[0])
                .collect();
            if fiber != model.carrier(s) {
                violations.push(TriangleViolation {
                    side: TriangleSide::GroupoidSide,
                    location: format!("model {x}"),
                    detail: format!(
                        "sort {} evaluates to {:?} but the model carries {:?}",
                        sig.sort_name(s),
                        fiber,
                        model.carrier(s)
                    ),
                });
            }
        }
        for r in 0..rel_count {
            let sh = &sheaves[sort_count + r];
            let fiber: BTreeSet<Vec<Atom>> =
                sh.fiber(x).into_iter().map(|p| tuple_of(sh, p)).collect();
            if fiber != model.relations[r] {
                violations.push(TriangleViolation {
                    side: TriangleSide::GroupoidSide,
                    location: format!("model {x}"),
                    detail: format!(
                        "relation {} evaluates to a different table",
                        sig.relations()[r].name
                    ),
                });
            }
        }
        for (g_idx, gen) in gens.iter().enumerate().skip(sort_count + rel_count) {
            let sh = &sheaves[g_idx];
            let fiber: Vec<Vec<Atom>> =
                sh.fiber(x).into_iter().map(|p| tuple_of(sh, p)).collect();
            if fiber != definable_set(sig, model, gen)? {
                violations.push(TriangleViolation {
                    side: TriangleSide::GroupoidSide,
                    location: format!("model {x}"),
                    detail: format!(
                        "formula {} evaluates to a different set",
                        print_formula_in_context(sig, gen)
                    ),
                });
            }
        }
    }

    for (k, arrow) in g.arrows.iter().enumerate() {
        let src_model = &g.models[arrow.source];
        for (g_idx, gen) in gens.iter().enumerate() {
            let sh = &sheaves[g_idx];
            let sorts = gen.context_sorts();
            for p in sh.fiber(arrow.source) {
                let t = tuple_of(sh, p);
                let expected = arrow.map.apply_tuple(src_model, &sorts, &t);
                let moved = sh.action[k][p].map(|q| tuple_of(sh, q));
                if moved.as_deref() != Some(&expected[..]) {
                    violations.push(TriangleViolation {
                        side: TriangleSide::GroupoidSide,
                        location: format!("arrow {k}"),
                        detail: format!(
                            "formula {} transports {:?} to {:?}, the isomorphism sends it to {:?}",
                            print_formula_in_context(sig, gen),
                            t,
                            moved,
                            expected
                        ),
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Compare a pulled-back sheaf with the original, localizing any
/// disagreement to the total space, a single arrow, or the topology.
fn compare_sheaves(
    label: &str,
    back: &EquivariantSheaf,
    expected: &EquivariantSheaf,
) -> Vec<TriangleViolation> {
    let mut violations = Vec::new();
    if back.total != expected.total {
        violations.push(TriangleViolation {
            side: TriangleSide::CategorySide,
            location: label.to_string(),
            detail: "total space differs after the round trip".into(),
        });
        return violations;
    }
    for k in 0..expected.action.len().min(back.action.len()) {
        if back.action[k] != expected.action[k] {
            violations.push(TriangleViolation {
                side: TriangleSide::CategorySide,
                location: format!("{label}, arrow {k}"),
                detail: "action differs after the round trip".into(),
            });
        }
    }
    if !back.topology.same_topology(&expected.topology) {
        violations.push(TriangleViolation {
            side: TriangleSide::CategorySide,
            location: label.to_string(),
            detail: "topology differs after the round trip".into(),
        });
    }
    violations
}

/// The category-side triangle: every catalog sheaf, pushed through the
/// evaluation groupoid and pulled back along the unit, returns to itself;
/// and every tracked definable sheaf makes the same round trip through its
/// evaluation image.
fn category_side_violations(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    h: &TopologicalGroupoid,
    form: &FormCategory,
    unit: &UnitData,
    tracked: &[FormulaInContext],
) -> Result<Vec<TriangleViolation>> {
    let ev = &unit.evaluation;
    let object_count = ev.topology.shape.object_count;
    let mut violations = Vec::new();

    for (i, member) in form.sheaves.iter().enumerate() {
        let label = format!("sheaf {i}");
        let fibers: Vec<Vec<Elem>> = (0..object_count)
            .map(|o| ev.tables[o][i].clone())
            .collect();
        let graphs: Vec<Vec<(Elem, Elem)>> =
            ev.families.iter().map(|f| f.graphs[i].clone()).collect();
        let y = match evaluation_sheaf(ev, &fibers, &graphs) {
            Ok(y) => y,
            Err(e) => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let back = match pullback_sheaf(&unit.morphism, h, &y) {
            Ok(b) => b,
            Err(e) => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: e.to_string(),
                });
                continue;
            }
        };
        violations.extend(compare_sheaves(&label, &back, member));
    }

    let sig = &g.theory.signature;
    'formula: for t in tracked {
        let formula = t.canonicalize();
        let label = format!("formula {}", print_formula_in_context(sig, &formula));
        let a = definable_sheaf(g, tops, &formula)?;
        let mut fibers: Vec<Option<Vec<Elem>>> = vec![None; object_count];
        for x in 0..h.shape.object_count {
            let o = unit.morphism.on_objects[x];
            let elems: Vec<Elem> = a.fiber(x).into_iter().map(|p| a.total[p].1.clone()).collect();
            match &fibers[o] {
                None => fibers[o] = Some(elems),
                Some(prev) if *prev != elems => {
                    violations.push(TriangleViolation {
                        side: TriangleSide::CategorySide,
                        location: label,
                        detail:
                            "the evaluation groupoid does not separate the fibers; raise the fiber cap"
                                .into(),
                    });
                    continue 'formula;
                }
                Some(_) => {}
            }
        }
        let mut graphs: Vec<Option<Vec<(Elem, Elem)>>> = vec![None; ev.families.len()];
        for k in 0..h.shape.arrow_count() {
            let fk = unit.morphism.on_arrows[k];
            let mut graph: Vec<(Elem, Elem)> = a
                .fiber(h.shape.source[k])
                .into_iter()
                .filter_map(|p| {
                    a.action[k][p].map(|q| (a.total[p].1.clone(), a.total[q].1.clone()))
                })
                .collect();
            graph.sort();
            match &graphs[fk] {
                None => graphs[fk] = Some(graph),
                Some(prev) if *prev != graph => {
                    violations.push(TriangleViolation {
                        side: TriangleSide::CategorySide,
                        location: label,
                        detail:
                            "the evaluation groupoid does not separate the transports; raise the fiber cap"
                                .into(),
                    });
                    continue 'formula;
                }
                Some(_) => {}
            }
        }
        let fibers: Vec<Vec<Elem>> = match fibers.into_iter().collect::<Option<_>>() {
            Some(f) => f,
            None => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: "an evaluation object lies outside the unit image".into(),
                });
                continue 'formula;
            }
        };
        let graphs: Vec<Vec<(Elem, Elem)>> = match graphs.into_iter().collect::<Option<_>>() {
            Some(gr) => gr,
            None => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: "an evaluation family lies outside the unit image".into(),
                });
                continue 'formula;
            }
        };
        let y = match evaluation_sheaf(ev, &fibers, &graphs) {
            Ok(y) => y,
            Err(e) => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: e.to_string(),
                });
                continue 'formula;
            }
        };
        let back = match pullback_sheaf(&unit.morphism, h, &y) {
            Ok(b) => b,
            Err(e) => {
                violations.push(TriangleViolation {
                    side: TriangleSide::CategorySide,
                    location: label,
                    detail: e.to_string(),
                });
                continue 'formula;
            }
        };
        violations.extend(compare_sheaves(&label, &back, &a));
    }
    Ok(violations)
}

/// The outcome of the adequacy probe: whether the semantic presentation of
/// the syntactic category is identical at the working bound and one above.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdequacyReport {
    pub lower: usize,
    pub upper: usize,
    pub stable: bool,
    pub details: Vec<String>,
}

/// Probe adequacy of the bound `n`: build the model groupoid at `n` and at
/// `n + 1`, and compare the semantic equality classes and hom-set sizes of
/// the probe set — the tracked formulas plus, for every sort, its
/// tautology and its empty formula. Any difference is reported and marks
/// the bound unstable.
pub fn adequacy_probe(
    theory: &Theory,
    tracked: &[FormulaInContext],
    n: usize,
    limits: &Limits,
) -> Result<AdequacyReport> {
    let sig = &theory.signature;
    let mut probes: Vec<FormulaInContext> = Vec::new();
    for t in tracked {
        t.validate(sig)?;
        let c = t.canonicalize();
        if !probes.contains(&c) {
            probes.push(c);
        }
    }
    for s in sig.sort_ids() {
        for body in [Formula::True, Formula::False] {
            let c = FormulaInContext::new(vec![("x0".into(), s)], body);
            if !probes.contains(&c) {
                probes.push(c);
            }
        }
    }
    let mut snapshots = Vec::new();
    for bound in [n, n + 1] {
        let g = build_groupoid(theory, &AtomUniverse::new(bound as u32), limits)?;
        let tops = build_logical_topologies(&g, &probes)?;
        let mut partition = vec![0usize; probes.len()];
        for i in 0..probes.len() {
            let mut class = i;
            for j in 0..i {
                if partition[j] == j && objects_equal(&g, &probes[j], &probes[i])? {
                    class = j;
                    break;
                }
            }
            partition[i] = class;
        }
        let mut matrix = vec![vec![0usize; probes.len()]; probes.len()];
        for (i, row) in matrix.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = hom_search(&g, &tops, &probes[i], &probes[j], limits)?
                    .maps
                    .len();
            }
        }
        snapshots.push((partition, matrix));
    }
    let mut details = Vec::new();
    let (p0, m0) = &snapshots[0];
    let (p1, m1) = &snapshots[1];
    for i in 0..probes.len() {
        if p0[i] != p1[i] {
            details.push(format!(
                "probe {} changes semantic class between bounds {} and {}",
                print_formula_in_context(sig, &probes[i]),
                n,
                n + 1
            ));
        }
    }
    for i in 0..probes.len() {
        for j in 0..probes.len() {
            if m0[i][j] != m1[i][j] {
                details.push(format!(
                    "hom-set ({i}, {j}) has {} arrows at bound {} and {} at bound {}",
                    m0[i][j],
                    n,
                    m1[i][j],
                    n + 1
                ));
            }
        }
    }
    let stable = details.is_empty();
    Ok(AdequacyReport {
        lower: n,
        upper: n + 1,
        stable,
        details,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula_in_context, parse_theory};

    fn eq_theory() -> Theory {
        parse_theory(
            "t_eq",
            "sort X\naxiom x:X y:X | x != y & x = y |- false\naxiom x:X y:X | true |- x != y | x = y\n",
        )
        .unwrap()
    }

    fn graph_theory() -> Theory {
        parse_theory(
            "t_graph",
            "sort V\n\
             rel E : V x V\n\
             axiom x:V | E(x, x) |- false\n\
             axiom x:V y:V | E(x, y) |- E(y, x)\n\
             axiom x:V y:V | x != y & x = y |- false\n\
             axiom x:V y:V | true |- x != y | x = y\n",
        )
        .unwrap()
    }

    fn setup(
        theory: Theory,
        tracked_texts: &[&str],
    ) -> (ModelGroupoid, LogicalTopologies, Vec<FormulaInContext>) {
        let g = build_groupoid(&theory, &AtomUniverse::new(2), &Limits::default()).unwrap();
        let tracked: Vec<FormulaInContext> = tracked_texts
            .iter()
            .map(|t| parse_formula_in_context(&g.theory.signature, t).unwrap())
            .collect();
        let tops = build_logical_topologies(&g, &tracked).unwrap();
        (g, tops, tracked)
    }

    #[test]
    fn counit_on_the_inequality_theory_passes_every_law() {
        let (g, tops, tracked) = setup(eq_theory(), &["x:X | true", "x:X y:X | x != y"]);
        let data = counit_eval(&g, &tops, &tracked, &Limits::default()).unwrap();
        assert_eq!(data.objects.len(), 2);
        // hom(⊤, ⊤) = {id}; hom(⊤, ≠) = ∅; hom(≠, ⊤) = the two
        // projections; hom(≠, ≠) = {id, swap}.
        assert_eq!(data.hom(0, 0).maps.len(), 1);
        assert_eq!(data.hom(0, 1).maps.len(), 0);
        assert_eq!(data.hom(1, 0).maps.len(), 2);
        assert_eq!(data.hom(1, 1).maps.len(), 2);
    }

    #[test]
    fn unstable_bound_is_refused_with_the_probe_report() {
        let t = parse_theory(
            "t_three",
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n\
             axiom x:X | true |- exists y:X. exists z:X. x != y & x != z & y != z\n",
        )
        .unwrap();
        let g = build_groupoid(&t, &AtomUniverse::new(2), &Limits::default()).unwrap();
        let tracked =
            vec![parse_formula_in_context(&g.theory.signature, "x:X | true").unwrap()];
        let tops = build_logical_topologies(&g, &tracked).unwrap();
        // At bound 2 only the empty model exists, so truth and falsity
        // coincide; at bound 3 they separate.
        let err = counit_eval(&g, &tops, &tracked, &Limits::default()).unwrap_err();
        match err {
            Error::AdequacyUnstable { lower, upper, .. } => {
                assert_eq!((lower, upper), (2, 3));
            }
            other => panic!("expected an adequacy error, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_theory_probes_stable() {
        let t = parse_theory(
            "t_void",
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n\
             axiom x:X | true |- false\n",
        )
        .unwrap();
        let report = adequacy_probe(&t, &[], 2, &Limits::default()).unwrap();
        assert!(report.stable);
        assert_eq!((report.lower, report.upper), (2, 3));
    }

    #[test]
    fn triangles_hold_on_the_inequality_theory() {
        let (g, tops, tracked) = setup(eq_theory(), &["x:X | true"]);
        let report =
            check_triangle_identities(&g, &tops, &tracked, 2, 2, &Limits::default()).unwrap();
        assert!(report.holds(), "violations: {:?}", report.violations);
    }

    #[test]
    fn triangles_hold_on_the_graph_theory() {
        let (g, tops, tracked) = setup(graph_theory(), &["x:V | true", "x:V y:V | E(x, y)"]);
        let report =
            check_triangle_identities(&g, &tops, &tracked, 2, 2, &Limits::default()).unwrap();
        assert!(report.holds(), "violations: {:?}", report.violations);
    }

    #[test]
    fn corrupting_the_unit_breaks_its_continuity() {
        let (g, tops, tracked) = setup(eq_theory(), &["x:X | true"]);
        let h = model_topological_groupoid(&g, &tops);
        let limits = Limits::default();
        let form = form_category(&h, 2, 2, &limits).unwrap();
        let mut unit = unit_morphism(&h, &form, &limits).unwrap();
        // Redirect the swap isomorphism (arrow 6) to the identity family of
        // its object (the image of arrow 5). The arrow's minimal
        // neighbourhood contains its extensions, so the redirected map has a
        // non-open preimage and every round trip reports the discontinuity.
        unit.morphism.on_arrows[6] = unit.morphism.on_arrows[5];
        let violations =
            category_side_violations(&g, &tops, &h, &form, &unit, &[]).unwrap();
        assert!(!violations.is_empty());
        assert!(
            violations.iter().all(|v| v.detail.contains("not continuous")),
            "violations: {violations:?}"
        );
    }

    #[test]
    fn a_divergent_catalog_action_is_localized_to_its_arrow() {
        let (g, tops, tracked) = setup(eq_theory(), &["x:X | true"]);
        let h = model_topological_groupoid(&g, &tops);
        let limits = Limits::default();
        let mut form = form_category(&h, 2, 2, &limits).unwrap();
        let unit = unit_morphism(&h, &form, &limits).unwrap();
        let taut = definable_sheaf(&g, &tops, &tracked[0]).unwrap();
        let member = form.find_equal(&taut).unwrap();
        // Overwrite the member's transport along the swap (arrow 6) with
        // the identity after the honest unit is computed: the round trip
        // disagrees with the catalog exactly at that sheaf and that arrow.
        for p in form.sheaves[member].fiber(3) {
            form.sheaves[member].action[6][p] = Some(p);
        }
        let violations =
            category_side_violations(&g, &tops, &h, &form, &unit, &[]).unwrap();
        assert_eq!(
            violations,
            vec![TriangleViolation {
                side: TriangleSide::CategorySide,
                location: format!("sheaf {member}, arrow 6"),
                detail: "action differs after the round trip".into(),
            }]
        );
    }

    #[test]
    fn corrupting_a_transport_graph_is_caught_at_reconstruction() {
        let (g, tops, tracked) = setup(eq_theory(), &["x:X | true"]);
        let h = model_topological_groupoid(&g, &tops);
        let limits = Limits::default();
        let form = form_category(&h, 2, 2, &limits).unwrap();
        let mut unit = unit_morphism(&h, &form, &limits).unwrap();
        let taut = definable_sheaf(&g, &tops, &tracked[0]).unwrap();
        let member = form.find_equal(&taut).unwrap();
        // Replace the swap family's transport of the tautological member by
        // the identity transport. The family is still a bijection, but the
        // evaluation topology remembers the honest transport, so rebuilding
        // the member's evaluation sheaf fails the continuity axiom.
        let swap_family = unit.morphism.on_arrows[6];
        let tampered: Vec<(Elem, Elem)> = unit.evaluation.families[swap_family].graphs
            [member]
            .iter()
            .map(|(a, _)| (a.clone(), a.clone()))
            .collect();
        unit.evaluation.families[swap_family].graphs[member] = tampered;
        let violations =
            category_side_violations(&g, &tops, &h, &form, &unit, &[]).unwrap();
        assert!(
            violations
                .iter()
                .any(|v| v.location == format!("sheaf {member}")
                    && v.detail.contains("continuous")),
            "violations: {violations:?}"
        );
    }

    #[test]
    fn probe_set_always_contains_the_sort_probes() {
        let report = adequacy_probe(&eq_theory(), &[], 2, &Limits::default()).unwrap();
        assert!(report.stable);
    }
}
