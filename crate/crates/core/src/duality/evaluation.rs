//! The unit of the duality: evaluation of a topological groupoid in the
//! models of its own formal-sheaf catalog.
//!
//! Every base object `x` evaluates the catalog — it reads off the fiber of
//! each formal sheaf over `x` — and every base arrow evaluates to the
//! family of fiber bijections the sheaf actions assign it. Distinct
//! evaluations become the objects and arrows of the evaluation groupoid,
//! which is the subgroupoid of models of the catalog generated by the
//! image of the base; its topology is generated by membership opens (which
//! objects put a given element into a given sheaf's fiber) and transport
//! opens (which arrows move one element to another), the bounded trace of
//! the coherent topology on the full model groupoid of the catalog. The
//! unit morphism sends each object and arrow to its evaluation, and its
//! continuity is exactly the formality of the catalog: membership opens
//! pull back to element domains, transport opens to transport sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism};
use crate::model::Limits;
use crate::sheaf::{Elem, EquivariantSheaf};
use crate::topology::{
    check_topological_groupoid, is_continuous, point_set, FiniteTopology, NamedOpen,
    TopologicalGroupoid,
};

use super::form::FormCategory;

/// One arrow of the evaluation groupoid: a family of fiber bijections, one
/// per catalog sheaf, presented as sorted graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationFamily {
    pub source: usize,
    pub target: usize,
    pub graphs: Vec<Vec<(Elem, Elem)>>,
}

/// The evaluation groupoid: objects are the distinct fiber tables the base
/// objects produce, arrows the distinct bijection families, closed under
/// identity, inverse, and composition.
#[derive(Debug, Clone)]
pub struct EvaluationGroupoid {
    /// `tables[object][sheaf]` = the sorted fiber that evaluation object
    /// assigns to that catalog sheaf.
    pub tables: Vec<Vec<Vec<Elem>>>,
    pub families: Vec<EvaluationFamily>,
    pub topology: TopologicalGroupoid,
}

/// The unit morphism together with its codomain.
#[derive(Debug, Clone)]
pub struct UnitData {
    pub morphism: GroupoidMorphism,
    pub evaluation: EvaluationGroupoid,
}

fn compose_family(
    first: &EvaluationFamily,
    then: &EvaluationFamily,
) -> Result<EvaluationFamily> {
    let graphs = first
        .graphs
        .iter()
        .zip(&then.graphs)
        .map(|(f, g)| {
            f.iter()
                .map(|(a, mid)| {
                    let b = g
                        .iter()
                        .find(|(s, _)| s == mid)
                        .map(|(_, t)| t.clone())
                        .ok_or_else(|| {
                            Error::Invalid(
                                "evaluation families do not compose: middle element missing"
                                    .into(),
                            )
                        })?;
                    Ok((a.clone(), b))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationFamily {
        source: first.source,
        target: then.target,
        graphs,
    })
}

fn invert_family(f: &EvaluationFamily) -> EvaluationFamily {
    let graphs = f
        .graphs
        .iter()
        .map(|g| {
            let mut flipped: Vec<(Elem, Elem)> =
                g.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
            flipped.sort();
            flipped
        })
        .collect();
    EvaluationFamily {
        source: f.target,
        target: f.source,
        graphs,
    }
}

fn identity_family(object: usize, table: &[Vec<Elem>]) -> EvaluationFamily {
    EvaluationFamily {
        source: object,
        target: object,
        graphs: table
            .iter()
            .map(|fiber| fiber.iter().map(|e| (e.clone(), e.clone())).collect())
            .collect(),
    }
}

/// Evaluate the base groupoid in its formal-sheaf catalog and return the
/// unit morphism into the generated evaluation groupoid. Fails when the
/// evaluation is not continuous — which happens exactly when some catalog
/// member is not formal over the base.
pub fn unit_morphism(
    h: &TopologicalGroupoid,
    form: &FormCategory,
    limits: &Limits,
) -> Result<UnitData> {
    if !form.base.same_as(h) {
        return Err(Error::Invalid(
            "the sheaf catalog lives over a different groupoid".into(),
        ));
    }
    // Evaluate objects: the table of fibers each base object produces.
    let mut tables: Vec<Vec<Vec<Elem>>> = Vec::new();
    let mut on_objects = Vec::with_capacity(h.shape.object_count);
    for x in 0..h.shape.object_count {
        let table: Vec<Vec<Elem>> = form
            .sheaves
            .iter()
            .map(|sh| {
                sh.fiber(x)
                    .into_iter()
                    .map(|i| sh.total[i].1.clone())
                    .collect()
            })
            .collect();
        let idx = tables.iter().position(|t| *t == table).unwrap_or_else(|| {
            tables.push(table.clone());
            tables.len() - 1
        });
        on_objects.push(idx);
    }
    // Evaluate arrows: the family of fiber bijections each base arrow
    // produces, then close under identity, inverse, and composition.
    let mut families: Vec<EvaluationFamily> = Vec::new();
    let mut family_index: BTreeMap<(usize, usize, Vec<Vec<(Elem, Elem)>>), usize> =
        BTreeMap::new();
    let add = |families: &mut Vec<EvaluationFamily>,
                   family_index: &mut BTreeMap<(usize, usize, Vec<Vec<(Elem, Elem)>>), usize>,
                   fam: EvaluationFamily| {
        let key = (fam.source, fam.target, fam.graphs.clone());
        *family_index.entry(key).or_insert_with(|| {
            families.push(fam);
            families.len() - 1
        })
    };
    let mut on_arrows = Vec::with_capacity(h.shape.arrow_count());
    for k in 0..h.shape.arrow_count() {
        let graphs: Vec<Vec<(Elem, Elem)>> = form
            .sheaves
            .iter()
            .map(|sh| {
                let mut graph: Vec<(Elem, Elem)> = sh
                    .fiber(h.shape.source[k])
                    .into_iter()
                    .filter_map(|i| {
                        sh.action[k][i].map(|j| (sh.total[i].1.clone(), sh.total[j].1.clone()))
                    })
                    .collect();
                graph.sort();
                graph
            })
            .collect();
        let fam = EvaluationFamily {
            source: on_objects[h.shape.source[k]],
            target: on_objects[h.shape.target[k]],
            graphs,
        };
        on_arrows.push(add(&mut families, &mut family_index, fam));
    }
    for (o, table) in tables.iter().enumerate() {
        add(
            &mut families,
            &mut family_index,
            identity_family(o, table),
        );
    }
    let mut frontier = 0;
    while frontier < families.len() {
        if families.len() as u128 > limits.sheaf_ceiling {
            return Err(Error::ResourceGuard {
                what: "evaluation groupoid closure".into(),
                estimate: families.len() as u128,
                ceiling: limits.sheaf_ceiling,
            });
        }
        let upto = families.len();
        for i in frontier..upto {
            let inv = invert_family(&families[i]);
            add(&mut families, &mut family_index, inv);
        }
        for i in 0..families.len() {
            for j in 0..families.len() {
                if i >= frontier || j >= frontier {
                    if families[i].target == families[j].source {
                        let comp = compose_family(&families[i], &families[j])?;
                        add(&mut families, &mut family_index, comp);
                    }
                }
            }
        }
        frontier = upto;
    }

    // Assemble the groupoid shape from the closed family set.
    let find = |fam: &EvaluationFamily| -> Option<usize> {
        family_index
            .get(&(fam.source, fam.target, fam.graphs.clone()))
            .copied()
    };
    let missing = || Error::Invalid("evaluation groupoid closure left a gap".into());
    let identity: Vec<usize> = tables
        .iter()
        .enumerate()
        .map(|(o, t)| find(&identity_family(o, t)).ok_or_else(missing))
        .collect::<Result<_>>()?;
    let inverse: Vec<usize> = families
        .iter()
        .map(|f| find(&invert_family(f)).ok_or_else(missing))
        .collect::<Result<_>>()?;
    let compose: Vec<Vec<Option<usize>>> = families
        .iter()
        .map(|g| {
            families
                .iter()
                .map(|f| {
                    if f.target == g.source {
                        compose_family(f, g).ok().and_then(|c| find(&c))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    let shape = FiniteGroupoid {
        object_count: tables.len(),
        source: families.iter().map(|f| f.source).collect(),
        target: families.iter().map(|f| f.target).collect(),
        identity,
        inverse,
        compose,
    };
    shape.check_laws()?;

    // The coherent topology, traced on the evaluation groupoid: membership
    // opens on objects, source/target preimages and transport opens on
    // arrows.
    let mut object_subbasis = Vec::new();
    for (i, _) in form.sheaves.iter().enumerate() {
        let elems: std::collections::BTreeSet<Elem> = tables
            .iter()
            .flat_map(|t| t[i].iter().cloned())
            .collect();
        for e in elems {
            object_subbasis.push(NamedOpen {
                name: format!("<sheaf {i} ni {e}>"),
                points: point_set(
                    tables.len(),
                    (0..tables.len()).filter(|&o| tables[o][i].contains(&e)),
                ),
            });
        }
    }
    let object_topology = FiniteTopology::from_subbasis(tables.len(), object_subbasis);
    let mut arrow_subbasis = Vec::new();
    for open in object_topology.subbasis() {
        for (tag, ends) in [("s", &shape.source), ("t", &shape.target)] {
            arrow_subbasis.push(NamedOpen {
                name: format!("{tag}^-1({})", open.name),
                points: point_set(
                    families.len(),
                    (0..families.len()).filter(|&k| open.points.contains(ends[k])),
                ),
            });
        }
    }
    for (i, _) in form.sheaves.iter().enumerate() {
        let pairs: std::collections::BTreeSet<(Elem, Elem)> = families
            .iter()
            .flat_map(|f| f.graphs[i].iter().cloned())
            .collect();
        for (a, b) in pairs {
            arrow_subbasis.push(NamedOpen {
                name: format!("<sheaf {i}: {a} -> {b}>"),
                points: point_set(
                    families.len(),
                    (0..families.len())
                        .filter(|&k| families[k].graphs[i].contains(&(a.clone(), b.clone()))),
                ),
            });
        }
    }
    let arrow_topology = FiniteTopology::from_subbasis(families.len(), arrow_subbasis);
    let topology = TopologicalGroupoid {
        shape,
        objects: object_topology,
        arrows: arrow_topology,
    };
    check_topological_groupoid(&topology)?;

    let morphism = GroupoidMorphism {
        on_objects,
        on_arrows,
    };
    morphism.check(&h.shape, &topology.shape)?;
    is_continuous(&morphism.on_objects, &h.objects, &topology.objects)?;
    is_continuous(&morphism.on_arrows, &h.arrows, &topology.arrows)?;
    Ok(UnitData {
        morphism,
        evaluation: EvaluationGroupoid {
            tables,
            families,
            topology,
        },
    })
}

/// Build the sheaf over the evaluation groupoid with the given fiber per
/// evaluation object and the given action graph per family — the image of
/// a catalog sheaf (or of a definable sheaf) on the other side of the
/// duality. The topology is the forced formal one.
pub fn evaluation_sheaf(
    ev: &EvaluationGroupoid,
    fibers: &[Vec<Elem>],
    graphs: &[Vec<(Elem, Elem)>],
) -> Result<EquivariantSheaf> {
    let object_count = ev.topology.shape.object_count;
    if fibers.len() != object_count || graphs.len() != ev.families.len() {
        return Err(Error::Invalid(
            "evaluation sheaf data does not match the groupoid".into(),
        ));
    }
    let mut total: Vec<(usize, Elem)> = Vec::new();
    for (o, fiber) in fibers.iter().enumerate() {
        let mut sorted = fiber.clone();
        sorted.sort();
        for e in sorted {
            total.push((o, e));
        }
    }
    let index_of = |o: usize, e: &Elem| total.binary_search(&(o, e.clone())).ok();
    let action: Vec<Vec<Option<usize>>> = (0..ev.families.len())
        .map(|k| {
            total
                .iter()
                .map(|(o, e)| {
                    if *o != ev.families[k].source {
                        return Ok(None);
                    }
                    let image = graphs[k]
                        .iter()
                        .find(|(a, _)| a == e)
                        .map(|(_, b)| b)
                        .ok_or_else(|| {
                            Error::Invalid(format!(
                                "family {k} does not cover the fiber over its source"
                            ))
                        })?;
                    index_of(ev.families[k].target, image)
                        .map(Some)
                        .ok_or_else(|| {
                            Error::Invalid(format!(
                                "family {k} maps outside the declared fibers"
                            ))
                        })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let mut subbasis: Vec<NamedOpen> = ev
        .topology
        .objects
        .subbasis()
        .iter()
        .map(|open| NamedOpen {
            name: format!("proj^-1({})", open.name),
            points: point_set(
                total.len(),
                total
                    .iter()
                    .enumerate()
                    .filter(|(_, (o, _))| open.points.contains(*o))
                    .map(|(i, _)| i),
            ),
        })
        .collect();
    let elems: std::collections::BTreeSet<&Elem> = total.iter().map(|(_, e)| e).collect();
    for e in elems {
        subbasis.push(NamedOpen {
            name: format!("<element {e}>"),
            points: point_set(
                total.len(),
                total
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, d))| d == e)
                    .map(|(i, _)| i),
            ),
        });
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);
    let sh = EquivariantSheaf {
        base: ev.topology.clone(),
        total,
        topology,
        action,
        formula: None,
    };
    sh.check()?;
    Ok(sh)
}
