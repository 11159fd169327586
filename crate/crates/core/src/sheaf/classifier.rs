//! The classifier groupoid of small sets and the classifying morphisms
//! into it. The classifier at bound `u` has one object per subset of the
//! atom universe and one arrow per bijection between equinumerous subsets,
//! topologized exactly like a model groupoid (it is the model groupoid of
//! the empty theory on one sort). A sheaf whose fibers are genuinely small
//! sets of atoms — a *formal* sheaf, decided by [`check_formal_conditions`]
//! — induces a continuous functor into the classifier, and pulling the
//! generic object back along that functor recovers the sheaf on the nose.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::groupoid::{FiniteGroupoid, GroupoidMorphism};
use crate::model::{Atom, Limits};
use crate::sheaf::constructions::product_sheaf;
use crate::sheaf::equivariant::{Elem, EquivariantSheaf};
use crate::topology::{
    is_continuous, point_set, FiniteTopology, NamedOpen, TopologicalGroupoid,
};

/// How fibers are read as small sets when checking formality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UniverseMode {
    /// Fibers must be sets of single atoms — the reading under which a
    /// sheaf classifies into the classifier groupoid.
    Atoms,
    /// Fibers may be sets of atom tuples of any width — the reading under
    /// which every definable sheaf is small.
    #[default]
    Tuples,
}

/// One verified formality condition.
#[derive(Debug, Clone)]
pub struct FormalCondition {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// The outcome of checking all formality conditions on a sheaf.
#[derive(Debug, Clone)]
pub struct FormalReport {
    pub conditions: Vec<FormalCondition>,
}

impl FormalReport {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&FormalCondition> {
        self.conditions.iter().find(|c| !c.pass)
    }
}

/// Decide the four conditions making a sheaf *formal* — a sheaf of small
/// decidable sets compatible with the topology:
///
/// 1. fibers are compact (trivial at a finite bound) and have decidable
///    equality: the off-diagonal of the fibrewise square is open and
///    stable;
/// 2. fibers are small — their elements name atoms (or atom tuples,
///    depending on `mode`) below the universe bound;
/// 3. each element's domain of definition is open and its constant section
///    is continuous;
/// 4. each element-to-element transport set is open in the arrow space.
pub fn check_formal_conditions(
    sh: &EquivariantSheaf,
    universe: u32,
    mode: UniverseMode,
) -> FormalReport {
    let mut conditions = Vec::new();

    conditions.push(FormalCondition {
        name: "compact fibers",
        pass: true,
        detail: "trivial at a finite bound: every fiber is a finite discrete set".into(),
    });

    // Decidable equality: the complement of the diagonal in sh ×ₓ sh is
    // open and stable.
    conditions.push(match product_sheaf(sh, sh) {
        Err(e) => FormalCondition {
            name: "decidable equality",
            pass: false,
            detail: format!("could not form the fibrewise square: {e}"),
        },
        Ok(square) => {
            let off_diagonal = point_set(
                square.total.len(),
                square.total.iter().enumerate().filter_map(|(p, (_, e))| {
                    let Elem::Pair(a, b) = e else { return None };
                    (a != b).then_some(p)
                }),
            );
            let mut stable_witness = None;
            'outer: for k in 0..square.base.shape.arrow_count() {
                for i in off_diagonal.ones() {
                    if let Some(j) = square.action[k][i] {
                        if !off_diagonal.contains(j) {
                            stable_witness = Some((k, i));
                            break 'outer;
                        }
                    }
                }
            }
            if let Some((k, i)) = stable_witness {
                FormalCondition {
                    name: "decidable equality",
                    pass: false,
                    detail: format!(
                        "arrow {k} merges the distinct pair at square point {i}"
                    ),
                }
            } else if let Some(point) = square.topology.open_violation(&off_diagonal) {
                FormalCondition {
                    name: "decidable equality",
                    pass: false,
                    detail: format!(
                        "the off-diagonal is not open: square point {point} escapes"
                    ),
                }
            } else {
                FormalCondition {
                    name: "decidable equality",
                    pass: true,
                    detail: "the off-diagonal of the fibrewise square is open and stable"
                        .into(),
                }
            }
        }
    });

    let small_violation = sh.total.iter().enumerate().find_map(|(i, (_, e))| {
        let bad = |msg: String| Some((i, msg));
        match (mode, e) {
            (UniverseMode::Atoms, Elem::Tuple(t)) if t.len() == 1 => (t[0] >= universe)
                .then(|| (i, format!("atom {} exceeds the bound", t[0]))),
            (UniverseMode::Atoms, _) => bad("element is not a single atom".into()),
            (UniverseMode::Tuples, Elem::Tuple(t)) => t
                .iter()
                .find(|&&a| a >= universe)
                .map(|a| (i, format!("atom {a} exceeds the bound"))),
            (UniverseMode::Tuples, _) => bad("element is not an atom tuple".into()),
        }
    });
    conditions.push(match small_violation {
        Some((i, why)) => FormalCondition {
            name: "small fibers",
            pass: false,
            detail: format!("total point {i}: {why}"),
        },
        None => FormalCondition {
            name: "small fibers",
            pass: true,
            detail: format!(
                "every element is a {} below bound {universe}",
                match mode {
                    UniverseMode::Atoms => "single atom",
                    UniverseMode::Tuples => "tuple of atoms",
                }
            ),
        },
    });

    let alphabet: BTreeSet<&Elem> = sh.total.iter().map(|(_, e)| e).collect();

    let mut domain_failure = None;
    for e in &alphabet {
        let domain: Vec<usize> = (0..sh.base.shape.object_count)
            .filter(|&x| sh.point_index(x, e).is_some())
            .collect();
        let domain_set = point_set(sh.base.shape.object_count, domain.iter().copied());
        if let Some(x) = sh.base.objects.open_violation(&domain_set) {
            domain_failure = Some(format!(
                "the domain of element {e} is not open: object {x} escapes"
            ));
            break;
        }
        let section: Vec<usize> = domain
            .iter()
            .map(|&x| sh.point_index(x, e).expect("domain membership"))
            .collect();
        let subspace = sh.base.objects.subspace(&domain);
        if is_continuous(&section, &subspace, &sh.topology).is_err() {
            domain_failure = Some(format!(
                "the constant section of element {e} is not continuous on its domain"
            ));
            break;
        }
    }
    conditions.push(match domain_failure {
        Some(detail) => FormalCondition {
            name: "open element domains",
            pass: false,
            detail,
        },
        None => FormalCondition {
            name: "open element domains",
            pass: true,
            detail: format!(
                "all {} element domains are open with continuous sections",
                alphabet.len()
            ),
        },
    });

    let mut transport_failure = None;
    'pairs: for e in &alphabet {
        for e2 in &alphabet {
            let transport = point_set(
                sh.base.shape.arrow_count(),
                (0..sh.base.shape.arrow_count()).filter(|&k| {
                    sh.point_index(sh.base.shape.source[k], e)
                        .and_then(|i| sh.action[k][i])
                        .map(|j| sh.total[j].1 == **e2)
                        .unwrap_or(false)
                }),
            );
            if let Some(k) = sh.base.arrows.open_violation(&transport) {
                transport_failure = Some(format!(
                    "the transport set of {e} to {e2} is not open: arrow {k} escapes"
                ));
                break 'pairs;
            }
        }
    }
    conditions.push(match transport_failure {
        Some(detail) => FormalCondition {
            name: "open transport sets",
            pass: false,
            detail,
        },
        None => FormalCondition {
            name: "open transport sets",
            pass: true,
            detail: format!(
                "all {} transport sets are open in the arrow space",
                alphabet.len() * alphabet.len()
            ),
        },
    });

    FormalReport { conditions }
}

/// One arrow of the classifier groupoid: a bijection between two subsets
/// of the atom universe, stored as its graph sorted by source atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifierArrow {
    pub source: usize,
    pub target: usize,
    pub map: Vec<(Atom, Atom)>,
}

/// The classifier groupoid of small sets at a universe bound: objects are
/// the subsets of the atom universe (as bitmasks, ascending), arrows the
/// bijections between equinumerous subsets, with the same extension-set
/// topology a model groupoid carries.
#[derive(Debug, Clone)]
pub struct ClassifierGroupoid {
    pub universe: u32,
    pub objects: Vec<u64>,
    pub arrows: Vec<ClassifierArrow>,
    pub topology: TopologicalGroupoid,
}

impl ClassifierGroupoid {
    /// Index of the object with exactly the given atoms.
    pub fn object_of_mask(&self, mask: u64) -> Option<usize> {
        self.objects.binary_search(&mask).ok()
    }

    /// Index of the arrow with the given endpoints and graph.
    pub fn arrow_of_graph(
        &self,
        source: usize,
        target: usize,
        map: &[(Atom, Atom)],
    ) -> Option<usize> {
        self.arrows
            .iter()
            .position(|a| a.source == source && a.target == target && a.map == map)
    }
}

fn mask_atoms(mask: u64) -> Vec<Atom> {
    (0..64).filter(|&a| mask & (1 << a) != 0).collect()
}

/// Build the classifier groupoid of small sets at the given bound.
pub fn classifier_groupoid(universe: u32, limits: &Limits) -> Result<ClassifierGroupoid> {
    let object_count = 1u128 << universe;
    let mut arrow_estimate: u128 = 0;
    for k in 0..=universe as u128 {
        let choose = (0..k).fold(1u128, |acc, i| {
            acc.saturating_mul(universe as u128 - i) / (i + 1)
        });
        let factorial = (1..=k).fold(1u128, |acc, i| acc.saturating_mul(i));
        arrow_estimate = arrow_estimate
            .saturating_add(choose.saturating_mul(choose).saturating_mul(factorial));
    }
    if object_count.saturating_add(arrow_estimate.saturating_mul(arrow_estimate))
        > limits.enumeration_ceiling
    {
        return Err(Error::ResourceGuard {
            what: "classifier groupoid construction".into(),
            estimate: object_count + arrow_estimate * arrow_estimate,
            ceiling: limits.enumeration_ceiling,
        });
    }

    let objects: Vec<u64> = (0..1u64 << universe).collect();
    let mut arrows = Vec::new();
    for (i, &src) in objects.iter().enumerate() {
        for (j, &tgt) in objects.iter().enumerate() {
            if src.count_ones() != tgt.count_ones() {
                continue;
            }
            let src_atoms = mask_atoms(src);
            let tgt_atoms = mask_atoms(tgt);
            for image in tgt_atoms.iter().permutations(tgt_atoms.len()) {
                arrows.push(ClassifierArrow {
                    source: i,
                    target: j,
                    map: src_atoms.iter().zip(image).map(|(&a, &b)| (a, b)).collect(),
                });
            }
        }
    }

    let index: BTreeMap<(usize, usize, Vec<(Atom, Atom)>), usize> = arrows
        .iter()
        .enumerate()
        .map(|(k, a)| ((a.source, a.target, a.map.clone()), k))
        .collect();
    let identity: Vec<usize> = objects
        .iter()
        .enumerate()
        .map(|(i, &mask)| {
            let graph: Vec<(Atom, Atom)> = mask_atoms(mask).iter().map(|&a| (a, a)).collect();
            index[&(i, i, graph)]
        })
        .collect();
    let inverse: Vec<usize> = arrows
        .iter()
        .map(|a| {
            let mut graph: Vec<(Atom, Atom)> = a.map.iter().map(|&(x, y)| (y, x)).collect();
            graph.sort();
            index[&(a.target, a.source, graph)]
        })
        .collect();
    let compose: Vec<Vec<Option<usize>>> = arrows
        .iter()
        .map(|g| {
            arrows
                .iter()
                .map(|f| {
                    if f.target != g.source {
                        return None;
                    }
                    let graph: Vec<(Atom, Atom)> = f
                        .map
                        .iter()
                        .map(|&(a, b)| {
                            let (_, c) = g.map.iter().find(|&&(x, _)| x == b).expect(
                                "the graph of a composable bijection covers the middle set",
                            );
                            (a, *c)
                        })
                        .collect();
                    Some(index[&(f.source, g.target, graph)])
                })
                .collect()
        })
        .collect();
    let shape = FiniteGroupoid {
        object_count: objects.len(),
        source: arrows.iter().map(|a| a.source).collect(),
        target: arrows.iter().map(|a| a.target).collect(),
        identity,
        inverse,
        compose,
    };

    // The extension-set topology, exactly as on a model groupoid: object
    // opens are "contains these atoms", arrow opens are endpoint
    // constraints plus atom transports.
    let object_subbasis: Vec<NamedOpen> = objects
        .iter()
        .map(|&mask| NamedOpen {
            name: format!("<contains ({})>", fmt_atoms(&mask_atoms(mask))),
            points: point_set(
                objects.len(),
                objects
                    .iter()
                    .enumerate()
                    .filter_map(|(p, &other)| (other & mask == mask).then_some(p)),
            ),
        })
        .collect();
    let object_space = FiniteTopology::from_subbasis(objects.len(), object_subbasis.clone());

    let mut arrow_subbasis = Vec::new();
    for open in &object_subbasis {
        for (tag, endpoint) in [("s", &shape.source), ("t", &shape.target)] {
            arrow_subbasis.push(NamedOpen {
                name: format!("{tag}^-1({})", open.name),
                points: point_set(
                    arrows.len(),
                    (0..arrows.len()).filter(|&k| open.points.contains(endpoint[k])),
                ),
            });
        }
    }
    for a in 0..universe as Atom {
        for b in 0..universe as Atom {
            arrow_subbasis.push(NamedOpen {
                name: format!("<{a} -> {b}>"),
                points: point_set(
                    arrows.len(),
                    (0..arrows.len()).filter(|&k| arrows[k].map.contains(&(a, b))),
                ),
            });
        }
    }
    let arrow_space = FiniteTopology::from_subbasis(arrows.len(), arrow_subbasis);

    Ok(ClassifierGroupoid {
        universe,
        objects,
        arrows,
        topology: TopologicalGroupoid {
            shape,
            objects: object_space,
            arrows: arrow_space,
        },
    })
}

/// The generic object over the classifier: the sheaf whose fiber over each
/// subset is the subset itself. Every formal sheaf is a pullback of it.
pub fn generic_object(s: &ClassifierGroupoid) -> EquivariantSheaf {
    let mut total = Vec::new();
    for (x, &mask) in s.objects.iter().enumerate() {
        for a in mask_atoms(mask) {
            total.push((x, Elem::Tuple(vec![a])));
        }
    }
    let mut subbasis: Vec<NamedOpen> = s
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
                    .filter_map(|(p, (x, _))| open.points.contains(*x).then_some(p)),
            ),
        })
        .collect();
    for a in 0..s.universe as Atom {
        subbasis.push(NamedOpen {
            name: format!("<element {a}>"),
            points: point_set(
                total.len(),
                total
                    .iter()
                    .enumerate()
                    .filter_map(|(p, (_, e))| (*e == Elem::Tuple(vec![a])).then_some(p)),
            ),
        });
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);
    let point_of = |x: usize, a: Atom| -> usize {
        total
            .iter()
            .position(|(y, e)| *y == x && *e == Elem::Tuple(vec![a]))
            .expect("generic object point")
    };
    let action = s
        .arrows
        .iter()
        .map(|arrow| {
            total
                .iter()
                .map(|(x, e)| {
                    if *x != arrow.source {
                        return None;
                    }
                    let Elem::Tuple(t) = e else { unreachable!() };
                    let (_, b) = arrow
                        .map
                        .iter()
                        .find(|&&(a, _)| a == t[0])
                        .expect("fiber atom is in the bijection's domain");
                    Some(point_of(arrow.target, *b))
                })
                .collect()
        })
        .collect();
    EquivariantSheaf {
        base: s.topology.clone(),
        total,
        topology,
        action,
        formula: None,
    }
}

/// The classifying morphism of a formal sheaf: the continuous functor from
/// the sheaf's base groupoid to the classifier sending each object to its
/// fiber (as a set of atoms) and each arrow to its fiber bijection.
///
/// Fails with [`Error::NotFormal`] when a formality condition fails, and
/// with the underlying witness when functoriality or continuity breaks.
pub fn classifying_morphism(
    sh: &EquivariantSheaf,
    s: &ClassifierGroupoid,
) -> Result<GroupoidMorphism> {
    let report = check_formal_conditions(sh, s.universe, UniverseMode::Atoms);
    if let Some(failure) = report.first_failure() {
        return Err(Error::NotFormal {
            condition: failure.name.into(),
            detail: failure.detail.clone(),
        });
    }

    let fiber_atom = |i: usize| -> Atom {
        let Elem::Tuple(t) = &sh.total[i].1 else {
            unreachable!("small fibers hold single atoms")
        };
        t[0]
    };
    let on_objects: Vec<usize> = (0..sh.base.shape.object_count)
        .map(|x| {
            let mask = sh
                .fiber(x)
                .iter()
                .fold(0u64, |m, &i| m | 1 << fiber_atom(i));
            s.object_of_mask(mask)
                .expect("fiber atoms stay below the classifier bound")
        })
        .collect();
    let on_arrows: Vec<usize> = (0..sh.base.shape.arrow_count())
        .map(|k| {
            let graph: Vec<(Atom, Atom)> = sh
                .fiber(sh.base.shape.source[k])
                .iter()
                .map(|&i| {
                    let j = sh.action[k][i].expect("action defined over the source");
                    (fiber_atom(i), fiber_atom(j))
                })
                .sorted()
                .collect();
            s.arrow_of_graph(on_objects[sh.base.shape.source[k]], on_objects[sh.base.shape.target[k]], &graph)
                .expect("every fiber bijection is a classifier arrow")
        })
        .collect();

    let morphism = GroupoidMorphism {
        on_objects,
        on_arrows,
    };
    morphism.check(&sh.base.shape, &s.topology.shape)?;
    is_continuous(
        &morphism.on_objects,
        &sh.base.objects,
        &s.topology.objects,
    )?;
    is_continuous(&morphism.on_arrows, &sh.base.arrows, &s.topology.arrows)?;
    Ok(morphism)
}

/// Pull a sheaf back along a continuous functor `m : h → sh.base`. The
/// resulting total space reindexes fibers along `m` on objects; the action
/// transports along `m` on arrows; the topology is generated by the
/// preimages of both projections' subbases.
pub fn pullback_sheaf(
    m: &GroupoidMorphism,
    h: &TopologicalGroupoid,
    sh: &EquivariantSheaf,
) -> Result<EquivariantSheaf> {
    m.check(&h.shape, &sh.base.shape)?;
    is_continuous(&m.on_objects, &h.objects, &sh.base.objects)?;
    is_continuous(&m.on_arrows, &h.arrows, &sh.base.arrows)?;

    let mut total = Vec::new();
    let mut upstairs = Vec::new();
    for x in 0..h.shape.object_count {
        for i in sh.fiber(m.on_objects[x]) {
            total.push((x, sh.total[i].1.clone()));
            upstairs.push(i);
        }
    }
    let point_of = |x: usize, i: usize| -> usize {
        (0..total.len())
            .find(|&p| total[p].0 == x && upstairs[p] == i)
            .expect("transported point stays in the pullback")
    };
    let action = (0..h.shape.arrow_count())
        .map(|k| {
            (0..total.len())
                .map(|p| {
                    if total[p].0 != h.shape.source[k] {
                        return None;
                    }
                    let j = sh.action[m.on_arrows[k]][upstairs[p]]
                        .expect("image arrow acts on the image fiber");
                    Some(point_of(h.shape.target[k], j))
                })
                .collect()
        })
        .collect();

    let mut subbasis: Vec<NamedOpen> = h
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
                    .filter_map(|(p, (x, _))| open.points.contains(*x).then_some(p)),
            ),
        })
        .collect();
    for open in sh.topology.subbasis() {
        subbasis.push(NamedOpen {
            name: format!("pulled({})", open.name),
            points: point_set(
                total.len(),
                (0..total.len()).filter(|&p| open.points.contains(upstairs[p])),
            ),
        });
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);

    Ok(EquivariantSheaf {
        base: h.clone(),
        total,
        topology,
        action,
        formula: None,
    })
}

fn fmt_atoms(atoms: &[Atom]) -> String {
    atoms
        .iter()
        .map(|a| a.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula_in_context, parse_theory, SortId};
    use crate::model::{build_groupoid, AtomUniverse, ModelGroupoid};
    use crate::sheaf::definable::definable_sheaf;
    use crate::topology::{
        build_logical_topologies, check_topological_groupoid, is_open_map,
        model_topological_groupoid, LogicalTopologies,
    };

    fn eq_setup() -> (ModelGroupoid, LogicalTopologies) {
        let t = parse_theory(
            "t_eq",
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n",
        )
        .unwrap();
        let g = build_groupoid(&t, &AtomUniverse::new(2), &Limits::default()).unwrap();
        let phi = parse_formula_in_context(&g.theory.signature, "x:X | true").unwrap();
        let tops = build_logical_topologies(&g, &[phi]).unwrap();
        (g, tops)
    }

    #[test]
    fn the_classifier_at_bound_two_has_the_frozen_shape() {
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        assert_eq!(s.objects, vec![0, 1, 2, 3]);
        // 1 empty bijection + 4 singleton bijections + 2 doubleton ones.
        assert_eq!(s.arrows.len(), 7);
        s.topology.shape.check_laws().unwrap();
        check_topological_groupoid(&s.topology).unwrap();
    }

    #[test]
    fn the_classifier_is_the_model_groupoid_of_the_empty_theory() {
        let (g, tops) = eq_setup();
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let bundle = model_topological_groupoid(&g, &tops);

        // Match objects by carrier bitmask and arrows by graph.
        let on_objects: Vec<usize> = g
            .models
            .iter()
            .map(|m| {
                let mask = m
                    .carrier(SortId(0))
                    .iter()
                    .fold(0u64, |acc, &a| acc | 1 << a);
                s.object_of_mask(mask).unwrap()
            })
            .collect();
        let on_arrows: Vec<usize> = g
            .arrows
            .iter()
            .map(|arrow| {
                let m = &g.models[arrow.source];
                let graph: Vec<(Atom, Atom)> = m
                    .carrier(SortId(0))
                    .iter()
                    .map(|&a| (a, arrow.map.apply(m, SortId(0), a)))
                    .collect();
                s.arrow_of_graph(on_objects[arrow.source], on_objects[arrow.target], &graph)
                    .unwrap()
            })
            .collect();
        let iso = GroupoidMorphism {
            on_objects,
            on_arrows,
        };
        iso.check(&bundle.shape, &s.topology.shape).unwrap();
        assert!(iso.is_bijective(&bundle.shape, &s.topology.shape));
        // A homeomorphism on both levels: continuous and open each way.
        is_continuous(&iso.on_objects, &bundle.objects, &s.topology.objects).unwrap();
        is_open_map(&iso.on_objects, &bundle.objects, &s.topology.objects).unwrap();
        is_continuous(&iso.on_arrows, &bundle.arrows, &s.topology.arrows).unwrap();
        is_open_map(&iso.on_arrows, &bundle.arrows, &s.topology.arrows).unwrap();
    }

    #[test]
    fn the_generic_object_is_a_formal_sheaf() {
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let generic = generic_object(&s);
        generic.check().unwrap();
        let report = check_formal_conditions(&generic, 2, UniverseMode::Atoms);
        assert!(
            report.all_pass(),
            "generic object failed: {:?}",
            report.first_failure()
        );
    }

    #[test]
    fn definable_sheaves_are_formal_in_tuple_mode() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        for text in ["x:X | true", "x:X y:X | x != y", "x:X | false"] {
            let f = parse_formula_in_context(sig, text).unwrap();
            let sh = definable_sheaf(&g, &tops, &f).unwrap();
            let report = check_formal_conditions(&sh, 2, UniverseMode::Tuples);
            assert!(
                report.all_pass(),
                "sheaf of {text} failed: {:?}",
                report.first_failure()
            );
        }
    }

    #[test]
    fn wide_tuples_fail_smallness_in_atom_mode() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        let f = parse_formula_in_context(sig, "x:X y:X | x != y").unwrap();
        let sh = definable_sheaf(&g, &tops, &f).unwrap();
        let report = check_formal_conditions(&sh, 2, UniverseMode::Atoms);
        let failure = report.first_failure().expect("must fail smallness");
        assert_eq!(failure.name, "small fibers");
        assert!(matches!(
            classifying_morphism(&sh, &classifier_groupoid(2, &Limits::default()).unwrap()),
            Err(Error::NotFormal { .. })
        ));
    }

    #[test]
    fn a_topology_mismatch_fails_the_section_condition() {
        // Two isolated objects with indiscrete object space but discrete
        // total space: the element's domain is the whole (open) space, yet
        // its constant section cannot be continuous.
        let base = TopologicalGroupoid {
            shape: FiniteGroupoid {
                object_count: 2,
                source: vec![0, 1],
                target: vec![0, 1],
                identity: vec![0, 1],
                inverse: vec![0, 1],
                compose: vec![vec![Some(0), None], vec![None, Some(1)]],
            },
            objects: FiniteTopology::indiscrete(2),
            arrows: FiniteTopology::indiscrete(2),
        };
        let sh = EquivariantSheaf {
            base,
            total: vec![(0, Elem::Tuple(vec![0])), (1, Elem::Tuple(vec![0]))],
            topology: FiniteTopology::discrete(2),
            action: vec![vec![Some(0), None], vec![None, Some(1)]],
            formula: None,
        };
        let report = check_formal_conditions(&sh, 2, UniverseMode::Atoms);
        let failure = report.first_failure().expect("must fail the section check");
        assert_eq!(failure.name, "open element domains");
        assert!(failure.detail.contains("not continuous"));
    }

    #[test]
    fn the_empty_sheaf_is_vacuously_formal() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        let sh = definable_sheaf(&g, &tops, &bot).unwrap();
        for mode in [UniverseMode::Atoms, UniverseMode::Tuples] {
            assert!(check_formal_conditions(&sh, 2, mode).all_pass());
        }
    }

    #[test]
    fn classifying_the_tautological_sheaf_is_the_carrier_functor() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let m = classifying_morphism(&sh, &s).unwrap();
        // Models ∅, {0}, {1}, {0,1} map to the objects with those masks.
        assert_eq!(m.on_objects, vec![0, 1, 2, 3]);
    }

    #[test]
    fn classifying_the_empty_sheaf_is_the_constant_functor() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        let bot = parse_formula_in_context(sig, "x:X | false").unwrap();
        let sh = definable_sheaf(&g, &tops, &bot).unwrap();
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let m = classifying_morphism(&sh, &s).unwrap();
        assert!(m.on_objects.iter().all(|&o| o == 0));
        assert_eq!(s.objects[0], 0);
    }

    #[test]
    fn pulling_back_along_the_identity_changes_nothing() {
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let generic = generic_object(&s);
        let id = GroupoidMorphism {
            on_objects: (0..s.topology.shape.object_count).collect(),
            on_arrows: (0..s.topology.shape.arrow_count()).collect(),
        };
        let back = pullback_sheaf(&id, &s.topology, &generic).unwrap();
        back.check().unwrap();
        assert_eq!(back.total, generic.total);
        assert_eq!(back.action, generic.action);
        assert!(back.topology.same_topology(&generic.topology));
    }

    #[test]
    fn classify_then_pull_back_recovers_the_sheaf_exactly() {
        let (g, tops) = eq_setup();
        let sig = &g.theory.signature;
        let phi = parse_formula_in_context(sig, "x:X | true").unwrap();
        let sh = definable_sheaf(&g, &tops, &phi).unwrap();
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let m = classifying_morphism(&sh, &s).unwrap();
        let generic = generic_object(&s);
        let bundle = model_topological_groupoid(&g, &tops);
        let back = pullback_sheaf(&m, &bundle, &generic).unwrap();
        back.check().unwrap();
        assert_eq!(back.total, sh.total);
        assert_eq!(back.action, sh.action);
        assert!(back.topology.same_topology(&sh.topology));
    }

    #[test]
    fn pulling_back_over_the_empty_groupoid_gives_the_empty_sheaf() {
        let s = classifier_groupoid(2, &Limits::default()).unwrap();
        let generic = generic_object(&s);
        let empty = TopologicalGroupoid::discrete(FiniteGroupoid {
            object_count: 0,
            source: vec![],
            target: vec![],
            identity: vec![],
            inverse: vec![],
            compose: vec![],
        });
        let nothing = GroupoidMorphism {
            on_objects: vec![],
            on_arrows: vec![],
        };
        let back = pullback_sheaf(&nothing, &empty, &generic).unwrap();
        back.check().unwrap();
        assert!(back.total.is_empty());
    }

    #[test]
    fn the_classifier_guard_refuses_large_universes() {
        let tight = Limits {
            enumeration_ceiling: 100,
            ..Limits::default()
        };
        assert!(matches!(
            classifier_groupoid(4, &tight),
            Err(Error::ResourceGuard { .. })
        ));
    }
}
