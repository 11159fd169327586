//! Canonical constructions in the category of equivariant sheaves over a
//! fixed base groupoid: terminal and initial objects, binary products and
//! coproducts, subsheaves of stable opens, and the point sets of images and
//! equalizers of morphisms. Each construction builds the topology so that
//! the étale and equivariance axioms hold by theorem — and the test suite
//! re-checks them anyway.

use crate::error::{Error, Result};
use crate::sheaf::equivariant::{Elem, EquivariantSheaf, SheafMorphism};
use crate::topology::{point_set, FiniteTopology, NamedOpen, PointSet, TopologicalGroupoid};

/// The terminal sheaf: one point per base object, topology pulled back
/// from the object space, every arrow acting as the unique map.
pub fn terminal_sheaf(base: &TopologicalGroupoid) -> EquivariantSheaf {
    let n = base.shape.object_count;
    let total: Vec<(usize, Elem)> = (0..n).map(|x| (x, Elem::Tuple(vec![]))).collect();
    let subbasis = base
        .objects
        .subbasis()
        .iter()
        .map(|open| NamedOpen {
            name: format!("proj^-1({})", open.name),
            points: open.points.clone(),
        })
        .collect();
    let topology = FiniteTopology::from_subbasis(n, subbasis);
    let action = (0..base.shape.arrow_count())
        .map(|k| {
            (0..n)
                .map(|x| (x == base.shape.source[k]).then_some(base.shape.target[k]))
                .collect()
        })
        .collect();
    EquivariantSheaf {
        base: base.clone(),
        total,
        topology,
        action,
        formula: None,
    }
}

/// The initial sheaf: empty total space.
pub fn empty_sheaf(base: &TopologicalGroupoid) -> EquivariantSheaf {
    EquivariantSheaf {
        base: base.clone(),
        total: Vec::new(),
        topology: FiniteTopology::discrete(0),
        action: vec![Vec::new(); base.shape.arrow_count()],
        formula: None,
    }
}

/// The fibrewise product of two sheaves over the same base: paired
/// elements, componentwise action, and the initial topology for the two
/// projections (preimages of both factors' subbases).
pub fn product_sheaf(a: &EquivariantSheaf, b: &EquivariantSheaf) -> Result<EquivariantSheaf> {
    if !a.base.same_as(&b.base) {
        return Err(Error::Invalid(
            "product factors live over different base groupoids".into(),
        ));
    }
    let mut total = Vec::new();
    let mut components = Vec::new();
    for (i, (x, e)) in a.total.iter().enumerate() {
        for (j, (y, f)) in b.total.iter().enumerate() {
            if x == y {
                total.push((*x, Elem::Pair(Box::new(e.clone()), Box::new(f.clone()))));
                components.push((i, j));
            }
        }
    }
    // a.total and b.total are sorted, so the pairs come out sorted too;
    // reorder defensively to keep the invariant independent of that.
    let mut order: Vec<usize> = (0..total.len()).collect();
    order.sort_by(|&p, &q| total[p].cmp(&total[q]));
    let total: Vec<(usize, Elem)> = order.iter().map(|&p| total[p].clone()).collect();
    let components: Vec<(usize, usize)> = order.iter().map(|&p| components[p]).collect();

    let mut subbasis = Vec::new();
    for (factor, sheaf, pick) in [
        ("left", a, 0usize),
        ("right", b, 1usize),
    ] {
        for open in sheaf.topology.subbasis() {
            subbasis.push(NamedOpen {
                name: format!("pi_{factor}^-1({})", open.name),
                points: point_set(
                    total.len(),
                    components.iter().enumerate().filter_map(|(p, &(i, j))| {
                        let c = if pick == 0 { i } else { j };
                        open.points.contains(c).then_some(p)
                    }),
                ),
            });
        }
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);

    let index_of = |i: usize, j: usize| -> usize {
        components
            .iter()
            .position(|&(p, q)| p == i && q == j)
            .expect("componentwise action stays in the product")
    };
    let action = (0..a.base.shape.arrow_count())
        .map(|k| {
            components
                .iter()
                .map(|&(i, j)| match (a.action[k][i], b.action[k][j]) {
                    (Some(i2), Some(j2)) => Some(index_of(i2, j2)),
                    _ => None,
                })
                .collect()
        })
        .collect();
    Ok(EquivariantSheaf {
        base: a.base.clone(),
        total,
        topology,
        action,
        formula: None,
    })
}

/// The disjoint sum of two sheaves over the same base: tagged elements,
/// summand-injected topology (each summand's subbasis plus each whole
/// summand as an open), actions side by side.
pub fn coproduct_sheaf(a: &EquivariantSheaf, b: &EquivariantSheaf) -> Result<EquivariantSheaf> {
    if !a.base.same_as(&b.base) {
        return Err(Error::Invalid(
            "coproduct summands live over different base groupoids".into(),
        ));
    }
    let mut total = Vec::new();
    let mut origin = Vec::new(); // (tag, index in summand)
    for (i, (x, e)) in a.total.iter().enumerate() {
        total.push((*x, Elem::Tagged(0, Box::new(e.clone()))));
        origin.push((0usize, i));
    }
    for (j, (y, f)) in b.total.iter().enumerate() {
        total.push((*y, Elem::Tagged(1, Box::new(f.clone()))));
        origin.push((1usize, j));
    }
    let mut order: Vec<usize> = (0..total.len()).collect();
    order.sort_by(|&p, &q| total[p].cmp(&total[q]));
    let total: Vec<(usize, Elem)> = order.iter().map(|&p| total[p].clone()).collect();
    let origin: Vec<(usize, usize)> = order.iter().map(|&p| origin[p]).collect();

    let mut subbasis = Vec::new();
    for (tag, sheaf) in [(0usize, a), (1usize, b)] {
        // The whole summand is open — indispensable when a summand's own
        // subbasis is empty, as for sheaves over the one-point base.
        subbasis.push(NamedOpen {
            name: format!("summand_{tag}"),
            points: point_set(
                total.len(),
                origin
                    .iter()
                    .enumerate()
                    .filter_map(|(p, &(t, _))| (t == tag).then_some(p)),
            ),
        });
        for open in sheaf.topology.subbasis() {
            subbasis.push(NamedOpen {
                name: format!("in_{tag}({})", open.name),
                points: point_set(
                    total.len(),
                    origin.iter().enumerate().filter_map(|(p, &(t, i))| {
                        (t == tag && open.points.contains(i)).then_some(p)
                    }),
                ),
            });
        }
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);

    let index_of = |tag: usize, i: usize| -> usize {
        origin
            .iter()
            .position(|&(t, p)| t == tag && p == i)
            .expect("summand action stays in the coproduct")
    };
    let action = (0..a.base.shape.arrow_count())
        .map(|k| {
            origin
                .iter()
                .map(|&(tag, i)| {
                    let summand = if tag == 0 { a } else { b };
                    summand.action[k][i].map(|j| index_of(tag, j))
                })
                .collect()
        })
        .collect();
    Ok(EquivariantSheaf {
        base: a.base.clone(),
        total,
        topology,
        action,
        formula: None,
    })
}

/// The subsheaf carried by a stable open subset of the total space, with
/// the subspace topology and the restricted action. Fails with a witness
/// if the subset is not open or not closed under the action.
pub fn subsheaf(sh: &EquivariantSheaf, points: &PointSet) -> Result<EquivariantSheaf> {
    for k in 0..sh.base.shape.arrow_count() {
        for i in points.ones() {
            if let Some(j) = sh.action[k][i] {
                if !points.contains(j) {
                    return Err(Error::NotStable { arrow: k, point: i });
                }
            }
        }
    }
    if let Some(point) = sh.topology.open_violation(points) {
        return Err(Error::NotOpen { point });
    }
    let kept: Vec<usize> = points.ones().collect();
    let position = |i: usize| kept.binary_search(&i).expect("image point kept");
    let total: Vec<(usize, Elem)> = kept.iter().map(|&i| sh.total[i].clone()).collect();
    let topology = sh.topology.subspace(&kept);
    let action = (0..sh.base.shape.arrow_count())
        .map(|k| {
            kept.iter()
                .map(|&i| sh.action[k][i].map(position))
                .collect()
        })
        .collect();
    Ok(EquivariantSheaf {
        base: sh.base.clone(),
        total,
        topology,
        action,
        formula: None,
    })
}

/// The image of a morphism as a subset of the target's total space. Images
/// of sheaf morphisms are automatically stable and open, so the result
/// always carries a subsheaf.
pub fn image_points(m: &SheafMorphism) -> PointSet {
    point_set(m.target.total.len(), m.map.iter().copied())
}

/// The equalizer of two parallel morphisms as a subset of the shared
/// source's total space: the points where they agree. Automatically stable
/// and open over an étale base, so the result always carries a subsheaf.
pub fn equalizer_points(f: &SheafMorphism, g: &SheafMorphism) -> Result<PointSet> {
    if f.source.total != g.source.total || f.target.total != g.target.total {
        return Err(Error::Invalid(
            "equalizer needs a parallel pair sharing source and target".into(),
        ));
    }
    Ok(point_set(
        f.source.total.len(),
        (0..f.map.len()).filter(|&i| f.map[i] == g.map[i]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula_in_context, parse_theory};
    use crate::model::{build_groupoid, AtomUniverse, Limits, ModelGroupoid};
    use crate::sheaf::definable::definable_sheaf;
    use crate::sheaf::equivariant::{sheaf_homs, stabilize};
    use crate::topology::{build_logical_topologies, LogicalTopologies};

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

    fn tautological(g: &ModelGroupoid, tops: &LogicalTopologies) -> EquivariantSheaf {
        let phi = parse_formula_in_context(&g.theory.signature, "x:X | true").unwrap();
        definable_sheaf(g, tops, &phi).unwrap()
    }

    #[test]
    fn terminal_and_empty_sheaves_are_lawful_and_extremal() {
        let (g, tops) = eq_setup();
        let sh = tautological(&g, &tops);
        let one = terminal_sheaf(&sh.base);
        one.check().unwrap();
        let zero = empty_sheaf(&sh.base);
        zero.check().unwrap();

        let limits = Limits::default();
        // Exactly one morphism into the terminal sheaf, from anything.
        assert_eq!(sheaf_homs(&sh, &one, &limits).unwrap().len(), 1);
        assert_eq!(sheaf_homs(&one, &one, &limits).unwrap().len(), 1);
        assert_eq!(sheaf_homs(&zero, &one, &limits).unwrap().len(), 1);
        // Exactly one morphism out of the empty sheaf, into anything.
        assert_eq!(sheaf_homs(&zero, &sh, &limits).unwrap().len(), 1);
        // And none backwards from something nonempty.
        assert_eq!(sheaf_homs(&sh, &zero, &limits).unwrap().len(), 0);
    }

    #[test]
    fn products_satisfy_the_universal_property_pointwise() {
        let (g, tops) = eq_setup();
        let sh = tautological(&g, &tops);
        let prod = product_sheaf(&sh, &sh).unwrap();
        prod.check().unwrap();
        // Fibers square: sizes 0,1,1,4 over the four models.
        assert_eq!(prod.total.len(), 6);
        assert_eq!(prod.fiber(3).len(), 4);

        // Projections are sheaf morphisms.
        let left: Vec<usize> = prod
            .total
            .iter()
            .map(|(x, e)| {
                let Elem::Pair(a, _) = e else { unreachable!() };
                sh.point_index(*x, a).unwrap()
            })
            .collect();
        let right: Vec<usize> = prod
            .total
            .iter()
            .map(|(x, e)| {
                let Elem::Pair(_, b) = e else { unreachable!() };
                sh.point_index(*x, b).unwrap()
            })
            .collect();
        SheafMorphism::new(prod.clone(), sh.clone(), left).unwrap();
        SheafMorphism::new(prod.clone(), sh.clone(), right).unwrap();

        // Pairing: homs(sh, prod) ↔ homs(sh, sh) × homs(sh, sh).
        let limits = Limits::default();
        let into_prod = sheaf_homs(&sh, &prod, &limits).unwrap().len();
        let into_sh = sheaf_homs(&sh, &sh, &limits).unwrap().len();
        assert_eq!(into_prod, into_sh * into_sh);
    }

    #[test]
    fn coproducts_satisfy_the_universal_property_pointwise() {
        let (g, tops) = eq_setup();
        let sh = tautological(&g, &tops);
        let sum = coproduct_sheaf(&sh, &sh).unwrap();
        sum.check().unwrap();
        assert_eq!(sum.total.len(), 8);

        // Injections are sheaf morphisms.
        for tag in [0usize, 1] {
            let map: Vec<usize> = sh
                .total
                .iter()
                .map(|(x, e)| {
                    sum.point_index(*x, &Elem::Tagged(tag, Box::new(e.clone())))
                        .unwrap()
                })
                .collect();
            SheafMorphism::new(sh.clone(), sum.clone(), map).unwrap();
        }

        // Copairing: homs(sum, sh) ↔ homs(sh, sh) × homs(sh, sh).
        let limits = Limits::default();
        let from_sum = sheaf_homs(&sum, &sh, &limits).unwrap().len();
        let from_sh = sheaf_homs(&sh, &sh, &limits).unwrap().len();
        assert_eq!(from_sum, from_sh * from_sh);

        // The two summands are still clopen and stable inside the sum.
        let left = point_set(
            8,
            sum.total.iter().enumerate().filter_map(|(p, (_, e))| {
                matches!(e, Elem::Tagged(0, _)).then_some(p)
            }),
        );
        assert!(sum.topology.is_open(&left));
        assert_eq!(stabilize(&sum, &left), left);
    }

    #[test]
    fn coproducts_over_the_trivial_base_stay_separated() {
        // One object, one identity arrow, indiscrete-by-default object
        // space: a summand of a one-point sheaf has an empty subbasis, so
        // the summand opens must be added explicitly.
        let base = TopologicalGroupoid::discrete(crate::groupoid::FiniteGroupoid {
            object_count: 1,
            source: vec![0],
            target: vec![0],
            identity: vec![0],
            inverse: vec![0],
            compose: vec![vec![Some(0)]],
        });
        let point = EquivariantSheaf {
            base: base.clone(),
            total: vec![(0, Elem::Tuple(vec![]))],
            topology: FiniteTopology::from_subbasis(1, Vec::new()),
            action: vec![vec![Some(0)]],
            formula: None,
        };
        point.check().unwrap();
        let sum = coproduct_sheaf(&point, &point).unwrap();
        sum.check().unwrap();
        assert_eq!(sum.total.len(), 2);
        // Each point alone is open: the topology is discrete, not glued.
        assert!(sum.topology.is_open(&point_set(2, [0])));
        assert!(sum.topology.is_open(&point_set(2, [1])));
    }

    #[test]
    fn subsheaves_restrict_and_reject_with_witnesses() {
        let (g, tops) = eq_setup();
        let sh = tautological(&g, &tops);

        // The doubleton orbit is stable and open: a lawful subsheaf.
        let sub = subsheaf(&sh, &point_set(4, [2, 3])).unwrap();
        sub.check().unwrap();
        assert_eq!(sub.total.len(), 2);
        assert_eq!(
            sub.total,
            vec![(3, Elem::Tuple(vec![0])), (3, Elem::Tuple(vec![1]))]
        );

        assert!(matches!(
            subsheaf(&sh, &point_set(4, [2])),
            Err(Error::NotStable { arrow: 6, point: 2 })
        ));
        assert!(matches!(
            subsheaf(&sh, &point_set(4, [0, 1])),
            Err(Error::NotOpen { point: 0 })
        ));
    }

    #[test]
    fn images_and_equalizers_are_stable_open_subsheaves() {
        let (g, tops) = eq_setup();
        let sh = tautological(&g, &tops);
        let prod = product_sheaf(&sh, &sh).unwrap();
        let left: Vec<usize> = prod
            .total
            .iter()
            .map(|(x, e)| {
                let Elem::Pair(a, _) = e else { unreachable!() };
                sh.point_index(*x, a).unwrap()
            })
            .collect();
        let right: Vec<usize> = prod
            .total
            .iter()
            .map(|(x, e)| {
                let Elem::Pair(_, b) = e else { unreachable!() };
                sh.point_index(*x, b).unwrap()
            })
            .collect();
        let pi1 = SheafMorphism::new(prod.clone(), sh.clone(), left).unwrap();
        let pi2 = SheafMorphism::new(prod.clone(), sh.clone(), right).unwrap();

        // The image of a projection is everything; subsheaf accepts it.
        let img = image_points(&pi1);
        assert_eq!(img, crate::topology::full_set(4));
        subsheaf(&sh, &img).unwrap().check().unwrap();

        // The equalizer of the two projections is the diagonal.
        let diag = equalizer_points(&pi1, &pi2).unwrap();
        let expected: Vec<usize> = prod
            .total
            .iter()
            .enumerate()
            .filter_map(|(p, (_, e))| {
                let Elem::Pair(a, b) = e else { unreachable!() };
                (a == b).then_some(p)
            })
            .collect();
        assert_eq!(diag, point_set(prod.total.len(), expected));
        // Diagonals are stable open subsheaves — exactly the decidability
        // half of the formality conditions.
        subsheaf(&prod, &diag).unwrap().check().unwrap();
    }
}
