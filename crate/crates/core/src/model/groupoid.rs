//! The groupoid of all models and isomorphisms over a bounded universe:
//! every model is an object, every isomorphism an arrow, with composition,
//! identities and inverses tabulated once so later passes (orbits, sheaf
//! actions, hom-set searches) are pure lookups.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::logic::Theory;
use crate::model::{
    enumerate_maps, enumerate_models, AtomUniverse, Limits, MapKind, Model, ModelMap,
};

/// One isomorphism between enumerated models, by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ModelArrow {
    pub source: usize,
    pub target: usize,
    pub map: ModelMap,
}

/// All models of a theory over a bounded universe together with every
/// isomorphism between them.
#[derive(Debug, Clone)]
pub struct ModelGroupoid {
    pub theory: Theory,
    pub universe: AtomUniverse,
    pub models: Vec<Model>,
    /// Arrows in canonical order: by source index, then target index, then
    /// lexicographic component vector.
    pub arrows: Vec<ModelArrow>,
    /// The abstract composition tables over the arrow indices.
    pub shape: FiniteGroupoid,
}

impl ModelGroupoid {
    /// Indices of all arrows from `source` to `target`.
    pub fn arrows_between(&self, source: usize, target: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == source && self.arrows[a].target == target)
            .collect()
    }

    /// Index of the identity arrow at a model.
    pub fn identity_arrow(&self, object: usize) -> usize {
        self.shape.identity[object]
    }

    /// The arrow index of `g ∘ f` (apply `f` first).
    pub fn composed(&self, g: usize, f: usize) -> usize {
        self.shape.composed(g, f)
    }
}

/// Enumerate all models and isomorphisms of `theory` over `universe` and
/// tabulate the groupoid structure.
pub fn build_groupoid(
    theory: &Theory,
    universe: &AtomUniverse,
    limits: &Limits,
) -> Result<ModelGroupoid> {
    let models = enumerate_models(theory, universe, limits)?;
    let mut arrows = Vec::new();
    for (i, src) in models.iter().enumerate() {
        for (j, tgt) in models.iter().enumerate() {
            for map in enumerate_maps(&theory.signature, src, tgt, MapKind::Isomorphism) {
                arrows.push(ModelArrow {
                    source: i,
                    target: j,
                    map,
                });
            }
        }
    }

    let mut index: BTreeMap<(usize, usize, Vec<Vec<u32>>), usize> = BTreeMap::new();
    for (a, arrow) in arrows.iter().enumerate() {
        index.insert((arrow.source, arrow.target, arrow.map.components.clone()), a);
    }
    let locate = |source: usize, target: usize, map: &ModelMap| -> usize {
        *index
            .get(&(source, target, map.components.clone()))
            .expect("isomorphisms are closed under identity, inverse and composition")
    };

    let identity: Vec<usize> = models
        .iter()
        .enumerate()
        .map(|(i, m)| locate(i, i, &ModelMap::identity(m)))
        .collect();
    let inverse: Vec<usize> = arrows
        .iter()
        .map(|a| {
            let inv = a.map.inverse(&models[a.source], &models[a.target]);
            locate(a.target, a.source, &inv)
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
                    let gf = f.map.then(&g.map, &models[f.source], &models[f.target]);
                    Some(locate(f.source, g.target, &gf))
                })
                .collect()
        })
        .collect();

    let shape = FiniteGroupoid {
        object_count: models.len(),
        source: arrows.iter().map(|a| a.source).collect(),
        target: arrows.iter().map(|a| a.target).collect(),
        identity,
        inverse,
        compose,
    };
    Ok(ModelGroupoid {
        theory: theory.clone(),
        universe: *universe,
        models,
        arrows,
        shape,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_theory;

    fn t_eq() -> Theory {
        parse_theory(
            "t_eq",
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n",
        )
        .unwrap()
    }

    fn t_graph() -> Theory {
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

    #[test]
    fn equality_groupoid_at_bound_two_is_four_models_seven_arrows() {
        let g = build_groupoid(&t_eq(), &AtomUniverse::new(2), &Limits::default()).unwrap();
        assert_eq!(g.models.len(), 4);
        assert_eq!(g.arrows.len(), 7);
        g.shape.check_laws().unwrap();
        // Components: the empty model, the two singletons, the doubleton.
        let comps = g.shape.components();
        assert_eq!(comps, vec![0, 1, 1, 2]);
    }

    #[test]
    fn graph_groupoid_at_bound_two_is_five_models_nine_arrows() {
        let g = build_groupoid(&t_graph(), &AtomUniverse::new(2), &Limits::default()).unwrap();
        assert_eq!(g.models.len(), 5);
        // 1 (empty) + 2·2 (singletons and their cross arrows) + 2 + 2
        // (automorphism groups of the two graphs on {0,1}).
        assert_eq!(g.arrows.len(), 9);
        g.shape.check_laws().unwrap();
        assert_eq!(g.shape.components(), vec![0, 1, 1, 2, 3]);
    }

    #[test]
    fn composition_inverse_and_identity_agree_with_the_maps() {
        let g = build_groupoid(&t_eq(), &AtomUniverse::new(2), &Limits::default()).unwrap();
        for (a, arrow) in g.arrows.iter().enumerate() {
            let inv = g.shape.inverse[a];
            let round = g.composed(inv, a);
            assert_eq!(round, g.identity_arrow(arrow.source));
        }
        let cross = g.arrows_between(1, 2);
        assert_eq!(cross.len(), 1);
        let back = g.shape.inverse[cross[0]];
        assert_eq!(g.arrows[back].source, 2);
        assert_eq!(g.arrows[back].target, 1);
    }

    #[test]
    fn larger_bound_still_satisfies_the_laws() {
        let g = build_groupoid(&t_graph(), &AtomUniverse::new(3), &Limits::default()).unwrap();
        g.shape.check_laws().unwrap();
        // 2^3 carrier choices; loop-free symmetric graphs on k vertices:
        // 1, 1, 2, 8 — summed over the carrier subsets: 1 + 3·1 + 3·2 + 8.
        assert_eq!(g.models.len(), 18);
    }
}
