//! A finite groupoid bundled with topologies on its object and arrow sets,
//! and the decision procedure for the topological-groupoid laws: source and
//! target continuous open maps, identity, inverse, and composition (on the
//! fibred product of composable pairs) continuous.

use crate::error::Result;
use crate::groupoid::FiniteGroupoid;
use crate::topology::checks::{is_continuous, is_open_map};
use crate::topology::space::FiniteTopology;

/// A finite topological groupoid: the shared base for model groupoids, the
/// classifier groupoid of small sets, and handcrafted fixtures.
#[derive(Debug, Clone)]
pub struct TopologicalGroupoid {
    pub shape: FiniteGroupoid,
    pub objects: FiniteTopology,
    pub arrows: FiniteTopology,
}

impl TopologicalGroupoid {
    /// Equip a groupoid with discrete topologies on both levels.
    pub fn discrete(shape: FiniteGroupoid) -> Self {
        let objects = FiniteTopology::discrete(shape.object_count);
        let arrows = FiniteTopology::discrete(shape.arrow_count());
        Self {
            shape,
            objects,
            arrows,
        }
    }

    /// Same shape and same topologies on both levels (subbases may differ).
    pub fn same_as(&self, other: &Self) -> bool {
        self.shape == other.shape
            && self.objects.same_topology(&other.objects)
            && self.arrows.same_topology(&other.arrows)
    }

    /// All composable pairs (g, f) with t(f) = s(g), alongside the arrow
    /// each pair composes to, in (g, f) lexicographic order.
    pub fn composable_pairs(&self) -> (Vec<(usize, usize)>, Vec<usize>) {
        let mut pairs = Vec::new();
        let mut composed = Vec::new();
        for g in 0..self.shape.arrow_count() {
            for f in 0..self.shape.arrow_count() {
                if self.shape.target[f] == self.shape.source[g] {
                    pairs.push((g, f));
                    composed.push(self.shape.composed(g, f));
                }
            }
        }
        (pairs, composed)
    }
}

/// Verify the topological-groupoid laws: source and target are continuous
/// open maps; identity, inverse, and composition (on the fibred product of
/// composable pairs) are continuous. The algebraic groupoid laws are
/// checked first.
pub fn check_topological_groupoid(g: &TopologicalGroupoid) -> Result<()> {
    g.shape.check_laws()?;
    is_continuous(&g.shape.source, &g.arrows, &g.objects)?;
    is_continuous(&g.shape.target, &g.arrows, &g.objects)?;
    is_open_map(&g.shape.source, &g.arrows, &g.objects)?;
    is_open_map(&g.shape.target, &g.arrows, &g.objects)?;
    is_continuous(&g.shape.identity, &g.objects, &g.arrows)?;
    is_continuous(&g.shape.inverse, &g.arrows, &g.arrows)?;
    let (pairs, composed) = g.composable_pairs();
    let pair_space = FiniteTopology::product_subspace(&g.arrows, &g.arrows, &pairs);
    is_continuous(&composed, &pair_space, &g.arrows)?;
    Ok(())
}
