//! Equivariant sheaves over a finite topological groupoid, presented
//! concretely: a finite total space étale over the object space, carrying a
//! continuous action of the arrows on fibers. Every sheaf axiom is a
//! decision procedure here — nothing is taken on faith from how a sheaf was
//! constructed — and hom-sets between sheaves are enumerated exactly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logic::FormulaInContext;
use crate::model::{Atom, Limits};
use crate::topology::{
    is_continuous, is_local_homeomorphism, is_open_map, point_set, FiniteTopology, PointSet,
    TopologicalGroupoid,
};

/// A point in a sheaf fiber. Definable sheaves use tuples of atoms;
/// coproducts tag their summand and products pair componentwise, so every
/// construction stays distinguishable and printable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Elem {
    Tuple(Vec<Atom>),
    Tagged(usize, Box<Elem>),
    Pair(Box<Elem>, Box<Elem>),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Tuple(t) if t.len() == 1 => write!(f, "{}", t[0]),
            Elem::Tuple(t) => {
                write!(f, "(")?;
                for (i, a) in t.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
            Elem::Tagged(tag, e) => write!(f, "<{tag}, {e}>"),
            Elem::Pair(a, b) => write!(f, "({a} | {b})"),
        }
    }
}

/// An equivariant sheaf: a total space of `(base object, element)` points,
/// a topology making the projection a local homeomorphism, and an action
/// table `action[arrow][point]`, defined exactly on the points over the
/// arrow's source object.
///
/// `total` is sorted by `(object, element)` so fibers are contiguous and
/// points can be found by binary search. `formula` records, for sheaves cut
/// out by a formula, which one — it is what decomposition back into
/// syntax reads off.
#[derive(Debug, Clone)]
pub struct EquivariantSheaf {
    pub base: TopologicalGroupoid,
    pub total: Vec<(usize, Elem)>,
    pub topology: FiniteTopology,
    pub action: Vec<Vec<Option<usize>>>,
    pub formula: Option<FormulaInContext>,
}

impl EquivariantSheaf {
    /// Index of the total point `(x, e)`, if present.
    pub fn point_index(&self, x: usize, e: &Elem) -> Option<usize> {
        self.total
            .binary_search_by(|(y, d)| y.cmp(&x).then_with(|| d.cmp(e)))
            .ok()
    }

    /// Indices of the total points over base object `x`, ascending.
    pub fn fiber(&self, x: usize) -> Vec<usize> {
        (0..self.total.len())
            .filter(|&i| self.total[i].0 == x)
            .collect()
    }

    /// The étale projection as a total map on point indices.
    pub fn projection(&self) -> Vec<usize> {
        self.total.iter().map(|(x, _)| *x).collect()
    }

    /// Decide every sheaf axiom: sorted well-formed tables, the projection
    /// a local homeomorphism, and the action laws of
    /// [`check_action_axioms`]. Returns the first failure.
    pub fn check(&self) -> Result<()> {
        if self.total.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid(
                "sheaf total space is not sorted strictly by (object, element)".into(),
            ));
        }
        if let Some(&(x, _)) = self.total.iter().find(|(x, _)| *x >= self.base.shape.object_count)
        {
            return Err(Error::Invalid(format!(
                "sheaf total point lies over object {x}, beyond the base"
            )));
        }
        if self.topology.point_count() != self.total.len() {
            return Err(Error::Invalid(format!(
                "sheaf topology has {} points but the total space has {}",
                self.topology.point_count(),
                self.total.len()
            )));
        }
        if self.action.len() != self.base.shape.arrow_count()
            || self.action.iter().any(|row| row.len() != self.total.len())
        {
            return Err(Error::Invalid(
                "sheaf action table dimensions disagree with arrows × total points".into(),
            ));
        }
        is_local_homeomorphism(&self.projection(), &self.topology, &self.base.objects)?;
        let violations = check_action_axioms(self);
        if let Some(first) = violations.first() {
            return Err(Error::Invalid(format!(
                "sheaf action violates its axioms ({} violations; first: {first})",
                violations.len()
            )));
        }
        Ok(())
    }
}

/// Decide the action axioms of an equivariant sheaf, returning every
/// violation as a sentence (empty = all axioms hold):
///
/// * definedness — `action[k][i]` is defined iff `i` lies over source(k);
/// * compatibility — defined values lie over target(k);
/// * unit — identity arrows act as the identity;
/// * composition — α(g∘f, −) = α(g, α(f, −));
/// * fiber bijectivity — each arrow maps its source fiber bijectively
///   onto its target fiber;
/// * continuity — the action is continuous on the subspace of defined
///   (arrow, point) pairs in the product of the arrow and total spaces.
pub fn check_action_axioms(sh: &EquivariantSheaf) -> Vec<String> {
    let shape = &sh.base.shape;
    let n = sh.total.len();
    let mut violations = Vec::new();

    for k in 0..shape.arrow_count() {
        for i in 0..n {
            let over_source = sh.total[i].0 == shape.source[k];
            match sh.action[k][i] {
                Some(_) if !over_source => violations.push(format!(
                    "arrow {k} acts on point {i}, which is not over its source"
                )),
                Some(j) if sh.total[j].0 != shape.target[k] => violations.push(format!(
                    "arrow {k} sends point {i} over object {} instead of its target {}",
                    sh.total[j].0, shape.target[k]
                )),
                None if over_source => violations.push(format!(
                    "arrow {k} is undefined on point {i} over its source"
                )),
                _ => {}
            }
        }
    }

    for (x, &e) in shape.identity.iter().enumerate() {
        for i in (0..n).filter(|&i| sh.total[i].0 == x) {
            if sh.action[e][i] != Some(i) {
                violations.push(format!("the identity of object {x} moves point {i}"));
            }
        }
    }

    for g in 0..shape.arrow_count() {
        for f in 0..shape.arrow_count() {
            let Some(gf) = shape.compose[g][f] else {
                continue;
            };
            for i in (0..n).filter(|&i| sh.total[i].0 == shape.source[f]) {
                let stepwise = sh.action[f][i].and_then(|j| sh.action[g][j]);
                if sh.action[gf][i] != stepwise {
                    violations.push(format!(
                        "composition fails at point {i}: arrows ({g} ∘ {f}) disagree with stepwise action"
                    ));
                }
            }
        }
    }

    for k in 0..shape.arrow_count() {
        let mut hit = vec![false; n];
        let mut injective = true;
        for i in (0..n).filter(|&i| sh.total[i].0 == shape.source[k]) {
            if let Some(j) = sh.action[k][i] {
                if hit[j] {
                    injective = false;
                }
                hit[j] = true;
            }
        }
        if !injective {
            violations.push(format!("arrow {k} is not injective on its source fiber"));
        }
        for j in (0..n).filter(|&j| sh.total[j].0 == shape.target[k]) {
            if !hit[j] {
                violations.push(format!(
                    "arrow {k} misses point {j} in its target fiber"
                ));
            }
        }
    }

    // Continuity of the action on the space of defined (arrow, point) pairs.
    let mut pairs = Vec::new();
    let mut values = Vec::new();
    let mut total_pairs = true;
    for k in 0..shape.arrow_count() {
        for i in 0..n {
            if let Some(j) = sh.action[k][i] {
                pairs.push((k, i));
                values.push(j);
            } else if sh.total[i].0 == shape.source[k] {
                total_pairs = false;
            }
        }
    }
    if total_pairs {
        let pair_space =
            FiniteTopology::product_subspace(&sh.base.arrows, &sh.topology, &pairs);
        if let Err(e) = is_continuous(&values, &pair_space, &sh.topology) {
            violations.push(format!("the action map is not continuous: {e}"));
        }
    }

    violations
}

/// The one-pass orbit closure of a set of total points: every image of a
/// member under every arrow. Because the arrows of a groupoid are closed
/// under composition, a single pass already reaches everything a fixpoint
/// iteration would, and identity arrows keep the original points in.
pub fn stabilize(sh: &EquivariantSheaf, u: &PointSet) -> PointSet {
    let mut result = point_set(sh.total.len(), []);
    for i in u.ones() {
        for k in 0..sh.base.shape.arrow_count() {
            if let Some(j) = sh.action[k][i] {
                result.insert(j);
            }
        }
    }
    result
}

/// A morphism of equivariant sheaves over the same base: a fiber-preserving,
/// equivariant, continuous map of total spaces. Over étale projections such
/// a map is automatically open; [`check_morphism`] decides all of it.
#[derive(Debug, Clone)]
pub struct SheafMorphism {
    pub source: EquivariantSheaf,
    pub target: EquivariantSheaf,
    /// `map[i]` is the target total point under the source total point `i`.
    pub map: Vec<usize>,
}

impl SheafMorphism {
    /// Build and validate a morphism in one step.
    pub fn new(
        source: EquivariantSheaf,
        target: EquivariantSheaf,
        map: Vec<usize>,
    ) -> Result<Self> {
        let morphism = Self {
            source,
            target,
            map,
        };
        check_morphism(&morphism)?;
        Ok(morphism)
    }

    /// The identity morphism of a sheaf.
    pub fn identity(sh: &EquivariantSheaf) -> Self {
        Self {
            source: sh.clone(),
            target: sh.clone(),
            map: (0..sh.total.len()).collect(),
        }
    }
}

/// Decide whether the data of a [`SheafMorphism`] is a morphism: same base
/// groupoid (same shape, same topologies), totality, fiber preservation,
/// equivariance, and continuity.
pub fn check_morphism(m: &SheafMorphism) -> Result<()> {
    if !m.source.base.same_as(&m.target.base) {
        return Err(Error::Invalid(
            "sheaf morphism endpoints live over different base groupoids".into(),
        ));
    }
    if m.map.len() != m.source.total.len() {
        return Err(Error::Invalid(format!(
            "sheaf morphism map covers {} points, total space has {}",
            m.map.len(),
            m.source.total.len()
        )));
    }
    if let Some(&v) = m.map.iter().find(|&&v| v >= m.target.total.len()) {
        return Err(Error::Invalid(format!(
            "sheaf morphism maps into missing target point {v}"
        )));
    }
    for (i, &v) in m.map.iter().enumerate() {
        if m.target.total[v].0 != m.source.total[i].0 {
            return Err(Error::Invalid(format!(
                "sheaf morphism moves point {i} across fibers: over {} to over {}",
                m.source.total[i].0, m.target.total[v].0
            )));
        }
    }
    for k in 0..m.source.base.shape.arrow_count() {
        for i in 0..m.source.total.len() {
            if let Some(j) = m.source.action[k][i] {
                if m.target.action[k][m.map[i]] != Some(m.map[j]) {
                    return Err(Error::Invalid(format!(
                        "sheaf morphism is not equivariant at arrow {k}, point {i}"
                    )));
                }
            }
        }
    }
    is_continuous(&m.map, &m.source.topology, &m.target.topology)?;
    Ok(())
}

/// Enumerate every sheaf morphism from `a` to `b` as raw total-space maps,
/// in lexicographic order of the choices at orbit representatives.
///
/// A morphism is determined by its values on one representative per orbit
/// of the action; the rest is forced by equivariance. The search assigns
/// each representative a point of the matching target fiber, propagates
/// along every arrow out of the representative (pruning when two arrows
/// force different values), and keeps the assignments whose induced total
/// map is continuous. Fiber preservation and equivariance hold by
/// construction; continuity is the only filter left.
pub fn sheaf_homs(
    a: &EquivariantSheaf,
    b: &EquivariantSheaf,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    if !a.base.same_as(&b.base) {
        return Err(Error::Invalid(
            "hom-set endpoints live over different base groupoids".into(),
        ));
    }
    let n = a.total.len();
    let arrow_count = a.base.shape.arrow_count();

    // Orbits close in one action step, so representatives are the points
    // not reached from any earlier point.
    let mut in_orbit = vec![false; n];
    let mut reps = Vec::new();
    for i in 0..n {
        if in_orbit[i] {
            continue;
        }
        reps.push(i);
        for k in 0..arrow_count {
            if let Some(j) = a.action[k][i] {
                in_orbit[j] = true;
            }
        }
    }

    let fibers_b: Vec<Vec<usize>> = (0..b.base.shape.object_count)
        .map(|x| b.fiber(x))
        .collect();

    let mut estimate: u128 = 1;
    for &r in &reps {
        estimate = estimate.saturating_mul(fibers_b[a.total[r].0].len().max(1) as u128);
    }
    if estimate > limits.sheaf_ceiling {
        return Err(Error::ResourceGuard {
            what: "sheaf hom-set enumeration".into(),
            estimate,
            ceiling: limits.sheaf_ceiling,
        });
    }

    let mut homs = Vec::new();
    let mut val = vec![usize::MAX; n];
    search_homs(a, b, &fibers_b, &reps, 0, &mut val, &mut homs);
    Ok(homs)
}

fn search_homs(
    a: &EquivariantSheaf,
    b: &EquivariantSheaf,
    fibers_b: &[Vec<usize>],
    reps: &[usize],
    depth: usize,
    val: &mut Vec<usize>,
    homs: &mut Vec<Vec<usize>>,
) {
    if depth == reps.len() {
        if is_continuous(val, &a.topology, &b.topology).is_ok() {
            homs.push(val.clone());
        }
        return;
    }
    let r = reps[depth];
    for &v in &fibers_b[a.total[r].0] {
        let mut assigned = Vec::new();
        let mut consistent = true;
        for k in 0..a.base.shape.arrow_count() {
            let Some(j) = a.action[k][r] else { continue };
            let Some(w) = b.action[k][v] else {
                consistent = false;
                break;
            };
            if val[j] == usize::MAX {
                val[j] = w;
                assigned.push(j);
            } else if val[j] != w {
                consistent = false;
                break;
            }
        }
        if consistent {
            search_homs(a, b, fibers_b, reps, depth + 1, val, homs);
        }
        for j in assigned {
            val[j] = usize::MAX;
        }
    }
}

/// The isomorphisms among the homs from `a` to `b`: the bijective morphisms
/// whose inverse is again a morphism, i.e. the bijective open ones.
pub fn sheaf_isomorphisms(
    a: &EquivariantSheaf,
    b: &EquivariantSheaf,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let homs = sheaf_homs(a, b, limits)?;
    Ok(homs
        .into_iter()
        .filter(|map| {
            if a.total.len() != b.total.len() {
                return false;
            }
            let mut seen = vec![false; b.total.len()];
            for &v in map {
                if seen[v] {
                    return false;
                }
                seen[v] = true;
            }
            is_open_map(map, &a.topology, &b.topology).is_ok()
        })
        .collect())
}
