//! Classical Stone duality at finite scale — the posetal shadow of the
//! sheaf machinery.
//!
//! A finite Boolean algebra is the clopen algebra of its spectrum, and a
//! finite distributive lattice is the lattice of compact opens of its
//! spectral space. Both directions are computed exactly here: spectra as
//! finite topologies on the join-irreducible elements, algebras back as
//! clopen or open-set lattices, and isomorphism checked by explicit search.
//! Every finite topology in this crate is generated from a finite
//! subbasis, hence Alexandrov, so homeomorphism is decided through
//! minimal-neighbourhood-preserving bijections.
//!
//! The bridge to the rest of the crate is [`stable_subterminal_lattice`]:
//! the subterminal equivariant sheaves over a model groupoid — its
//! isomorphism-stable open sets — form a distributive lattice, and when
//! the groupoid has only identity arrows the whole duality collapses to
//! the classical posetal case.

use crate::error::{Error, Result};
use crate::model::{Limits, ModelGroupoid};
use crate::sheaf::{stabilize, terminal_sheaf};
use crate::topology::{
    model_topological_groupoid, point_set, FiniteTopology, LogicalTopologies, NamedOpen, PointSet,
};

/// A finite lattice presented by its order relation. Construction verifies
/// the partial-order laws and the existence of all binary meets and joins,
/// and precomputes their tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    leq: Vec<Vec<bool>>,
    meet: Vec<Vec<usize>>,
    join: Vec<Vec<usize>>,
}

impl FiniteLattice {
    /// Build a lattice from an order matrix, rejecting anything that is
    /// not a partial order or lacks a meet or join somewhere.
    pub fn new(size: usize, leq: Vec<Vec<bool>>) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("a lattice needs at least one element".into()));
        }
        if leq.len() != size || leq.iter().any(|row| row.len() != size) {
            return Err(Error::Invalid("order matrix has the wrong shape".into()));
        }
        for a in 0..size {
            if !leq[a][a] {
                return Err(Error::Invalid(format!("order is not reflexive at {a}")));
            }
            for b in 0..size {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::Invalid(format!(
                        "order is not antisymmetric at {a}, {b}"
                    )));
                }
                for c in 0..size {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::Invalid(format!(
                            "order is not transitive at {a}, {b}, {c}"
                        )));
                    }
                }
            }
        }
        let bound = |a: usize, b: usize, lower: bool| -> Option<usize> {
            let cmp = |x: usize, y: usize| if lower { leq[x][y] } else { leq[y][x] };
            let bounds: Vec<usize> = (0..size).filter(|&x| cmp(x, a) && cmp(x, b)).collect();
            bounds
                .iter()
                .copied()
                .find(|&x| bounds.iter().all(|&y| cmp(y, x)))
        };
        let mut meet = vec![vec![0; size]; size];
        let mut join = vec![vec![0; size]; size];
        for a in 0..size {
            for b in 0..size {
                meet[a][b] = bound(a, b, true).ok_or_else(|| {
                    Error::Invalid(format!("elements {a} and {b} have no meet"))
                })?;
                join[a][b] = bound(a, b, false).ok_or_else(|| {
                    Error::Invalid(format!("elements {a} and {b} have no join"))
                })?;
            }
        }
        Ok(FiniteLattice {
            size,
            leq,
            meet,
            join,
        })
    }

    /// A lattice from a family of distinct point sets ordered by inclusion;
    /// the family must be closed under intersection and union for the
    /// construction to succeed.
    pub fn from_sets(sets: &[PointSet]) -> Result<Self> {
        for (i, s) in sets.iter().enumerate() {
            for t in &sets[i + 1..] {
                if s == t {
                    return Err(Error::Invalid("duplicate set in the family".into()));
                }
            }
        }
        let size = sets.len();
        let leq = (0..size)
            .map(|a| (0..size).map(|b| sets[a].is_subset(&sets[b])).collect())
            .collect();
        FiniteLattice::new(size, leq)
    }

    /// The chain 0 < 1 < … < n-1.
    pub fn chain(n: usize) -> Result<Self> {
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        FiniteLattice::new(n, leq)
    }

    /// The Boolean algebra of all subsets of an `atoms`-element set;
    /// element `i` is the subset with bitmask `i`.
    pub fn powerset(atoms: u32) -> Result<Self> {
        if atoms > 16 {
            return Err(Error::Invalid("powerset algebra capped at 16 atoms".into()));
        }
        let size = 1usize << atoms;
        let leq = (0..size)
            .map(|a| (0..size).map(|b| a & b == a).collect())
            .collect();
        FiniteLattice::new(size, leq)
    }

    /// The free bounded distributive lattice on two generators: six
    /// elements 0 < a∧b < a, b < a∨b < 1, realized as set unions inside a
    /// four-point carrier so that 1 stays strictly above a∨b.
    pub fn free_distributive_on_two() -> Result<Self> {
        let sets = [
            point_set(4, []),
            point_set(4, [0]),
            point_set(4, [0, 1]),
            point_set(4, [0, 2]),
            point_set(4, [0, 1, 2]),
            point_set(4, [0, 1, 2, 3]),
        ];
        FiniteLattice::from_sets(&sets)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn bottom(&self) -> usize {
        (0..self.size)
            .find(|&a| (0..self.size).all(|b| self.leq[a][b]))
            .expect("a finite lattice has a bottom")
    }

    pub fn top(&self) -> usize {
        (0..self.size)
            .find(|&a| (0..self.size).all(|b| self.leq[b][a]))
            .expect("a finite lattice has a top")
    }

    /// Whether every pair of elements is comparable.
    pub fn is_chain(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).all(|b| self.leq[a][b] || self.leq[b][a]))
    }

    /// Check the distributive law on every triple.
    pub fn is_distributive(&self) -> bool {
        (0..self.size).all(|a| {
            (0..self.size).all(|b| {
                (0..self.size).all(|c| {
                    self.meet(a, self.join(b, c))
                        == self.join(self.meet(a, b), self.meet(a, c))
                })
            })
        })
    }

    /// The complement of `a`, when one exists.
    pub fn complement(&self, a: usize) -> Option<usize> {
        let (bot, top) = (self.bottom(), self.top());
        (0..self.size).find(|&b| self.meet(a, b) == bot && self.join(a, b) == top)
    }

    /// Whether the lattice is a Boolean algebra: distributive with every
    /// element complemented.
    pub fn is_boolean(&self) -> bool {
        self.is_distributive() && (0..self.size).all(|a| self.complement(a).is_some())
    }

    /// Elements that are not joins of anything strictly below them (and
    /// not the bottom). In a Boolean algebra these are exactly the atoms.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        let bot = self.bottom();
        (0..self.size)
            .filter(|&x| {
                x != bot
                    && (0..self.size).all(|a| {
                        (0..self.size).all(|b| self.join(a, b) != x || a == x || b == x)
                    })
            })
            .collect()
    }
}

/// Decide lattice isomorphism by backtracking over order-preserving
/// bijections, pruned by the up-set and down-set size invariants. An order
/// isomorphism of lattices preserves meets and joins automatically.
pub fn lattice_isomorphic(a: &FiniteLattice, b: &FiniteLattice) -> bool {
    if a.size != b.size {
        return false;
    }
    let profile = |l: &FiniteLattice, x: usize| -> (usize, usize) {
        (
            (0..l.size).filter(|&y| l.leq(y, x)).count(),
            (0..l.size).filter(|&y| l.leq(x, y)).count(),
        )
    };
    let pa: Vec<_> = (0..a.size).map(|x| profile(a, x)).collect();
    let pb: Vec<_> = (0..b.size).map(|x| profile(b, x)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    fn extend(
        a: &FiniteLattice,
        b: &FiniteLattice,
        pa: &[(usize, usize)],
        pb: &[(usize, usize)],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = image.len();
        if x == a.size {
            return true;
        }
        for y in 0..b.size {
            if used[y] || pa[x] != pb[y] {
                continue;
            }
            if (0..x).any(|z| a.leq(z, x) != b.leq(image[z], y) || a.leq(x, z) != b.leq(y, image[z]))
            {
                continue;
            }
            image.push(y);
            used[y] = true;
            if extend(a, b, pa, pb, image, used) {
                return true;
            }
            image.pop();
            used[y] = false;
        }
        false
    }
    extend(a, b, &pa, &pb, &mut Vec::new(), &mut vec![false; b.size])
}

/// Decide homeomorphism of finite topologies. Every topology in this crate
/// is generated from a finite subbasis, hence Alexandrov, so a bijection
/// is a homeomorphism exactly when it matches minimal neighbourhoods.
pub fn homeomorphic(a: &FiniteTopology, b: &FiniteTopology) -> bool {
    let n = a.point_count();
    if n != b.point_count() {
        return false;
    }
    fn extend(
        a: &FiniteTopology,
        b: &FiniteTopology,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let x = image.len();
        if x == a.point_count() {
            return true;
        }
        'candidates: for y in 0..b.point_count() {
            if used[y]
                || a.min_neighborhood(x).count_ones(..) != b.min_neighborhood(y).count_ones(..)
            {
                continue;
            }
            for z in 0..x {
                if a.min_neighborhood(x).contains(z) != b.min_neighborhood(y).contains(image[z])
                    || a.min_neighborhood(z).contains(x)
                        != b.min_neighborhood(image[z]).contains(y)
                {
                    continue 'candidates;
                }
            }
            image.push(y);
            used[y] = true;
            if extend(a, b, image, used) {
                return true;
            }
            image.pop();
            used[y] = false;
        }
        false
    }
    extend(a, b, &mut Vec::new(), &mut vec![false; n])
}

/// Order a family of point sets by size and then contents, for
/// deterministic lattice element numbering.
fn sort_sets(sets: &mut [PointSet]) {
    sets.sort_by_key(|s| (s.count_ones(..), s.ones().collect::<Vec<_>>()));
}

/// The spectrum of a finite distributive lattice: points are the
/// join-irreducible elements (equivalently, the principal prime filters),
/// and each lattice element `u` contributes the basic open of all points
/// below `u`.
pub fn spectral_space(lat: &FiniteLattice) -> Result<FiniteTopology> {
    if !lat.is_distributive() {
        return Err(Error::Invalid(
            "the spectrum requires a distributive lattice".into(),
        ));
    }
    let points = lat.join_irreducibles();
    let subbasis = (0..lat.size)
        .map(|u| NamedOpen {
            name: format!("below({u})"),
            points: point_set(
                points.len(),
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, &j)| lat.leq(j, u))
                    .map(|(p, _)| p),
            ),
        })
        .collect();
    Ok(FiniteTopology::from_subbasis(points.len(), subbasis))
}

/// The Stone space of a finite Boolean algebra: its spectrum, which is
/// discrete on the atoms.
pub fn stone_space(ba: &FiniteLattice) -> Result<FiniteTopology> {
    if !ba.is_boolean() {
        return Err(Error::Invalid(
            "the Stone space requires a Boolean algebra".into(),
        ));
    }
    spectral_space(ba)
}

/// The Boolean algebra of clopen sets of a finite space, ordered by
/// inclusion.
pub fn clopen_algebra(space: &FiniteTopology, limits: &Limits) -> Result<FiniteLattice> {
    let opens = space.opens(limits.lattice_ceiling)?;
    let n = space.point_count();
    let mut clopens: Vec<PointSet> = opens
        .iter()
        .filter(|u| {
            let complement = point_set(n, (0..n).filter(|&p| !u.contains(p)));
            opens.contains(&complement)
        })
        .cloned()
        .collect();
    sort_sets(&mut clopens);
    FiniteLattice::from_sets(&clopens)
}

/// The lattice of compact open sets of a finite space; every open set of a
/// finite space is compact, so this is the full open-set lattice.
pub fn compact_opens(space: &FiniteTopology, limits: &Limits) -> Result<FiniteLattice> {
    let mut opens = space.opens(limits.lattice_ceiling)?;
    sort_sets(&mut opens);
    FiniteLattice::from_sets(&opens)
}

/// Round trip a Boolean algebra through its Stone space: the clopen
/// algebra of the spectrum must be isomorphic to the original.
pub fn boolean_round_trip(ba: &FiniteLattice, limits: &Limits) -> Result<()> {
    let space = stone_space(ba)?;
    let back = clopen_algebra(&space, limits)?;
    if !lattice_isomorphic(ba, &back) {
        return Err(Error::Invalid(format!(
            "the clopen algebra of the spectrum has {} elements, the algebra {}",
            back.size(),
            ba.size()
        )));
    }
    Ok(())
}

/// Round trip a distributive lattice through its spectral space: the
/// compact opens of the spectrum must be isomorphic to the original.
pub fn distributive_round_trip(lat: &FiniteLattice, limits: &Limits) -> Result<()> {
    let space = spectral_space(lat)?;
    let back = compact_opens(&space, limits)?;
    if !lattice_isomorphic(lat, &back) {
        return Err(Error::Invalid(format!(
            "the compact opens of the spectrum form a {}-element lattice, the input has {}",
            back.size(),
            lat.size()
        )));
    }
    Ok(())
}

/// Round trip a finite space through its clopen algebra: take clopens,
/// then the Stone space of that algebra, and report whether the result is
/// homeomorphic to the input. This holds exactly for the spaces on the
/// Boolean side of the duality; a connected non-trivial space loses its
/// topology and comes back smaller.
pub fn clopen_round_trip(space: &FiniteTopology, limits: &Limits) -> Result<bool> {
    let ba = clopen_algebra(space, limits)?;
    let back = stone_space(&ba)?;
    Ok(homeomorphic(space, &back))
}

/// The lattice of isomorphism-stable open sets of the model space — the
/// subterminal objects of the equivariant sheaf category, ordered by
/// inclusion. Always a distributive lattice; Boolean exactly when the
/// stable opens are complemented, as happens for a propositional theory.
pub fn stable_subterminal_lattice(
    g: &ModelGroupoid,
    tops: &LogicalTopologies,
    limits: &Limits,
) -> Result<FiniteLattice> {
    let h = model_topological_groupoid(g, tops);
    let terminal = terminal_sheaf(&h);
    let opens = terminal.topology.opens(limits.lattice_ceiling)?;
    let mut stable: Vec<PointSet> = opens
        .into_iter()
        .filter(|u| stabilize(&terminal, u) == *u)
        .collect();
    sort_sets(&mut stable);
    FiniteLattice::from_sets(&stable)
}
