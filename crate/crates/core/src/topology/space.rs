//! Finite topologies, exactly. A finite topology is determined by the
//! minimal open neighbourhood of each point (the intersection of all opens
//! containing it), so the type stores the generating subbasis — with names,
//! for reporting — plus the per-point minimal neighbourhoods derived from
//! it. Every decision procedure works on minimal neighbourhoods and is
//! exact; the full open-set lattice, which can be exponential in the point
//! count, is materialized only on demand behind a ceiling.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A set of points of a finite carrier, as a bitset.
pub type PointSet = FixedBitSet;

/// Build a point set over a carrier of `n` points.
pub fn point_set(n: usize, points: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    for p in points {
        s.insert(p);
    }
    s
}

/// The full carrier as a point set.
pub fn full_set(n: usize) -> PointSet {
    point_set(n, 0..n)
}

/// A subbasis element with a human-readable provenance name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedOpen {
    pub name: String,
    pub points: PointSet,
}

/// A topology on `0..point_count`, generated by a named subbasis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    point_count: usize,
    subbasis: Vec<NamedOpen>,
    /// `min_nbhd[x]` = the smallest open set containing `x`.
    min_nbhd: Vec<PointSet>,
}

impl FiniteTopology {
    /// The topology generated by the given subbasis: finite intersections
    /// form a basis, unions of those are the opens.
    pub fn from_subbasis(point_count: usize, subbasis: Vec<NamedOpen>) -> Self {
        let min_nbhd = (0..point_count)
            .map(|x| {
                let mut min = full_set(point_count);
                for open in &subbasis {
                    if open.points.contains(x) {
                        min.intersect_with(&open.points);
                    }
                }
                min
            })
            .collect();
        Self {
            point_count,
            subbasis,
            min_nbhd,
        }
    }

    /// Reconstruct a topology from its minimal neighbourhoods. Fails unless
    /// the family is reflexive (`x ∈ min(x)`) and transitive (`y ∈ min(x)`
    /// implies `min(y) ⊆ min(x)`), which is exactly what makes it the
    /// minimal-neighbourhood family of an actual topology.
    pub fn from_min_neighborhoods(min_nbhd: Vec<PointSet>) -> Result<Self> {
        let point_count = min_nbhd.len();
        for (x, min) in min_nbhd.iter().enumerate() {
            if !min.contains(x) {
                return Err(Error::Invalid(format!(
                    "minimal neighbourhood of point {x} does not contain it"
                )));
            }
            for y in min.ones() {
                if !min_nbhd[y].is_subset(min) {
                    return Err(Error::Invalid(format!(
                        "minimal neighbourhoods are not transitive: {y} ∈ min({x}) but \
                         min({y}) ⊄ min({x})"
                    )));
                }
            }
        }
        let subbasis = min_nbhd
            .iter()
            .enumerate()
            .map(|(x, points)| NamedOpen {
                name: format!("min({x})"),
                points: points.clone(),
            })
            .collect();
        Ok(Self {
            point_count,
            subbasis,
            min_nbhd,
        })
    }

    /// The discrete topology (every subset open).
    pub fn discrete(point_count: usize) -> Self {
        let subbasis = (0..point_count)
            .map(|x| NamedOpen {
                name: format!("{{{x}}}"),
                points: point_set(point_count, [x]),
            })
            .collect();
        Self::from_subbasis(point_count, subbasis)
    }

    /// The indiscrete topology (only ∅ and the carrier open); a test
    /// fixture for negative checks.
    pub fn indiscrete(point_count: usize) -> Self {
        Self::from_subbasis(point_count, Vec::new())
    }

    pub fn point_count(&self) -> usize {
        self.point_count
    }

    pub fn subbasis(&self) -> &[NamedOpen] {
        &self.subbasis
    }

    pub fn min_neighborhood(&self, x: usize) -> &PointSet {
        &self.min_nbhd[x]
    }

    /// Is `s` open — does it contain the minimal neighbourhood of each of
    /// its points?
    pub fn is_open(&self, s: &PointSet) -> bool {
        self.open_violation(s).is_none()
    }

    /// The witness for non-openness: a point of `s` whose minimal
    /// neighbourhood escapes `s`.
    pub fn open_violation(&self, s: &PointSet) -> Option<usize> {
        s.ones().find(|&x| !self.min_nbhd[x].is_subset(s))
    }

    /// Two topologies on the same carrier are equal iff their minimal
    /// neighbourhoods agree (subbases may differ).
    pub fn same_topology(&self, other: &FiniteTopology) -> bool {
        self.point_count == other.point_count && self.min_nbhd == other.min_nbhd
    }

    /// Materialize the whole open-set lattice, in canonical order
    /// (lexicographic on the sorted point lists). Every open is a union of
    /// minimal neighbourhoods, so a union-closure pass from them is
    /// complete. Guarded: the lattice can be exponential in the carrier.
    pub fn opens(&self, ceiling: usize) -> Result<Vec<PointSet>> {
        let mut known: BTreeSet<Vec<usize>> = BTreeSet::new();
        known.insert(Vec::new());
        let mut work: Vec<PointSet> = vec![PointSet::with_capacity(self.point_count)];
        while let Some(open) = work.pop() {
            for x in 0..self.point_count {
                if open.contains(x) {
                    continue;
                }
                let mut bigger = open.clone();
                bigger.union_with(&self.min_nbhd[x]);
                let key: Vec<usize> = bigger.ones().collect();
                if known.insert(key) {
                    if known.len() > ceiling {
                        return Err(Error::ResourceGuard {
                            what: "open-set lattice materialization".into(),
                            estimate: known.len() as u128,
                            ceiling: ceiling as u128,
                        });
                    }
                    work.push(bigger);
                }
            }
        }
        Ok(known
            .into_iter()
            .map(|points| point_set(self.point_count, points))
            .collect())
    }

    /// The subspace topology on the listed points, reindexed positionally:
    /// subspace minimal neighbourhoods are the ambient ones intersected
    /// with the subset, which is exact for finite spaces.
    pub fn subspace(&self, points: &[usize]) -> FiniteTopology {
        let min_nbhd: Vec<PointSet> = points
            .iter()
            .map(|&x| {
                point_set(
                    points.len(),
                    points
                        .iter()
                        .enumerate()
                        .filter_map(|(j, &y)| self.min_nbhd[x].contains(y).then_some(j)),
                )
            })
            .collect();
        Self::from_min_neighborhoods(min_nbhd)
            .expect("restricting a specialization preorder yields a preorder")
    }

    /// The subspace of the product of `a` and `b` carried by the given
    /// pairs: minimal neighbourhoods are the componentwise ones restricted
    /// to the subspace, which is exact for finite spaces.
    pub fn product_subspace(
        a: &FiniteTopology,
        b: &FiniteTopology,
        pairs: &[(usize, usize)],
    ) -> Self {
        let min_nbhd: Vec<PointSet> = pairs
            .iter()
            .map(|&(x, y)| {
                point_set(
                    pairs.len(),
                    pairs.iter().enumerate().filter_map(|(k, &(u, v))| {
                        (a.min_nbhd[x].contains(u) && b.min_nbhd[y].contains(v)).then_some(k)
                    }),
                )
            })
            .collect();
        Self::from_min_neighborhoods(min_nbhd)
            .expect("componentwise minimal neighbourhoods form a topology")
    }
}
