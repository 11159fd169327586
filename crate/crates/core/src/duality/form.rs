//! The catalog of formal sheaves over a topological groupoid: every
//! equivariant sheaf with fibers drawn from a bounded atom universe that
//! passes the formality conditions — decidable equality, small fibers, open
//! element domains with continuous constant sections, and open transport
//! sets. Over a model groupoid this is the semantic side of the duality;
//! over an arbitrary topological groupoid it is the value of the sheaf
//! functor on that groupoid.
//!
//! Enumeration is by fiber assignment: choose a small subset of the atom
//! universe per base object, monotone along minimal neighbourhoods and of
//! constant size along arrows, then choose a bijection per arrow subject to
//! functoriality. The topology on the total space is forced — the minimal
//! neighbourhood of `(x, a)` is the minimal neighbourhood of `x` with the
//! element pinned — and the formality checker has the final word on every
//! candidate.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::model::{Atom, Limits};
use crate::sheaf::{
    check_formal_conditions, coproduct_sheaf, product_sheaf, sheaf_isomorphisms, stabilize,
    subsheaf, terminal_sheaf, Elem, EquivariantSheaf, UniverseMode,
};
use crate::topology::{point_set, FiniteTopology, NamedOpen, TopologicalGroupoid};

/// The formal-sheaf catalog over one topological groupoid.
#[derive(Debug, Clone)]
pub struct FormCategory {
    pub base: TopologicalGroupoid,
    pub universe: u32,
    pub fiber_cap: usize,
    pub sheaves: Vec<EquivariantSheaf>,
}

impl FormCategory {
    /// Position of a member equal to `sh` on the nose: same base, same
    /// total space, same action tables, same topology.
    pub fn find_equal(&self, sh: &EquivariantSheaf) -> Option<usize> {
        self.sheaves.iter().position(|m| {
            m.base.same_as(&sh.base)
                && m.total == sh.total
                && m.action == sh.action
                && m.topology.same_topology(&sh.topology)
        })
    }

    /// Position of a member isomorphic to `sh` as an equivariant sheaf.
    /// Fiber sizes are compared first; the full isomorphism search runs
    /// only on the survivors.
    pub fn find_isomorphic(
        &self,
        sh: &EquivariantSheaf,
        limits: &Limits,
    ) -> Result<Option<usize>> {
        let sizes = fiber_sizes(sh);
        for (i, m) in self.sheaves.iter().enumerate() {
            if !m.base.same_as(&sh.base) || fiber_sizes(m) != sizes {
                continue;
            }
            if !sheaf_isomorphisms(m, sh, limits)?.is_empty() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn fiber_sizes(sh: &EquivariantSheaf) -> Vec<usize> {
    let mut sizes = vec![0; sh.base.shape.object_count];
    for (x, _) in &sh.total {
        sizes[*x] += 1;
    }
    sizes
}

fn mask_atoms(mask: u64) -> Vec<Atom> {
    (0..64).filter(|a| mask & (1 << a) != 0).collect()
}

/// Build the full catalog of formal sheaves over `h` with fibers inside
/// `{0, …, universe-1}` of size at most `fiber_cap`.
pub fn form_category(
    h: &TopologicalGroupoid,
    universe: u32,
    fiber_cap: usize,
    limits: &Limits,
) -> Result<FormCategory> {
    if universe == 0 || fiber_cap == 0 {
        return Err(Error::Invalid(
            "the formal-sheaf catalog needs at least one atom and a positive fiber cap".into(),
        ));
    }
    if universe >= 32 {
        return Err(Error::ResourceGuard {
            what: "formal sheaf enumeration".into(),
            estimate: u128::MAX,
            ceiling: limits.sheaf_ceiling,
        });
    }
    let object_count = h.shape.object_count;
    let arrow_count = h.shape.arrow_count();
    let cap = fiber_cap.min(universe as usize);
    let subsets: Vec<u64> = (0..1u64 << universe)
        .filter(|m| (m.count_ones() as usize) <= cap)
        .collect();
    let is_identity: Vec<bool> = (0..arrow_count)
        .map(|k| h.shape.identity[h.shape.source[k]] == k)
        .collect();
    let non_identity = is_identity.iter().filter(|b| !**b).count();
    let cap_factorial: u128 = (1..=cap as u128).product();
    let estimate = (subsets.len() as u128)
        .saturating_pow(object_count as u32)
        .saturating_mul(cap_factorial.saturating_pow(non_identity as u32));
    if estimate > limits.sheaf_ceiling {
        return Err(Error::ResourceGuard {
            what: "formal sheaf enumeration".into(),
            estimate,
            ceiling: limits.sheaf_ceiling,
        });
    }

    let mut sheaves = Vec::new();
    let assignments = (0..object_count)
        .map(|_| subsets.iter().copied())
        .multi_cartesian_product();
    for masks in assignments {
        // Fibers grow along specialization and keep their size along
        // arrows; everything else is hopeless before bijections are even
        // chosen.
        let monotone = (0..object_count).all(|x| {
            h.objects
                .min_neighborhood(x)
                .ones()
                .all(|y| masks[x] & masks[y] == masks[x])
        });
        if !monotone {
            continue;
        }
        if (0..arrow_count).any(|k| {
            masks[h.shape.source[k]].count_ones() != masks[h.shape.target[k]].count_ones()
        }) {
            continue;
        }
        let candidate_graphs: Vec<Vec<Vec<(Atom, Atom)>>> = (0..arrow_count)
            .map(|k| {
                let src = mask_atoms(masks[h.shape.source[k]]);
                let tgt = mask_atoms(masks[h.shape.target[k]]);
                if is_identity[k] {
                    vec![src.iter().map(|&a| (a, a)).collect()]
                } else {
                    tgt.iter()
                        .copied()
                        .permutations(tgt.len())
                        .map(|perm| src.iter().copied().zip(perm).collect())
                        .collect()
                }
            })
            .collect();
        let choices = candidate_graphs
            .iter()
            .map(|c| c.iter())
            .multi_cartesian_product();
        for graphs in choices {
            if !composition_holds(h, &graphs) {
                continue;
            }
            let sh = assemble_sheaf(h, &masks, &graphs);
            if sh.check().is_ok()
                && check_formal_conditions(&sh, universe, UniverseMode::Atoms).all_pass()
            {
                sheaves.push(sh);
            }
        }
    }
    Ok(FormCategory {
        base: h.clone(),
        universe,
        fiber_cap,
        sheaves,
    })
}

fn composition_holds(h: &TopologicalGroupoid, graphs: &[&Vec<(Atom, Atom)>]) -> bool {
    let apply = |graph: &[(Atom, Atom)], a: Atom| {
        graph
            .iter()
            .find(|(s, _)| *s == a)
            .map(|(_, t)| *t)
            .expect("graph sources cover the fiber")
    };
    for g in 0..h.shape.arrow_count() {
        for f in 0..h.shape.arrow_count() {
            if let Some(c) = h.shape.compose[g][f] {
                let composed: Vec<(Atom, Atom)> = graphs[f]
                    .iter()
                    .map(|&(a, b)| (a, apply(graphs[g], b)))
                    .collect();
                if composed != *graphs[c] {
                    return false;
                }
            }
        }
    }
    true
}

fn assemble_sheaf(
    h: &TopologicalGroupoid,
    masks: &[u64],
    graphs: &[&Vec<(Atom, Atom)>],
) -> EquivariantSheaf {
    let mut total: Vec<(usize, Elem)> = Vec::new();
    for (x, mask) in masks.iter().enumerate() {
        for a in mask_atoms(*mask) {
            total.push((x, Elem::Tuple(vec![a])));
        }
    }
    let index_of = |x: usize, a: Atom| {
        total
            .binary_search(&(x, Elem::Tuple(vec![a])))
            .expect("assembled point is present")
    };
    let action: Vec<Vec<Option<usize>>> = (0..h.shape.arrow_count())
        .map(|k| {
            total
                .iter()
                .map(|(x, e)| {
                    if *x != h.shape.source[k] {
                        return None;
                    }
                    let Elem::Tuple(t) = e else { unreachable!() };
                    let b = graphs[k]
                        .iter()
                        .find(|(s, _)| *s == t[0])
                        .map(|(_, t)| *t)
                        .expect("graph sources cover the fiber");
                    Some(index_of(h.shape.target[k], b))
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
                    .filter(|(_, (x, _))| open.points.contains(*x))
                    .map(|(i, _)| i),
            ),
        })
        .collect();
    let atoms: std::collections::BTreeSet<Atom> = total
        .iter()
        .map(|(_, e)| {
            let Elem::Tuple(t) = e else { unreachable!() };
            t[0]
        })
        .collect();
    for a in atoms {
        subbasis.push(NamedOpen {
            name: format!("<element {a}>"),
            points: point_set(
                total.len(),
                total
                    .iter()
                    .enumerate()
                    .filter(|(_, (_, e))| *e == Elem::Tuple(vec![a]))
                    .map(|(i, _)| i),
            ),
        });
    }
    let topology = FiniteTopology::from_subbasis(total.len(), subbasis);
    EquivariantSheaf {
        base: h.clone(),
        total,
        topology,
        action,
        formula: None,
    }
}

/// Verify closure of the catalog under the canonical constructions:
/// terminal and initial sheaves, binary products and coproducts whose
/// fibers stay within representable range, and all subsheaves on stable
/// opens. Products and coproducts are matched up to isomorphism;
/// subsheaves must be members on the nose.
pub fn check_form_closure(form: &FormCategory, limits: &Limits) -> Result<()> {
    let representable = form.fiber_cap.min(form.universe as usize);
    if form
        .find_isomorphic(&terminal_sheaf(&form.base), limits)?
        .is_none()
    {
        return Err(Error::Invalid(
            "formal-sheaf catalog is missing the terminal sheaf".into(),
        ));
    }
    if !form.sheaves.iter().any(|m| m.total.is_empty()) {
        return Err(Error::Invalid(
            "formal-sheaf catalog is missing the initial sheaf".into(),
        ));
    }
    for (i, a) in form.sheaves.iter().enumerate() {
        for (j, b) in form.sheaves.iter().enumerate() {
            let sa = fiber_sizes(a);
            let sb = fiber_sizes(b);
            if sa
                .iter()
                .zip(&sb)
                .all(|(x, y)| x * y <= representable)
            {
                let p = product_sheaf(a, b)?;
                if form.find_isomorphic(&p, limits)?.is_none() {
                    return Err(Error::Invalid(format!(
                        "catalog is not closed under products: pair ({i}, {j})"
                    )));
                }
            }
            if sa
                .iter()
                .zip(&sb)
                .all(|(x, y)| x + y <= representable)
            {
                let c = coproduct_sheaf(a, b)?;
                if form.find_isomorphic(&c, limits)?.is_none() {
                    return Err(Error::Invalid(format!(
                        "catalog is not closed under coproducts: pair ({i}, {j})"
                    )));
                }
            }
        }
    }
    for (i, m) in form.sheaves.iter().enumerate() {
        for u in m.topology.opens(limits.lattice_ceiling)? {
            if stabilize(m, &u) != u {
                continue;
            }
            let sub = subsheaf(m, &u)?;
            if form.find_equal(&sub).is_none() {
                return Err(Error::Invalid(format!(
                    "catalog is not closed under subsheaves: member {i}"
                )));
            }
        }
    }
    Ok(())
}
