//! Structure-preserving maps between models. A map sends each carrier
//! element to a carrier element of the same sort; homomorphisms preserve
//! function values and relation membership, and — on every sort whose
//! inequality is axiomatized — distinctness, which forces injectivity
//! there. Isomorphisms are the bijective maps that also reflect relations.

use crate::logic::{Signature, SortId};
use crate::model::{tuples_over, Atom, Model};

/// Which maps to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    Homomorphism,
    Isomorphism,
}

/// A sort-indexed map between models: `components[s][i]` is the image of
/// the `i`-th element of the source carrier of sort `s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelMap {
    pub components: Vec<Vec<Atom>>,
}

impl ModelMap {
    /// The identity map on `m`.
    pub fn identity(m: &Model) -> Self {
        Self {
            components: m.carriers.clone(),
        }
    }

    /// Image of atom `a` of sort `sort` (must lie in the source carrier).
    pub fn apply(&self, source: &Model, sort: SortId, a: Atom) -> Atom {
        let idx = source.carriers[sort.0]
            .binary_search(&a)
            .expect("atom is in the source carrier");
        self.components[sort.0][idx]
    }

    /// Image of a tuple typed by `sorts`.
    pub fn apply_tuple(&self, source: &Model, sorts: &[SortId], tuple: &[Atom]) -> Vec<Atom> {
        sorts
            .iter()
            .zip(tuple)
            .map(|(&s, &a)| self.apply(source, s, a))
            .collect()
    }

    /// Composition `next ∘ self`, where `self: source -> mid`.
    pub fn then(&self, next: &ModelMap, source: &Model, mid: &Model) -> ModelMap {
        let components = source
            .carriers
            .iter()
            .enumerate()
            .map(|(s, carrier)| {
                carrier
                    .iter()
                    .map(|&a| next.apply(mid, SortId(s), self.apply(source, SortId(s), a)))
                    .collect()
            })
            .collect();
        ModelMap { components }
    }

    /// Inverse of a bijective map `self: source -> target`.
    pub fn inverse(&self, source: &Model, target: &Model) -> ModelMap {
        let components = target
            .carriers
            .iter()
            .enumerate()
            .map(|(s, codomain)| {
                codomain
                    .iter()
                    .map(|&b| {
                        let i = self.components[s]
                            .iter()
                            .position(|&img| img == b)
                            .expect("map is surjective");
                        source.carriers[s][i]
                    })
                    .collect()
            })
            .collect();
        ModelMap { components }
    }

    /// Is the map a bijection on every sort?
    pub fn is_bijective(&self, target: &Model) -> bool {
        self.components.iter().enumerate().all(|(s, images)| {
            images.len() == target.carriers[s].len()
                && (0..images.len()).all(|i| !images[i + 1..].contains(&images[i]))
        })
    }
}

/// All maps of the given kind from `source` to `target`, in lexicographic
/// order of their component vectors.
pub fn enumerate_maps(
    sig: &Signature,
    source: &Model,
    target: &Model,
    kind: MapKind,
) -> Vec<ModelMap> {
    if kind == MapKind::Isomorphism {
        let sizes_match = source
            .carriers
            .iter()
            .zip(&target.carriers)
            .all(|(a, b)| a.len() == b.len());
        if !sizes_match {
            return Vec::new();
        }
    }
    let mut out = Vec::new();
    let mut components: Vec<Vec<Atom>> = source.carriers.iter().map(|_| Vec::new()).collect();
    assign(sig, source, target, kind, 0, &mut components, &mut out);
    out
}

fn assign(
    sig: &Signature,
    source: &Model,
    target: &Model,
    kind: MapKind,
    sort: usize,
    components: &mut Vec<Vec<Atom>>,
    out: &mut Vec<ModelMap>,
) {
    if sort == source.carriers.len() {
        let candidate = ModelMap {
            components: components.clone(),
        };
        if preserves(sig, source, target, kind, &candidate) {
            out.push(candidate);
        }
        return;
    }
    // A map must stay injective on this sort when it is headed for an
    // isomorphism or when the sort's inequality is axiomatized.
    let injective = kind == MapKind::Isomorphism || sig.has_inequality(SortId(sort));
    if components[sort].len() == source.carriers[sort].len() {
        return assign(sig, source, target, kind, sort + 1, components, out);
    }
    for &b in &target.carriers[sort].clone() {
        if injective && components[sort].contains(&b) {
            continue;
        }
        components[sort].push(b);
        assign(sig, source, target, kind, sort, components, out);
        components[sort].pop();
    }
}

fn preserves(
    sig: &Signature,
    source: &Model,
    target: &Model,
    kind: MapKind,
    map: &ModelMap,
) -> bool {
    // Function tables must commute with the map.
    for (f, decl) in sig.functions().iter().enumerate() {
        let arg_carriers: Vec<&[Atom]> = decl.args.iter().map(|s| source.carrier(*s)).collect();
        for tuple in tuples_over(&arg_carriers) {
            let image_of_value = map.apply(
                source,
                decl.result,
                *source.functions[f].get(&tuple).expect("table is total"),
            );
            let mapped_tuple = map.apply_tuple(source, &decl.args, &tuple);
            let value_of_image = *target.functions[f]
                .get(&mapped_tuple)
                .expect("table is total");
            if image_of_value != value_of_image {
                return false;
            }
        }
    }
    // Relation membership must be preserved, and for isomorphisms reflected.
    for (r, decl) in sig.relations().iter().enumerate() {
        for tuple in &source.relations[r] {
            let mapped = map.apply_tuple(source, &decl.args, tuple);
            if !target.relations[r].contains(&mapped) {
                return false;
            }
        }
        if kind == MapKind::Isomorphism && source.relations[r].len() != target.relations[r].len() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_theory;
    use crate::model::{enumerate_models, AtomUniverse, Limits};

    fn models_of(src: &str) -> (crate::logic::Theory, Vec<Model>) {
        let t = parse_theory("t", src).unwrap();
        let ms = enumerate_models(&t, &AtomUniverse::new(2), &Limits::default()).unwrap();
        (t, ms)
    }

    #[test]
    fn automorphisms_of_a_bare_two_element_carrier() {
        let (t, ms) = models_of(
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n",
        );
        let both = &ms[3]; // carrier {0, 1}
        let isos = enumerate_maps(&t.signature, both, both, MapKind::Isomorphism);
        assert_eq!(isos.len(), 2);
        assert_eq!(isos[0].components, vec![vec![0, 1]]);
        assert_eq!(isos[1].components, vec![vec![1, 0]]);
    }

    #[test]
    fn the_empty_model_maps_uniquely_anywhere() {
        let (t, ms) = models_of("sort X\n");
        let empty = &ms[0];
        for m in &ms {
            let homs = enumerate_maps(&t.signature, empty, m, MapKind::Homomorphism);
            assert_eq!(homs.len(), 1);
            assert!(homs[0].components[0].is_empty());
        }
    }

    #[test]
    fn no_isomorphism_across_carrier_sizes() {
        let (t, ms) = models_of("sort X\n");
        let one = &ms[1];
        let two = &ms[3];
        assert!(enumerate_maps(&t.signature, one, two, MapKind::Isomorphism).is_empty());
    }

    #[test]
    fn axiomatized_inequality_forces_injectivity() {
        // Without the inequality axioms a two-point carrier collapses onto
        // a point; with them, no homomorphism survives.
        let (bare, bare_ms) = models_of("sort X\n");
        let collapses =
            enumerate_maps(&bare.signature, &bare_ms[3], &bare_ms[1], MapKind::Homomorphism);
        assert_eq!(collapses.len(), 1);
        assert_eq!(collapses[0].components, vec![vec![0, 0]]);

        let (dec, dec_ms) = models_of(
            "sort X\n\
             axiom x:X y:X | x != y & x = y |- false\n\
             axiom x:X y:X | true |- x != y | x = y\n",
        );
        assert!(
            enumerate_maps(&dec.signature, &dec_ms[3], &dec_ms[1], MapKind::Homomorphism)
                .is_empty()
        );
    }

    #[test]
    fn isomorphisms_reflect_relations() {
        let (t, ms) = models_of(
            "sort V\n\
             rel E : V x V\n\
             axiom x:V | E(x, x) |- false\n\
             axiom x:V y:V | E(x, y) |- E(y, x)\n\
             axiom x:V y:V | x != y & x = y |- false\n\
             axiom x:V y:V | true |- x != y | x = y\n",
        );
        let edgeless = &ms[3]; // {0,1} with no edges
        let edged = &ms[4]; // {0,1} with the symmetric edge
        assert_eq!(edgeless.relations[0].len(), 0);
        assert_eq!(edged.relations[0].len(), 2);
        // Homomorphisms embed the edgeless graph into the edged one, but no
        // isomorphism exists in either direction.
        assert_eq!(
            enumerate_maps(&t.signature, edgeless, edged, MapKind::Homomorphism).len(),
            2
        );
        assert!(enumerate_maps(&t.signature, edgeless, edged, MapKind::Isomorphism).is_empty());
        assert!(enumerate_maps(&t.signature, edged, edgeless, MapKind::Isomorphism).is_empty());
    }

    #[test]
    fn composition_and_inverse_round_trip() {
        let (t, ms) = models_of("sort X\n");
        let two = &ms[3];
        let isos = enumerate_maps(&t.signature, two, two, MapKind::Isomorphism);
        let swap = &isos[1];
        let id = ModelMap::identity(two);
        assert_eq!(swap.then(swap, two, two), id);
        assert_eq!(swap.inverse(two, two), *swap);
        assert!(swap.is_bijective(two));
    }

    #[test]
    fn functions_must_commute() {
        let t = parse_theory("t", "sort X\nfun f : X -> X\n").unwrap();
        let ms = enumerate_models(&t, &AtomUniverse::new(2), &Limits::default()).unwrap();
        // Pick the two-point model with f = identity and the one with f
        // the constant 0 map.
        let id_f = ms
            .iter()
            .find(|m| {
                m.carriers[0] == vec![0, 1]
                    && m.functions[0][&vec![0]] == 0
                    && m.functions[0][&vec![1]] == 1
            })
            .unwrap();
        let const_f = ms
            .iter()
            .find(|m| {
                m.carriers[0] == vec![0, 1]
                    && m.functions[0][&vec![0]] == 0
                    && m.functions[0][&vec![1]] == 0
            })
            .unwrap();
        let homs = enumerate_maps(&t.signature, id_f, const_f, MapKind::Homomorphism);
        // h(f(x)) = f(h(x)) forces h(x) = f(h(x)), i.e. h lands in the
        // fixed points of the constant map: h ≡ 0.
        assert_eq!(homs.len(), 1);
        assert_eq!(homs[0].components, vec![vec![0, 0]]);
    }
}
