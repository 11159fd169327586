//! The eight acceptance criteria, one test each, every one timed against
//! its budget. Run with `--nocapture` to see the per-criterion timing
//! lines; the harness's own ok/FAILED column is the pass/fail verdict.

use std::time::{Duration, Instant};

use modform_core::catalog;
use modform_core::duality::{
    adequacy_probe, check_triangle_identities, counit_eval, hom_search,
};
use modform_core::groupoid::GroupoidMorphism;
use modform_core::logic::{parse_theory, FormulaInContext, SortId, Theory};
use modform_core::model::{
    build_groupoid, check_semantic_decidability, enumerate_models, AtomUniverse, Limits,
    ModelGroupoid,
};
use modform_core::sheaf::{
    classifier_groupoid, decompose_stable_open, definable_sheaf, stabilize, stabilize_formula,
    Elem, EquivariantSheaf, SheafMorphism,
};
use modform_core::stone::{
    boolean_round_trip, clopen_round_trip, homeomorphic, lattice_isomorphic, stable_subterminal_lattice,
    stone_space, FiniteLattice,
};
use modform_core::topology::{
    build_logical_topologies, check_star_transfer, check_topological_groupoid, is_continuous,
    is_local_homeomorphism, is_open_map, model_topological_groupoid, pinned_diagram, point_set,
    FiniteTopology, LogicalTopologies,
};

fn finish(name: &str, limit: Duration, start: Instant) {
    let elapsed = start.elapsed();
    println!("{name}: PASS in {elapsed:.2?} (budget {limit:.2?})");
    assert!(
        elapsed < limit,
        "{name} exceeded its time budget: {elapsed:.2?} >= {limit:.2?}"
    );
}

fn entry_setup(
    name: &str,
    bound: u32,
) -> (Theory, ModelGroupoid, LogicalTopologies, Vec<FormulaInContext>) {
    let entry = catalog::find(name).unwrap();
    let theory = catalog::load(entry).unwrap();
    let g = build_groupoid(&theory, &AtomUniverse::new(bound), &Limits::default()).unwrap();
    let tracked = catalog::tracked_formulas(entry, &theory).unwrap();
    let tops = build_logical_topologies(&g, &tracked).unwrap();
    (theory, g, tops, tracked)
}

/// Criterion 1: the model groupoid of pure decidable sets at bound 2 has
/// exactly 4 models and 7 isomorphisms, the classifier of small sets at
/// the same bound has the same counts, and sending a model to its carrier
/// is a homeomorphic groupoid isomorphism between them.
#[test]
fn criterion_1_groupoid_counts_and_classifier_isomorphism() {
    let start = Instant::now();
    let (_, g, tops, _) = entry_setup("pure_sets", 2);
    assert_eq!(g.models.len(), 4);
    assert_eq!(g.arrows.len(), 7);

    let s = classifier_groupoid(2, &Limits::default()).unwrap();
    assert_eq!(s.objects.len(), 4);
    assert_eq!(s.arrows.len(), 7);

    let sort = SortId(0);
    let on_objects: Vec<usize> = g
        .models
        .iter()
        .map(|m| {
            let mask = m.carrier(sort).iter().fold(0u64, |acc, &a| acc | 1 << a);
            s.object_of_mask(mask).unwrap()
        })
        .collect();
    let on_arrows: Vec<usize> = g
        .arrows
        .iter()
        .map(|arrow| {
            let m = &g.models[arrow.source];
            let graph: Vec<(u32, u32)> = m
                .carrier(sort)
                .iter()
                .map(|&a| (a, arrow.map.apply(m, sort, a)))
                .collect();
            s.arrow_of_graph(on_objects[arrow.source], on_objects[arrow.target], &graph)
                .unwrap()
        })
        .collect();
    let iso = GroupoidMorphism {
        on_objects,
        on_arrows,
    };
    let h = model_topological_groupoid(&g, &tops);
    iso.check(&h.shape, &s.topology.shape).unwrap();
    assert!(iso.is_bijective(&h.shape, &s.topology.shape));
    is_continuous(&iso.on_objects, &h.objects, &s.topology.objects).unwrap();
    is_continuous(&iso.on_arrows, &h.arrows, &s.topology.arrows).unwrap();
    is_open_map(&iso.on_objects, &h.objects, &s.topology.objects).unwrap();
    is_open_map(&iso.on_arrows, &h.arrows, &s.topology.arrows).unwrap();
    finish("criterion 1 (groupoid counts)", Duration::from_secs(1), start);
}

/// Criterion 2: for each coherent catalog theory at bounds up to 3, the
/// groupoid topology laws hold, every tracked sheaf projects by a local
/// homeomorphism with a continuous lawful action, every semantically
/// computed syntactic arrow is continuous, and the source map is open.
#[test]
fn criterion_2_topology_lemmas() {
    let start = Instant::now();
    for name in ["pure_sets", "simple_graphs", "rare_predicate"] {
        for bound in 0..=3u32 {
            let (_, g, tops, tracked) = entry_setup(name, bound);
            check_topological_groupoid(&model_topological_groupoid(&g, &tops)).unwrap();
            let h = model_topological_groupoid(&g, &tops);
            is_open_map(&h.shape.source, &h.arrows, &h.objects).unwrap();

            let sheaves: Vec<EquivariantSheaf> = tracked
                .iter()
                .map(|f| definable_sheaf(&g, &tops, f).unwrap())
                .collect();
            for sh in &sheaves {
                sh.check().unwrap();
                let proj: Vec<usize> = sh.total.iter().map(|(x, _)| *x).collect();
                is_local_homeomorphism(&proj, &sh.topology, &h.objects).unwrap();
            }
            for a in &tracked {
                for b in &tracked {
                    let search = hom_search(&g, &tops, a, b, &Limits::default()).unwrap();
                    for map in &search.maps {
                        SheafMorphism::new(
                            search.source_sheaf.clone(),
                            search.target_sheaf.clone(),
                            map.clone(),
                        )
                        .unwrap();
                        is_continuous(
                            map,
                            &search.source_sheaf.topology,
                            &search.target_sheaf.topology,
                        )
                        .unwrap();
                    }
                }
            }
        }
    }
    finish("criterion 2 (topology lemmas)", Duration::from_secs(60), start);
}

/// Criterion 3: the symbolic stabilization of every basic open of every
/// tracked sheaf agrees set-exactly with orbit closure, at every bound
/// where the star transfer invariant holds (checked first).
#[test]
fn criterion_3_stabilization_oracle_equivalence() {
    let start = Instant::now();
    for name in ["pure_sets", "simple_graphs", "rare_predicate"] {
        for bound in 2..=3u32 {
            let (theory, g, tops, tracked) = entry_setup(name, bound);
            check_star_transfer(&g).unwrap();
            let sig = &theory.signature;
            for phi in &tracked {
                let sh = definable_sheaf(&g, &tops, phi).unwrap();
                for (i, (x, elem)) in sh.total.iter().enumerate() {
                    let Elem::Tuple(anchor) = elem else { unreachable!() };
                    let basic = sh.topology.min_neighborhood(i).clone();
                    let closed = stabilize(&sh, &basic);
                    let (psi, pins) = pinned_diagram(sig, &g.models[*x], &phi.context, anchor);
                    let xi = stabilize_formula(sig, phi, &psi, &pins).unwrap();
                    let symbolic = point_set(
                        sh.total.len(),
                        (0..sh.total.len()).filter(|&p| {
                            let (y, e) = &sh.total[p];
                            let Elem::Tuple(t) = e else { return false };
                            modform_core::model::tuple_in_definable(&g.models[*y], &xi, t)
                        }),
                    );
                    assert_eq!(
                        symbolic, closed,
                        "{name} at bound {bound}: point {i} of a tracked sheaf"
                    );
                }
            }
        }
    }
    finish("criterion 3 (stabilization oracle)", Duration::from_secs(60), start);
}

/// Criterion 4: every stable open of every tracked sheaf decomposes into
/// definable pieces whose extensions union back to exactly the open.
#[test]
fn criterion_4_stable_open_decomposition() {
    let start = Instant::now();
    let cases = [
        ("pure_sets", 2),
        ("pure_sets", 3),
        ("simple_graphs", 2),
        ("rare_predicate", 2),
    ];
    for (name, bound) in cases {
        let (_, g, tops, tracked) = entry_setup(name, bound);
        for phi in &tracked {
            let sh = definable_sheaf(&g, &tops, phi).unwrap();
            let opens = sh.topology.opens(Limits::default().lattice_ceiling).unwrap();
            for u in opens {
                if stabilize(&sh, &u) != u {
                    continue;
                }
                let pieces = decompose_stable_open(&g, &sh, &u).unwrap();
                let mut union = point_set(sh.total.len(), []);
                for piece in &pieces {
                    for p in 0..sh.total.len() {
                        let (y, e) = &sh.total[p];
                        let Elem::Tuple(t) = e else { continue };
                        if modform_core::model::tuple_in_definable(&g.models[*y], piece, t) {
                            union.insert(p);
                        }
                    }
                }
                assert_eq!(union, u, "{name} at bound {bound}");
            }
        }
    }
    finish("criterion 4 (stable-open decomposition)", Duration::from_secs(60), start);
}

/// Criterion 5: on the adequacy-stable catalog pairs, the counit passes
/// every functor law on the tracked formulas, and both triangle identities
/// hold with empty violation reports where the formal catalog is small
/// enough to enumerate.
#[test]
fn criterion_5_duality_at_desk_scale() {
    let start = Instant::now();
    let limits = Limits::default();
    let pairs = [
        ("pure_sets", 2u32),
        ("simple_graphs", 2),
        ("rare_predicate", 2),
        ("three_witnesses", 3),
    ];
    let mut stable_pairs = 0;
    for (name, bound) in pairs {
        let (theory, g, tops, tracked) = entry_setup(name, bound);
        let probe = adequacy_probe(&theory, &tracked, bound as usize, &limits).unwrap();
        if !probe.stable {
            continue;
        }
        stable_pairs += 1;
        let data = counit_eval(&g, &tops, &tracked, &limits).unwrap();
        assert!(!data.objects.is_empty());
    }
    assert!(stable_pairs >= 3, "too few adequacy-stable catalog pairs");

    for name in ["pure_sets", "simple_graphs"] {
        let (_, g, tops, tracked) = entry_setup(name, 2);
        let report = check_triangle_identities(&g, &tops, &tracked, 2, 2, &limits).unwrap();
        assert!(
            report.holds(),
            "{name}: triangle violations {:?}",
            report.violations
        );
    }
    finish("criterion 5 (duality)", Duration::from_secs(120), start);
}

/// Criterion 6: classical Stone duality as the posetal case — every
/// Boolean algebra up to 16 elements round trips through its spectrum
/// with matching point counts, small discrete spaces round trip through
/// their clopens, and the subterminal lattice of the propositional
/// Boolean theory is the free Boolean algebra whose Stone space is the
/// model space.
#[test]
fn criterion_6_stone_special_case() {
    let start = Instant::now();
    let limits = Limits::default();
    for atoms in 0..=4u32 {
        let ba = FiniteLattice::powerset(atoms).unwrap();
        let space = stone_space(&ba).unwrap();
        assert_eq!(space.point_count(), atoms as usize);
        boolean_round_trip(&ba, &limits).unwrap();
    }
    for n in 1..=4usize {
        assert!(clopen_round_trip(&FiniteTopology::discrete(n), &limits).unwrap());
    }
    let t = parse_theory(
        "two_letters",
        "sort X\n\
         rel P :\n\
         rel Pc :\n\
         rel Q :\n\
         rel Qc :\n\
         axiom x:X y:X | x != y & x = y |- false\n\
         axiom x:X y:X | true |- x != y | x = y\n\
         axiom x:X | true |- false\n\
         axiom | P & Pc |- false\n\
         axiom | true |- P | Pc\n\
         axiom | Q & Qc |- false\n\
         axiom | true |- Q | Qc\n",
    )
    .unwrap();
    let g = build_groupoid(&t, &AtomUniverse::new(2), &limits).unwrap();
    let tops = build_logical_topologies(&g, &[]).unwrap();
    let sub1 = stable_subterminal_lattice(&g, &tops, &limits).unwrap();
    assert!(lattice_isomorphic(&sub1, &FiniteLattice::powerset(2).unwrap()));
    let h = model_topological_groupoid(&g, &tops);
    assert!(homeomorphic(&stone_space(&sub1).unwrap(), &h.objects));
    finish("criterion 6 (stone special case)", Duration::from_secs(30), start);
}

/// Criterion 7: complementing the classical catalog theory preserves its
/// model counts at every bound up to 3.
#[test]
fn criterion_7_morleyization_model_counts() {
    let start = Instant::now();
    let entry = catalog::find("rare_predicate").unwrap();
    let classical = parse_theory(entry.name, entry.source).unwrap();
    let coherent = catalog::load(entry).unwrap();
    let limits = Limits::default();
    let mut counts = Vec::new();
    for bound in 0..=3u32 {
        let before = enumerate_models(&classical, &AtomUniverse::new(bound), &limits)
            .unwrap()
            .len();
        let after = enumerate_models(&coherent, &AtomUniverse::new(bound), &limits)
            .unwrap()
            .len();
        assert_eq!(before, after, "bound {bound}");
        counts.push(before);
    }
    assert_eq!(counts, vec![1, 3, 8, 20]);
    finish("criterion 7 (morleyization counts)", Duration::from_secs(60), start);
}

/// Criterion 8: the semantic decidability check is clean for every
/// decidable catalog theory at bound 4 and produces a concrete
/// non-injective witness for the bare predicate fixture.
#[test]
fn criterion_8_decidability_semantics() {
    let start = Instant::now();
    let limits = Limits::default();
    for name in ["pure_sets", "simple_graphs", "rare_predicate", "three_witnesses"] {
        let theory = catalog::load(catalog::find(name).unwrap()).unwrap();
        let report =
            check_semantic_decidability(&theory, &AtomUniverse::new(4), &limits).unwrap();
        assert!(
            report.witnesses.is_empty(),
            "{name}: unexpected collapse witnesses {:?}",
            report.witnesses
        );
        assert!(report.syntactically_decidable, "{name}");
    }
    let bare = catalog::load(catalog::find("bare_predicate").unwrap()).unwrap();
    let report = check_semantic_decidability(&bare, &AtomUniverse::new(2), &limits).unwrap();
    assert!(!report.witnesses.is_empty());
    assert!(!report.syntactically_decidable);
    finish("criterion 8 (decidability semantics)", Duration::from_secs(30), start);
}
