//! Interpretations between theories and the model functor they induce.
//!
//! An interpretation of a source theory in a target theory sends each
//! source sort to a one-variable formula over the target signature and each
//! source relation to a formula over the matching contexts. Evaluating the
//! images inside a bounded target model induces a structure for the source
//! signature; the interpretation is coherent at the bound when every
//! induced structure is again a model. Precomposition then maps the target
//! model groupoid into the source model groupoid — contravariantly, and
//! continuously for the logical topologies on both sides.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groupoid::GroupoidMorphism;
use crate::logic::{
    print_formula_in_context, Formula, FormulaInContext, RelId, Signature, SortId, Term,
};
use crate::model::{definable_set, Atom, Model, ModelGroupoid};
use crate::topology::{is_continuous, LogicalTopologies};

/// The data of an interpretation: one single-variable formula per source
/// sort and one formula per source relation, all over the target signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentFunctorData {
    pub sort_images: Vec<FormulaInContext>,
    pub relation_images: Vec<FormulaInContext>,
}

/// The identity interpretation of a signature in itself: each sort goes to
/// its tautological one-variable formula, each relation to itself.
pub fn identity_functor_data(sig: &Signature) -> CoherentFunctorData {
    let sort_images = sig
        .sort_ids()
        .map(|s| FormulaInContext::new(vec![("x0".into(), s)], Formula::True))
        .collect();
    let relation_images = sig
        .relations()
        .iter()
        .enumerate()
        .map(|(r, decl)| {
            let context: Vec<(String, SortId)> = decl
                .args
                .iter()
                .enumerate()
                .map(|(i, s)| (format!("x{i}"), *s))
                .collect();
            let terms = context.iter().map(|(n, _)| Term::Var(n.clone())).collect();
            FormulaInContext::new(context, Formula::Rel(RelId(r), terms))
        })
        .collect();
    CoherentFunctorData {
        sort_images,
        relation_images,
    }
}

/// Evaluate the interpretation inside one target model: carriers are the
/// sort images' definable sets, relations the relation images'. Fails when
/// a relation image mentions an atom outside its sort images.
fn induced_structure(
    f: &CoherentFunctorData,
    source_sig: &Signature,
    target_sig: &Signature,
    n: &Model,
    model_index: usize,
) -> Result<Model> {
    let mut carriers: Vec<Vec<Atom>> = Vec::with_capacity(source_sig.sort_count());
    for im in &f.sort_images {
        let atoms = definable_set(target_sig, n, im)?
            .into_iter()
            .map(|t| t[0])
            .collect();
        carriers.push(atoms);
    }
    let mut relations = Vec::with_capacity(source_sig.relations().len());
    for (r, decl) in source_sig.relations().iter().enumerate() {
        let mut set = BTreeSet::new();
        for t in definable_set(target_sig, n, &f.relation_images[r])? {
            for (pos, s) in decl.args.iter().enumerate() {
                if !carriers[s.0].contains(&t[pos]) {
                    return Err(Error::BadFunctor(format!(
                        "relation image for {} escapes its sort images in target model {model_index}",
                        decl.name
                    )));
                }
            }
            set.insert(t);
        }
        relations.push(set);
    }
    Ok(Model {
        carriers,
        functions: Vec::new(),
        relations,
    })
}

/// Decide whether the interpretation is coherent at the bound: images
/// well-formed (single-variable sort images, matching relation contexts,
/// all positive formulas), and every induced structure a source model.
pub fn check_coherent_functor(
    f: &CoherentFunctorData,
    source: &ModelGroupoid,
    target: &ModelGroupoid,
) -> Result<()> {
    let source_sig = &source.theory.signature;
    let target_sig = &target.theory.signature;
    if !source_sig.functions().is_empty() {
        return Err(Error::BadFunctor(
            "interpretations out of a signature with function symbols are not supported; \
             present the source theory relationally"
                .into(),
        ));
    }
    if f.sort_images.len() != source_sig.sort_count() {
        return Err(Error::BadFunctor(format!(
            "{} sort images for {} source sorts",
            f.sort_images.len(),
            source_sig.sort_count()
        )));
    }
    for (s, im) in f.sort_images.iter().enumerate() {
        im.validate(target_sig)?;
        if im.context.len() != 1 {
            return Err(Error::BadFunctor(format!(
                "sort image for {} must have exactly one free variable",
                source_sig.sort_name(SortId(s))
            )));
        }
        if let Some(connective) = im.body.first_classical_connective() {
            return Err(Error::NonCoherent {
                formula: print_formula_in_context(target_sig, im),
                connective: connective.into(),
            });
        }
    }
    if f.relation_images.len() != source_sig.relations().len() {
        return Err(Error::BadFunctor(format!(
            "{} relation images for {} source relations",
            f.relation_images.len(),
            source_sig.relations().len()
        )));
    }
    for (r, im) in f.relation_images.iter().enumerate() {
        im.validate(target_sig)?;
        let decl = &source_sig.relations()[r];
        let expected: Vec<SortId> = decl
            .args
            .iter()
            .map(|s| f.sort_images[s.0].context[0].1)
            .collect();
        if im.context_sorts() != expected {
            return Err(Error::BadFunctor(format!(
                "relation image for {} has a context of the wrong sorts",
                decl.name
            )));
        }
        if let Some(connective) = im.body.first_classical_connective() {
            return Err(Error::NonCoherent {
                formula: print_formula_in_context(target_sig, im),
                connective: connective.into(),
            });
        }
    }
    for (ni, n) in target.models.iter().enumerate() {
        let induced = induced_structure(f, source_sig, target_sig, n, ni)?;
        if !source.models.iter().any(|m| *m == induced) {
            return Err(Error::BadFunctor(format!(
                "target model {ni} induces a structure outside the source theory's models"
            )));
        }
    }
    Ok(())
}

/// The model functor of a coherent interpretation: precomposition, sending
/// each target model to its induced source model and each isomorphism to
/// its restriction. Both levels are checked functorial and continuous for
/// the logical topologies.
pub fn mod_functor(
    f: &CoherentFunctorData,
    source: &ModelGroupoid,
    source_tops: &LogicalTopologies,
    target: &ModelGroupoid,
    target_tops: &LogicalTopologies,
) -> Result<GroupoidMorphism> {
    check_coherent_functor(f, source, target)?;
    let source_sig = &source.theory.signature;
    let target_sig = &target.theory.signature;
    let induced: Vec<Model> = target
        .models
        .iter()
        .enumerate()
        .map(|(ni, n)| induced_structure(f, source_sig, target_sig, n, ni))
        .collect::<Result<_>>()?;
    let on_objects: Vec<usize> = induced
        .iter()
        .enumerate()
        .map(|(ni, m)| {
            source.models.iter().position(|sm| sm == m).ok_or_else(|| {
                Error::BadFunctor(format!(
                    "target model {ni} induces a structure outside the source groupoid"
                ))
            })
        })
        .collect::<Result<_>>()?;
    let mut on_arrows = Vec::with_capacity(target.arrows.len());
    for (k, arrow) in target.arrows.iter().enumerate() {
        let src_model = &target.models[arrow.source];
        let components: Vec<Vec<Atom>> = f
            .sort_images
            .iter()
            .enumerate()
            .map(|(s, im)| {
                let target_sort = im.context[0].1;
                induced[arrow.source].carriers[s]
                    .iter()
                    .map(|&a| arrow.map.apply(src_model, target_sort, a))
                    .collect()
            })
            .collect();
        let (si, ti) = (on_objects[arrow.source], on_objects[arrow.target]);
        let idx = source
            .arrows
            .iter()
            .position(|sa| sa.source == si && sa.target == ti && sa.map.components == components)
            .ok_or_else(|| {
                Error::BadFunctor(format!(
                    "target isomorphism {k} does not restrict to a source isomorphism"
                ))
            })?;
        on_arrows.push(idx);
    }
    let morphism = GroupoidMorphism {
        on_objects,
        on_arrows,
    };
    morphism.check(&target.shape, &source.shape)?;
    is_continuous(&morphism.on_objects, &target_tops.base, &source_tops.base)?;
    is_continuous(&morphism.on_arrows, &target_tops.arrow, &source_tops.arrow)?;
    Ok(morphism)
}
