//! Renderings of verification runs: one-line check results for terminals,
//! deterministic JSON for machines, and DOT for graph viewers.
//!
//! JSON output is byte-stable for a fixed input: structs serialize in
//! declaration order, maps are B-tree ordered, and every collection is
//! built by deterministic iteration over the groupoid.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::logic::Signature;
use crate::model::{Atom, Model, ModelGroupoid};

/// Outcome of one named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "PASS"),
            CheckStatus::Fail => write!(f, "FAIL"),
            CheckStatus::Skipped => write!(f, "SKIPPED"),
        }
    }
}

/// One named check with its outcome and an optional explanation; renders
/// as `name: PASS` or `name: FAIL (detail)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckLine {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Pass,
            detail: String::new(),
        }
    }

    pub fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Fail,
            detail: detail.into(),
        }
    }

    pub fn skipped(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckLine {
            name: name.into(),
            status: CheckStatus::Skipped,
            detail: detail.into(),
        }
    }

    /// Record a check that passes exactly when `result` is `Ok`.
    pub fn from_result<T, E: fmt::Display>(
        name: impl Into<String>,
        result: &Result<T, E>,
    ) -> Self {
        match result {
            Ok(_) => CheckLine::pass(name),
            Err(e) => CheckLine::fail(name, e.to_string()),
        }
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.detail.is_empty() {
            write!(f, "{}: {}", self.name, self.status)
        } else {
            write!(f, "{}: {} ({})", self.name, self.status, self.detail)
        }
    }
}

/// A full verification run over one theory at one bound.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub theory: String,
    pub bound: u32,
    pub models: usize,
    pub isomorphisms: usize,
    pub checks: Vec<CheckLine>,
}

impl RunReport {
    pub fn new(theory: impl Into<String>, bound: u32, models: usize, isomorphisms: usize) -> Self {
        RunReport {
            theory: theory.into(),
            bound,
            models,
            isomorphisms,
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, line: CheckLine) {
        self.checks.push(line);
    }

    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn skipped(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Skipped)
    }

    /// The terminal rendering: a summary line followed by one line per
    /// check.
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} at bound {}: {} models, {} isomorphisms\n",
            self.theory, self.bound, self.models, self.isomorphisms
        );
        for check in &self.checks {
            out.push_str(&check.to_string());
            out.push('\n');
        }
        out
    }
}

/// Serialize any report as stable pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// One model, spelled out for JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct ModelDescription {
    pub index: usize,
    pub carriers: BTreeMap<String, Vec<Atom>>,
    pub relations: BTreeMap<String, Vec<Vec<Atom>>>,
    pub functions: BTreeMap<String, Vec<(Vec<Atom>, Atom)>>,
}

/// The whole groupoid, spelled out for JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct GroupoidDescription {
    pub theory: String,
    pub bound: u32,
    pub models: Vec<ModelDescription>,
    pub isomorphisms: usize,
}

fn describe_model(sig: &Signature, index: usize, m: &Model) -> ModelDescription {
    let carriers = sig
        .sort_ids()
        .map(|s| (sig.sort_name(s).to_string(), m.carrier(s).to_vec()))
        .collect();
    let relations = sig
        .relations()
        .iter()
        .enumerate()
        .map(|(r, decl)| {
            (
                decl.name.clone(),
                m.relations[r].iter().cloned().collect::<Vec<_>>(),
            )
        })
        .collect();
    let functions = sig
        .functions()
        .iter()
        .enumerate()
        .map(|(f, decl)| {
            (
                decl.name.clone(),
                m.functions[f]
                    .iter()
                    .map(|(args, out)| (args.clone(), *out))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    ModelDescription {
        index,
        carriers,
        relations,
        functions,
    }
}

/// Describe every model of a groupoid.
pub fn describe_groupoid(g: &ModelGroupoid) -> GroupoidDescription {
    let sig = &g.theory.signature;
    GroupoidDescription {
        theory: g.theory.name.clone(),
        bound: g.universe.size,
        models: g
            .models
            .iter()
            .enumerate()
            .map(|(i, m)| describe_model(sig, i, m))
            .collect(),
        isomorphisms: g.arrows.len(),
    }
}

/// A compact single-line label for a model: carriers and relation tables.
pub fn model_label(sig: &Signature, m: &Model) -> String {
    let mut parts: Vec<String> = sig
        .sort_ids()
        .map(|s| {
            format!(
                "{}={{{}}}",
                sig.sort_name(s),
                m.carrier(s)
                    .iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        })
        .collect();
    for (r, decl) in sig.relations().iter().enumerate() {
        let tuples: Vec<String> = m.relations[r]
            .iter()
            .map(|t| {
                format!(
                    "({})",
                    t.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
                )
            })
            .collect();
        parts.push(format!("{}={{{}}}", decl.name, tuples.join(",")));
    }
    parts.join(" ")
}

/// Render the groupoid in DOT: models as boxes, isomorphisms as labeled
/// directed edges (identity loops included).
pub fn groupoid_dot(g: &ModelGroupoid) -> String {
    let sig = &g.theory.signature;
    let mut out = String::from("digraph models {\n  rankdir=LR;\n  node [shape=box];\n");
    for (i, m) in g.models.iter().enumerate() {
        out.push_str(&format!(
            "  m{i} [label=\"M{i}: {}\"];\n",
            model_label(sig, m).replace('"', "\\\"")
        ));
    }
    for (k, arrow) in g.arrows.iter().enumerate() {
        let m = &g.models[arrow.source];
        let is_identity = arrow.source == arrow.target
            && sig
                .sort_ids()
                .all(|s| m.carrier(s).iter().all(|&a| arrow.map.apply(m, s, a) == a));
        let style = if is_identity { " style=dashed" } else { "" };
        out.push_str(&format!(
            "  m{} -> m{} [label=\"a{k}\"{style}];\n",
            arrow.source, arrow.target
        ));
    }
    out.push_str("}\n");
    out
}
