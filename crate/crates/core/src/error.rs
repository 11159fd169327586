//! Crate-wide error type.
//!
//! Every failure carries enough context to act on: parse errors point at a
//! line/column, sort errors name the offending term, verification failures
//! carry a witness, and resource guards report the size that tripped them.

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed surface syntax in the theory DSL or a formula string.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A term or formula does not sort-check; `term` is the printed offender.
    #[error("sort error: {message} (offending term: {term})")]
    Sort { term: String, message: String },

    /// A connective outside the positive-existential fragment appeared where
    /// the theory (or an operation) demands that fragment.
    #[error("non-coherent formula in coherent theory: {formula} uses {connective}")]
    NonCoherent { formula: String, connective: String },

    /// An enumeration would visit more candidates than the configured ceiling.
    #[error("resource guard: {what} needs about {estimate} steps, ceiling is {ceiling}")]
    ResourceGuard {
        what: String,
        estimate: u128,
        ceiling: u128,
    },

    /// An environment handed to the evaluator does not match the context,
    /// or a parameter atom lies outside the relevant carrier.
    #[error("environment mismatch: {0}")]
    EnvMismatch(String),

    /// A subset expected to be open is not; the witness is a point whose
    /// minimal neighbourhood escapes the set.
    #[error("subset is not open: point {point} has a minimal neighbourhood not contained in it")]
    NotOpen { point: usize },

    /// A subset expected to be stable under the groupoid action is not.
    #[error("subset is not stable: arrow {arrow} moves point {point} outside it")]
    NotStable { arrow: usize, point: usize },

    /// A map expected to be continuous is not.
    #[error("map is not continuous: preimage of open {open} fails at point {point}")]
    NotContinuous { open: String, point: usize },

    /// A map expected to send opens to opens does not.
    #[error("map is not open: the image of the minimal neighbourhood of point {point} is not open — {image}")]
    NotOpenMap { point: usize, image: String },

    /// A projection expected to be a local homeomorphism is not.
    #[error("projection is not a local homeomorphism at total point {point}: {reason}")]
    NotLocalHomeo { point: usize, reason: String },

    /// The generator search for an equivariant sheaf found no section through
    /// some point at this bound.
    #[error("no generating section found through total point {point}")]
    NoGeneratingSection { point: usize },

    /// Semantic data changed between bound n and n+1, so syntactic claims at
    /// bound n are not trustworthy.
    #[error("adequacy probe unstable between bounds {lower} and {upper}: {detail}")]
    AdequacyUnstable {
        lower: usize,
        upper: usize,
        detail: String,
    },

    /// Functor data failed a coherence requirement (with a witness).
    #[error("functor data rejected: {0}")]
    BadFunctor(String),

    /// A sheaf failed one of the formality conditions needed by an operation.
    #[error("sheaf fails formality condition {condition}: {detail}")]
    NotFormal { condition: String, detail: String },

    /// Input data is structurally invalid for the requested operation.
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Filesystem or serialization problem at the CLI boundary.
    #[error("I/O error: {0}")]
    Io(String),
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
