//! Many-sorted signatures: sorts, function symbols (constants are 0-ary
//! functions), relation symbols (propositional letters are 0-ary relations),
//! and a per-sort flag for the designated primitive inequality predicate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a sort in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SortId(pub usize);

/// Index of a function symbol in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FunId(pub usize);

/// Index of a relation symbol in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelId(pub usize);

/// A function symbol `name : args -> result`; 0-ary functions are constants.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FunDecl {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

/// A relation symbol `name : args`; 0-ary relations are propositional letters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<SortId>,
}

/// A finite many-sorted signature.
///
/// `inequality[s]` records whether sort `s` carries the designated primitive
/// inequality predicate. The predicate itself is not listed among
/// [`Signature::relations`]: `!=` is built into the formula language, its
/// interpretation in every structure is the complement of the diagonal, and
/// the flag controls whether structure-preserving maps must respect it
/// (which forces them to be injective on that sort).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
pub struct Signature {
    sorts: Vec<String>,
    functions: Vec<FunDecl>,
    relations: Vec<RelDecl>,
    inequality: Vec<bool>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declare a sort; errors on duplicate names.
    pub fn add_sort(&mut self, name: impl Into<String>) -> Result<SortId> {
        let name = name.into();
        if self.sort_id(&name).is_some() {
            return Err(Error::Invalid(format!("duplicate sort `{name}`")));
        }
        self.sorts.push(name);
        self.inequality.push(false);
        Ok(SortId(self.sorts.len() - 1))
    }

    /// Declare a function symbol; errors on a name clash with another symbol.
    pub fn add_function(
        &mut self,
        name: impl Into<String>,
        args: Vec<SortId>,
        result: SortId,
    ) -> Result<FunId> {
        let name = name.into();
        if self.symbol_name_taken(&name) {
            return Err(Error::Invalid(format!("duplicate symbol `{name}`")));
        }
        self.functions.push(FunDecl { name, args, result });
        Ok(FunId(self.functions.len() - 1))
    }

    /// Declare a relation symbol; errors on a name clash with another symbol.
    pub fn add_relation(&mut self, name: impl Into<String>, args: Vec<SortId>) -> Result<RelId> {
        let name = name.into();
        if self.symbol_name_taken(&name) {
            return Err(Error::Invalid(format!("duplicate symbol `{name}`")));
        }
        self.relations.push(RelDecl { name, args });
        Ok(RelId(self.relations.len() - 1))
    }

    /// Mark sort `s` as carrying the designated inequality predicate.
    pub fn set_inequality(&mut self, s: SortId, value: bool) {
        self.inequality[s.0] = value;
    }

    pub fn has_inequality(&self, s: SortId) -> bool {
        self.inequality[s.0]
    }

    /// True when every sort carries the inequality predicate.
    pub fn all_sorts_have_inequality(&self) -> bool {
        self.inequality.iter().all(|&b| b)
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_ids(&self) -> impl Iterator<Item = SortId> {
        (0..self.sorts.len()).map(SortId)
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0]
    }

    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name).map(SortId)
    }

    pub fn functions(&self) -> &[FunDecl] {
        &self.functions
    }

    pub fn function(&self, f: FunId) -> &FunDecl {
        &self.functions[f.0]
    }

    pub fn function_id(&self, name: &str) -> Option<FunId> {
        self.functions.iter().position(|f| f.name == name).map(FunId)
    }

    pub fn relations(&self) -> &[RelDecl] {
        &self.relations
    }

    pub fn relation(&self, r: RelId) -> &RelDecl {
        &self.relations[r.0]
    }

    pub fn relation_id(&self, name: &str) -> Option<RelId> {
        self.relations.iter().position(|r| r.name == name).map(RelId)
    }

    fn symbol_name_taken(&self, name: &str) -> bool {
        self.function_id(name).is_some() || self.relation_id(name).is_some()
    }
}
