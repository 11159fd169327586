//! Abstract finite groupoids: the pure combinatorics of objects, invertible
//! arrows, and the five structure maps (source, target, identity, inverse,
//! composition), independent of what the objects are. Model groupoids and
//! the classifier of small sets both carry one of these shapes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite groupoid presented by complete lookup tables.
///
/// `compose[g][f]` is `g ∘ f` ("first f, then g"), defined exactly when
/// `target[f] == source[g]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroupoid {
    pub object_count: usize,
    pub source: Vec<usize>,
    pub target: Vec<usize>,
    /// Identity arrow of each object.
    pub identity: Vec<usize>,
    /// Inverse of each arrow.
    pub inverse: Vec<usize>,
    /// `compose[g][f] = Some(g ∘ f)` when composable.
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FiniteGroupoid {
    pub fn arrow_count(&self) -> usize {
        self.source.len()
    }

    pub fn composable(&self, g: usize, f: usize) -> bool {
        self.target[f] == self.source[g]
    }

    /// `g ∘ f`, panicking on non-composable input (callers check first).
    pub fn composed(&self, g: usize, f: usize) -> usize {
        self.compose[g][f].expect("arrows must be composable")
    }

    /// Arrows out of `object`.
    pub fn arrows_from(&self, object: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrow_count()).filter(move |&a| self.source[a] == object)
    }

    /// Objects reachable from each object: the partition into connected
    /// components, as a component id per object.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.object_count];
        let mut next = 0;
        for start in 0..self.object_count {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(x) = stack.pop() {
                for a in 0..self.arrow_count() {
                    for y in [self.source[a], self.target[a]] {
                        if (self.source[a] == x || self.target[a] == x) && comp[y] == usize::MAX {
                            comp[y] = next;
                            stack.push(y);
                        }
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Check every groupoid law on the tables; returns the first violation.
    pub fn check_laws(&self) -> Result<()> {
        let n_obj = self.object_count;
        let n_arr = self.arrow_count();
        let fail = |msg: String| Err(Error::Invalid(format!("groupoid law violated: {msg}")));

        if self.identity.len() != n_obj {
            return fail("identity table length != object count".into());
        }
        if self.target.len() != n_arr || self.inverse.len() != n_arr || self.compose.len() != n_arr
        {
            return fail("arrow table lengths disagree".into());
        }
        for (x, &e) in self.identity.iter().enumerate() {
            if self.source[e] != x || self.target[e] != x {
                return fail(format!("identity of object {x} is not an endo-arrow"));
            }
        }
        for f in 0..n_arr {
            let finv = self.inverse[f];
            if self.source[finv] != self.target[f] || self.target[finv] != self.source[f] {
                return fail(format!("inverse of arrow {f} has wrong endpoints"));
            }
            if self.compose[finv][f] != Some(self.identity[self.source[f]]) {
                return fail(format!("inverse ∘ arrow != identity for arrow {f}"));
            }
            if self.compose[f][finv] != Some(self.identity[self.target[f]]) {
                return fail(format!("arrow ∘ inverse != identity for arrow {f}"));
            }
            if self.compose[f][self.identity[self.source[f]]] != Some(f) {
                return fail(format!("arrow {f} ∘ identity != arrow"));
            }
            if self.compose[self.identity[self.target[f]]][f] != Some(f) {
                return fail(format!("identity ∘ arrow {f} != arrow"));
            }
        }
        for g in 0..n_arr {
            for f in 0..n_arr {
                match self.compose[g][f] {
                    Some(h) => {
                        if !self.composable(g, f) {
                            return fail(format!("compose defined on non-composable ({g},{f})"));
                        }
                        if self.source[h] != self.source[f] || self.target[h] != self.target[g] {
                            return fail(format!("composite of ({g},{f}) has wrong endpoints"));
                        }
                    }
                    None => {
                        if self.composable(g, f) {
                            return fail(format!("compose missing on composable ({g},{f})"));
                        }
                    }
                }
            }
        }
        // Associativity on every composable triple.
        for h in 0..n_arr {
            for g in 0..n_arr {
                if !self.composable(h, g) {
                    continue;
                }
                for f in 0..n_arr {
                    if !self.composable(g, f) {
                        continue;
                    }
                    let left = self.compose[self.composed(h, g)][f];
                    let right = self.compose[h][self.composed(g, f)];
                    if left != right {
                        return fail(format!("associativity fails on ({h},{g},{f})"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A structure-preserving map of finite groupoids, as object/arrow tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupoidMorphism {
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl GroupoidMorphism {
    /// Verify functoriality from `dom` to `cod`.
    pub fn check(&self, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> Result<()> {
        let fail = |msg: String| Err(Error::Invalid(format!("not a groupoid morphism: {msg}")));
        if self.on_objects.len() != dom.object_count || self.on_arrows.len() != dom.arrow_count() {
            return fail("table sizes disagree with the domain".into());
        }
        for f in 0..dom.arrow_count() {
            let ff = self.on_arrows[f];
            if cod.source[ff] != self.on_objects[dom.source[f]]
                || cod.target[ff] != self.on_objects[dom.target[f]]
            {
                return fail(format!("arrow {f} maps with wrong endpoints"));
            }
        }
        for (x, &e) in dom.identity.iter().enumerate() {
            if self.on_arrows[e] != cod.identity[self.on_objects[x]] {
                return fail(format!("identity of object {x} not preserved"));
            }
        }
        for g in 0..dom.arrow_count() {
            for f in 0..dom.arrow_count() {
                if let Some(h) = dom.compose[g][f] {
                    if cod.compose[self.on_arrows[g]][self.on_arrows[f]] != Some(self.on_arrows[h])
                    {
                        return fail(format!("composition of ({g},{f}) not preserved"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Is this morphism a bijective isomorphism of the underlying shapes?
    pub fn is_bijective(&self, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> bool {
        let mut obj_seen = vec![false; cod.object_count];
        for &o in &self.on_objects {
            obj_seen[o] = true;
        }
        let mut arr_seen = vec![false; cod.arrow_count()];
        for &a in &self.on_arrows {
            arr_seen[a] = true;
        }
        dom.object_count == cod.object_count
            && dom.arrow_count() == cod.arrow_count()
            && obj_seen.iter().all(|&b| b)
            && arr_seen.iter().all(|&b| b)
    }
}
