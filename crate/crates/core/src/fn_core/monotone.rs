//! Strictly increasing maps `[n] → [ℓ]` and their twisting by trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fn_core::tree::FnTree;

/// A strictly increasing map `ψ: {0..n} → {0..ℓ}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonotoneMap {
    codomain: usize,
    values: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(codomain: usize, values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMonotone("domain [n] is never empty".into()));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMonotone(format!("values {values:?} not strictly increasing")));
        }
        if *values.last().expect("nonempty") > codomain {
            return Err(Error::InvalidMonotone(format!("values {values:?} exceed codomain [{codomain}]")));
        }
        Ok(MonotoneMap { codomain, values })
    }

    /// Parses a digit string such as `2358` (single-digit values only).
    pub fn from_digits(codomain: usize, digits: &str) -> Result<Self> {
        let values = digits
            .chars()
            .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(|| Error::Parse(format!("bad digit {c:?}"))))
            .collect::<Result<Vec<_>>>()?;
        MonotoneMap::new(codomain, values)
    }

    pub fn identity(n: usize) -> Self {
        MonotoneMap { codomain: n, values: (0..=n).collect() }
    }

    /// The generator `d_i: [n] → [n+1]` skipping `i`.
    pub fn coface(n: usize, i: usize) -> Result<Self> {
        if i > n + 1 {
            return Err(Error::OutOfRange(format!("coface index {i} not in 0..{}", n + 1)));
        }
        Ok(MonotoneMap { codomain: n + 1, values: (0..=n).map(|t| if t < i { t } else { t + 1 }).collect() })
    }

    /// Domain bound `n` of `[n]`.
    pub fn domain(&self) -> usize {
        self.values.len() - 1
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, t: usize) -> usize {
        self.values[t]
    }

    pub fn contains(&self, x: usize) -> bool {
        self.values.binary_search(&x).is_ok()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonotoneMap) -> Result<MonotoneMap> {
        if inner.codomain != self.domain() {
            return Err(Error::Mismatch(format!(
                "cannot compose [{}]→[{}] after [{}]→[{}]",
                self.domain(),
                self.codomain,
                inner.domain(),
                inner.codomain
            )));
        }
        Ok(MonotoneMap { codomain: self.codomain, values: inner.values.iter().map(|&t| self.values[t]).collect() })
    }

    /// Coface indices in application order: `ψ(0)` copies of `d_0`, then
    /// `d_k` for every skipped `k > ψ(0)` in increasing order.
    pub fn coface_factorization(&self) -> Vec<usize> {
        let mut out = vec![0; self.values[0]];
        out.extend((self.values[0] + 1..=self.codomain).filter(|k| !self.contains(*k)));
        out
    }

    /// Applies the factorization to a tree in `FN_m(n)`.
    pub fn apply_to_tree(&self, tree: &FnTree) -> Result<FnTree> {
        if tree.n() != self.domain() {
            return Err(Error::Mismatch(format!("tree has {} leaves, map has domain [{}]", tree.n(), self.domain())));
        }
        self.coface_factorization().into_iter().try_fold(tree.clone(), |t, i| t.coface(i))
    }

    /// The position-level map `ψ^Λ`.
    pub fn twisted(&self, tree: &FnTree) -> Result<MonotoneMap> {
        let image = self.apply_to_tree(tree)?;
        let pos = image.positions();
        let mut values = Vec::with_capacity(self.values.len());
        values.push(self.values[0]);
        for s in 1..=self.domain() {
            values.push(pos[self.values[tree.label_at(s)]]);
        }
        MonotoneMap::new(self.codomain, values)
            .map_err(|e| Error::Invariant(format!("twisted map of {self} by {tree} is not monotone: {e}")))
    }
}

impl fmt::Display for MonotoneMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.codomain >= 10 { "," } else { "" };
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(sep))
    }
}

/// `d_u(p)`: the index map skipping `u`.
pub fn coface_index(u: usize, p: usize) -> usize {
    if p < u {
        p
    } else {
        p + 1
    }
}

/// `s_u(x)`: the index map repeating `u`.
pub fn codegeneracy_index(u: usize, x: usize) -> usize {
    if x <= u {
        x
    } else {
        x - 1
    }
}
