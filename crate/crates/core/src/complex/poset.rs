//! The finite poset `FN^≤_m(n)` with precomputed up-sets.

use crate::error::{Error, Result};
use crate::fn_core::{enumerate_trees, FnTree, RelationTable};

/// Trees in canonical order together with, for each tree, the sorted indices
/// of the strictly larger trees.
#[derive(Debug, Clone)]
pub struct TreePoset {
    m: usize,
    n: usize,
    trees: Vec<FnTree>,
    up: Vec<Vec<u16>>,
}

impl TreePoset {
    pub fn new(m: usize, n: usize, cap: u128) -> Result<Self> {
        let trees = enumerate_trees(m, n, cap)?;
        if trees.len() > u16::MAX as usize {
            return Err(Error::CapExceeded {
                what: format!("FN_{m}({n}) trees addressable by 16-bit indices"),
                needed: trees.len() as u128,
                cap: u16::MAX as u128,
            });
        }
        let tables: Vec<RelationTable> = trees.iter().map(FnTree::relation_table).collect();
        let up = (0..trees.len())
            .map(|i| {
                (0..trees.len()).filter(|&j| j != i && tables[i].leq(&tables[j])).map(|j| j as u16).collect()
            })
            .collect::<Vec<Vec<u16>>>();
        for (i, ups) in up.iter().enumerate() {
            if let Some(&j) = ups.iter().find(|&&j| trees[j as usize].dim_bz() <= trees[i].dim_bz()) {
                return Err(Error::Invariant(format!(
                    "{} < {} without an increase in dimension",
                    trees[i], trees[j as usize]
                )));
            }
        }
        Ok(TreePoset { m, n, trees, up })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn trees(&self) -> &[FnTree] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &FnTree {
        &self.trees[i]
    }

    /// Indices of trees strictly above tree `i`, ascending.
    pub fn up(&self, i: usize) -> &[u16] {
        &self.up[i]
    }

    pub fn less(&self, i: usize, j: usize) -> bool {
        self.up[i].binary_search(&(j as u16)).is_ok()
    }

    /// Canonical index of a tree of this level.
    pub fn index_of(&self, t: &FnTree) -> Option<usize> {
        self.trees.binary_search(t).ok()
    }
}
