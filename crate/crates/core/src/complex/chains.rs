//! Strictly ascending chains of trees, stored flat per degree.

use crate::complex::poset::TreePoset;
use crate::error::{Error, Result};
use crate::fn_core::FnTree;

/// All chains `Γ_0 < … < Γ_d` of one degree, lexicographically sorted by tree
/// index. Chain `k` occupies `data[k·(d+1) .. (k+1)·(d+1)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainLevel {
    degree: usize,
    data: Vec<u16>,
    /// `first[t]..first[t+1]` is the range of chains starting at tree `t`.
    first: Vec<usize>,
}

impl ChainLevel {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn width(&self) -> usize {
        self.degree + 1
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, k: usize) -> &[u16] {
        let w = self.width();
        &self.data[k * w..(k + 1) * w]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u16]> + '_ {
        self.data.chunks_exact(self.width())
    }

    pub fn index_of(&self, chain: &[u16]) -> Option<usize> {
        if chain.len() != self.width() {
            return None;
        }
        let head = *chain.first()? as usize;
        if head + 1 >= self.first.len() {
            return None;
        }
        let (lo, hi) = (self.first[head], self.first[head + 1]);
        let w = self.width();
        let block = &self.data[lo * w..hi * w];
        let mut left = 0usize;
        let mut right = hi - lo;
        while left < right {
            let mid = (left + right) / 2;
            match block[mid * w..(mid + 1) * w].cmp(chain) {
                std::cmp::Ordering::Less => left = mid + 1,
                std::cmp::Ordering::Greater => right = mid,
                std::cmp::Ordering::Equal => return Some(lo + mid),
            }
        }
        None
    }
}

/// Number of chains of each degree, without materializing them.
pub fn chain_counts(poset: &TreePoset) -> Vec<u128> {
    let n = poset.len();
    // by_start[i][k] = number of degree-k chains starting at i. Strict ascent
    // raises dim_BZ, so visiting trees by decreasing dimension sees successors first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(poset.tree(i).dim_bz()));
    let mut by_start: Vec<Vec<u128>> = vec![Vec::new(); n];
    for i in order {
        let mut row = vec![1u128];
        for &j in poset.up(i) {
            let tail = &by_start[j as usize];
            if row.len() < tail.len() + 1 {
                row.resize(tail.len() + 1, 0);
            }
            for (k, &c) in tail.iter().enumerate() {
                row[k + 1] += c;
            }
        }
        by_start[i] = row;
    }
    let mut total: Vec<u128> = Vec::new();
    for row in &by_start {
        if total.len() < row.len() {
            total.resize(row.len(), 0);
        }
        for (k, &c) in row.iter().enumerate() {
            total[k] += c;
        }
    }
    total
}

pub fn enumerate_level(poset: &TreePoset, degree: usize, cap: u128) -> Result<ChainLevel> {
    let count = chain_counts(poset).get(degree).copied().unwrap_or(0);
    if count > cap {
        return Err(Error::CapExceeded {
            what: format!("degree-{degree} chains of FN_{}({})", poset.m(), poset.n()),
            needed: count,
            cap,
        });
    }
    let width = degree + 1;
    let mut data = Vec::with_capacity(count as usize * width);
    let mut first = Vec::with_capacity(poset.len() + 1);
    let mut stack: Vec<u16> = Vec::with_capacity(width);
    for start in 0..poset.len() {
        first.push(data.len() / width);
        stack.clear();
        stack.push(start as u16);
        extend(poset, &mut stack, width, &mut data);
    }
    first.push(data.len() / width);
    debug_assert_eq!(data.len() / width, count as usize);
    Ok(ChainLevel { degree, data, first })
}

fn extend(poset: &TreePoset, stack: &mut Vec<u16>, width: usize, out: &mut Vec<u16>) {
    if stack.len() == width {
        out.extend_from_slice(stack);
        return;
    }
    let top = *stack.last().expect("nonempty") as usize;
    for &next in poset.up(top) {
        stack.push(next);
        extend(poset, stack, width, out);
        stack.pop();
    }
}

/// An explicit chain of trees, for callers outside the flat storage.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct TreeChain {
    trees: Vec<FnTree>,
}

impl TreeChain {
    /// Validates strict ascent and a shared `(n, m)`.
    pub fn new(trees: Vec<FnTree>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::InvalidTree("a chain has at least one tree".into()));
        }
        for w in trees.windows(2) {
            if w[0] == w[1] || !w[0].leq(&w[1])? {
                return Err(Error::InvalidTree(format!("{} < {} fails", w[0], w[1])));
            }
        }
        Ok(TreeChain { trees })
    }

    pub fn trees(&self) -> &[FnTree] {
        &self.trees
    }

    pub fn degree(&self) -> usize {
        self.trees.len() - 1
    }
}

impl std::fmt::Display for TreeChain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.trees.iter().map(|t| format!("({t})")).collect();
        write!(f, "{}", parts.join(" < "))
    }
}

/// All degree-`d` chains of `FN^≤_m(n)` in canonical order.
pub fn enumerate_chains(m: usize, n: usize, d: usize, caps: crate::complex::Caps) -> Result<Vec<TreeChain>> {
    let poset = TreePoset::new(m, n, caps.trees)?;
    let level = enumerate_level(&poset, d, caps.chains)?;
    Ok(level
        .iter()
        .map(|c| TreeChain { trees: c.iter().map(|&t| poset.tree(t as usize).clone()).collect() })
        .collect())
}
