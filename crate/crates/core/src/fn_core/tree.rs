//! Fox–Neuwirth trees (depth-orderings) and their cosimplicial action.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative position of two labels in a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    Before,
    After,
}

impl Order {
    pub fn sign(self) -> i8 {
        match self {
            Order::Before => 1,
            Order::After => -1,
        }
    }
}

/// A depth-ordering: labels `sigma` listed by position, and the depth index
/// shared by each pair of consecutive positions.
///
/// Labels and positions are 1-based in the public API. The empty tree
/// (`n = 0`) is the unique element of the zeroth cosimplicial level.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TreeJson", into = "TreeJson")]
pub struct FnTree {
    sigma: Vec<usize>,
    depths: Vec<usize>,
    m: usize,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    n: usize,
    m: usize,
    sigma: Vec<usize>,
    depths: Vec<usize>,
}

impl TryFrom<TreeJson> for FnTree {
    type Error = Error;
    fn try_from(j: TreeJson) -> Result<Self> {
        FnTree::new(j.n, j.m, j.sigma, j.depths)
    }
}

impl From<FnTree> for TreeJson {
    fn from(t: FnTree) -> Self {
        TreeJson { n: t.n(), m: t.m, sigma: t.sigma, depths: t.depths }
    }
}

impl FnTree {
    /// Validating constructor.
    pub fn new(n: usize, m: usize, sigma: Vec<usize>, depths: Vec<usize>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidTree(format!("height m = {m} must be at least 2")));
        }
        if sigma.len() != n {
            return Err(Error::InvalidTree(format!("sigma has {} entries, expected {n}", sigma.len())));
        }
        let mut seen = vec![false; n + 1];
        for &label in &sigma {
            if label == 0 || label > n || seen[label] {
                return Err(Error::InvalidTree(format!("sigma {sigma:?} is not a permutation of 1..{n}")));
            }
            seen[label] = true;
        }
        if depths.len() != n.saturating_sub(1) {
            return Err(Error::InvalidTree(format!(
                "depths has {} entries, expected {}",
                depths.len(),
                n.saturating_sub(1)
            )));
        }
        if let Some(bad) = depths.iter().find(|&&a| a >= m) {
            return Err(Error::InvalidTree(format!("depth {bad} out of range 0..{}", m - 1)));
        }
        Ok(FnTree { sigma, depths, m })
    }

    /// The tree with no leaves.
    pub fn empty(m: usize) -> Result<Self> {
        FnTree::new(0, m, Vec::new(), Vec::new())
    }

    /// The trivial tree: identity permutation, every depth `m − 1`.
    pub fn trivial(n: usize, m: usize) -> Result<Self> {
        FnTree::new(n, m, (1..=n).collect(), vec![m.saturating_sub(1); n.saturating_sub(1)])
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// Label at a 1-based position.
    pub fn label_at(&self, position: usize) -> usize {
        self.sigma[position - 1]
    }

    /// 1-based position of a label.
    pub fn position_of(&self, label: usize) -> usize {
        self.sigma.iter().position(|&l| l == label).map(|p| p + 1).expect("label present")
    }

    /// Inverse permutation as a 1-based table: `inv[label] = position`.
    pub fn positions(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n() + 1];
        for (p, &l) in self.sigma.iter().enumerate() {
            inv[l] = p + 1;
        }
        inv
    }

    /// Dimension of the associated BZ cell.
    pub fn dim_bz(&self) -> usize {
        self.depths.iter().sum()
    }

    pub fn is_trivial(&self) -> bool {
        self.sigma.iter().enumerate().all(|(p, &l)| l == p + 1) && self.depths.iter().all(|&a| a + 1 == self.m)
    }

    fn check_label(&self, label: usize) -> Result<()> {
        if label == 0 || label > self.n() {
            return Err(Error::OutOfRange(format!("label {label} not in 1..{}", self.n())));
        }
        Ok(())
    }

    /// Order and depth of the pair `(alpha, beta)`.
    pub fn pair_depth(&self, alpha: usize, beta: usize) -> Result<(Order, usize)> {
        self.check_label(alpha)?;
        self.check_label(beta)?;
        if alpha == beta {
            return Err(Error::OutOfRange(format!("pair ({alpha}, {beta}) has equal labels")));
        }
        let pa = self.position_of(alpha);
        let pb = self.position_of(beta);
        Ok(self.relation_by_position(pa, pb))
    }

    fn relation_by_position(&self, pa: usize, pb: usize) -> (Order, usize) {
        let (lo, hi, order) = if pa < pb { (pa, pb, Order::Before) } else { (pb, pa, Order::After) };
        let depth = self.depths[lo - 1..hi - 1].iter().copied().min().expect("distinct positions");
        (order, depth)
    }

    /// `+1` iff `i` precedes `j`.
    pub fn sgn(&self, i: usize, j: usize) -> Result<i8> {
        self.pair_depth(i, j).map(|(o, _)| o.sign())
    }

    /// Table of pairwise relations indexed by labels: entry `[a][b]` for
    /// `a < b` holds `(a precedes b, depth)`.
    pub fn relation_table(&self) -> RelationTable {
        RelationTable::new(self)
    }

    /// Poset order: every relation of `self` persists in `other` or deepens.
    pub fn leq(&self, other: &FnTree) -> Result<bool> {
        if self.n() != other.n() || self.m != other.m {
            return Err(Error::Mismatch(format!(
                "trees in FN_{}({}) and FN_{}({})",
                self.m,
                self.n(),
                other.m,
                other.n()
            )));
        }
        Ok(self.relation_table().leq(&other.relation_table()))
    }

    /// Coface `d_i`, landing in the level with one more leaf.
    pub fn coface(&self, i: usize) -> Result<FnTree> {
        let n = self.n();
        if i > n + 1 {
            return Err(Error::OutOfRange(format!("coface index {i} not in 0..{}", n + 1)));
        }
        let top = self.m - 1;
        let (sigma, depths) = if n == 0 {
            (vec![1], Vec::new())
        } else if i == 0 {
            let mut sigma = Vec::with_capacity(n + 1);
            sigma.push(1);
            sigma.extend(self.sigma.iter().map(|&x| x + 1));
            let mut depths = Vec::with_capacity(n);
            depths.push(top);
            depths.extend_from_slice(&self.depths);
            (sigma, depths)
        } else if i == n + 1 {
            let mut sigma = self.sigma.clone();
            sigma.push(n + 1);
            let mut depths = self.depths.clone();
            depths.push(top);
            (sigma, depths)
        } else {
            let alpha = self.position_of(i);
            let shift = |x: usize| if x < i { x } else { x + 1 };
            let mut sigma = Vec::with_capacity(n + 1);
            for (p, &x) in self.sigma.iter().enumerate() {
                if p + 1 == alpha {
                    sigma.push(i);
                    sigma.push(i + 1);
                } else {
                    sigma.push(shift(x));
                }
            }
            let mut depths = self.depths.clone();
            depths.insert(alpha - 1, top);
            (sigma, depths)
        };
        Ok(FnTree { sigma, depths, m: self.m })
    }

    /// Codegeneracy `s_j`: deletes label `j + 1` and merges depths by `min`.
    pub fn codegeneracy(&self, j: usize) -> Result<FnTree> {
        let n = self.n();
        if j >= n {
            return Err(Error::OutOfRange(format!("codegeneracy index {j} not in 0..{}", n.saturating_sub(1))));
        }
        let removed = j + 1;
        let beta = self.position_of(removed);
        let sigma: Vec<usize> = self
            .sigma
            .iter()
            .filter(|&&x| x != removed)
            .map(|&x| if x > removed { x - 1 } else { x })
            .collect();
        let mut depths = self.depths.clone();
        if n >= 2 {
            if beta == 1 {
                depths.remove(0);
            } else if beta == n {
                depths.pop();
            } else {
                let merged = depths[beta - 2].min(depths[beta - 1]);
                depths[beta - 2] = merged;
                depths.remove(beta - 1);
            }
        }
        Ok(FnTree { sigma, depths, m: self.m })
    }

    /// Extremal hair blocks `(a, b, E)`.
    pub fn extremal(&self) -> Extremal {
        let n = self.n();
        let top = self.m - 1;
        let fixed = |k: usize| self.sigma[k - 1] == k;
        let mut a = 0;
        for cand in (1..n).rev() {
            if (1..=cand + 1).all(fixed) && (1..=cand).all(|k| self.depths[k - 1] == top) {
                a = cand;
                break;
            }
        }
        let mut b = n;
        for cand in 1..n {
            if (cand..=n).all(fixed) && (cand..n).all(|k| self.depths[k - 1] == top) {
                b = cand;
                break;
            }
        }
        let mut set: Vec<usize> = (1..=a).collect();
        set.extend((b..n).filter(|k| *k > a));
        Extremal { a, b, set }
    }

    /// Parses the text form `3<2 1<1 2<0 5<1 4` for a given height.
    pub fn parse(text: &str, m: usize) -> Result<FnTree> {
        let text = text.trim();
        if text.is_empty() || text == "()" {
            return FnTree::empty(m);
        }
        let mut sigma = Vec::new();
        let mut depths = Vec::new();
        for (k, piece) in text.split('<').enumerate() {
            let piece = piece.trim();
            let mut words = piece.split_whitespace();
            if k > 0 {
                let d = words.next().ok_or_else(|| Error::Parse(format!("missing depth in {text:?}")))?;
                depths.push(d.parse::<usize>().map_err(|e| Error::Parse(format!("depth {d:?}: {e}")))?);
            }
            let l = words.next().ok_or_else(|| Error::Parse(format!("missing label in {text:?}")))?;
            sigma.push(l.parse::<usize>().map_err(|e| Error::Parse(format!("label {l:?}: {e}")))?);
            if words.next().is_some() {
                return Err(Error::Parse(format!("unexpected token in {piece:?}")));
            }
        }
        FnTree::new(sigma.len(), m, sigma, depths)
    }
}

impl fmt::Display for FnTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sigma.is_empty() {
            return write!(f, "()");
        }
        write!(f, "{}", self.sigma[0])?;
        for (a, l) in self.depths.iter().zip(&self.sigma[1..]) {
            write!(f, "<{a} {l}")?;
        }
        Ok(())
    }
}

/// Extremal hair blocks of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extremal {
    pub a: usize,
    pub b: usize,
    pub set: Vec<usize>,
}

/// Precomputed pairwise relations, used for fast order comparisons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    n: usize,
    // Upper triangle, row-major over label pairs a < b: depth and precedence bit.
    cells: Vec<(u8, bool)>,
}

impl RelationTable {
    fn new(t: &FnTree) -> Self {
        let n = t.n();
        let pos = t.positions();
        let mut cells = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for a in 1..=n {
            for b in a + 1..=n {
                let (o, d) = t.relation_by_position(pos[a], pos[b]);
                cells.push((d as u8, o == Order::Before));
            }
        }
        RelationTable { n, cells }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(a precedes b, depth)` for labels `a < b`.
    pub fn get(&self, a: usize, b: usize) -> (bool, usize) {
        debug_assert!(a < b && b <= self.n);
        let row_start = (a - 1) * (2 * self.n - a) / 2;
        let (d, before) = self.cells[row_start + (b - a - 1)];
        (before, d as usize)
    }

    pub fn leq(&self, other: &RelationTable) -> bool {
        self.cells.iter().zip(&other.cells).all(|(&(r, o), &(s, o2))| match s.cmp(&r) {
            Ordering::Greater => true,
            Ordering::Equal => o == o2,
            Ordering::Less => false,
        })
    }
}

/// All trees of `FN_m(n)` in canonical order (lexicographic on `(sigma, depths)`).
pub fn enumerate_trees(m: usize, n: usize, cap: u128) -> Result<Vec<FnTree>> {
    if m < 2 {
        return Err(Error::InvalidTree(format!("height m = {m} must be at least 2")));
    }
    let count = tree_count(m, n);
    if count > cap {
        return Err(Error::CapExceeded { what: format!("FN_{m}({n}) trees"), needed: count, cap });
    }
    let perms = permutations(n);
    let depth_words = words(m, n.saturating_sub(1));
    let mut out = Vec::with_capacity(count as usize);
    for sigma in &perms {
        for depths in &depth_words {
            out.push(FnTree { sigma: sigma.clone(), depths: depths.clone(), m });
        }
    }
    Ok(out)
}

/// `n! · m^(n−1)`, saturating.
pub fn tree_count(m: usize, n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    let pow = (m as u128).saturating_pow(n.saturating_sub(1) as u32);
    fact.saturating_mul(pow)
}

/// Permutations of `1..=n` in lexicographic order.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (1..=n).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..current.len()).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..current.len()).rev().find(|&j| current[j] > current[i - 1]).expect("successor exists");
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

/// All words of length `len` over `0..m`, lexicographic.
fn words(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..m).map(move |a| {
                    let mut w = w.clone();
                    w.push(a);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str, m: usize) -> FnTree {
        FnTree::parse(s, m).unwrap()
    }

    #[test]
    fn figure_tree_pair_depths() {
        let g = FnTree::new(5, 3, vec![3, 1, 2, 5, 4], vec![2, 1, 0, 1]).unwrap();
        assert_eq!(g.to_string(), "3<2 1<1 2<0 5<1 4");
        assert_eq!(g.pair_depth(3, 2).unwrap(), (Order::Before, 1));
        assert_eq!(g.pair_depth(2, 3).unwrap(), (Order::After, 1));
        assert_eq!(g.sgn(3, 1).unwrap(), 1);
        assert_eq!(g.sgn(1, 3).unwrap(), -1);
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(FnTree::new(2, 2, vec![1, 2], vec![2]).is_err());
        assert!(FnTree::new(2, 2, vec![1, 1], vec![0]).is_err());
        assert!(FnTree::new(2, 2, vec![1, 2], vec![]).is_err());
        assert!(FnTree::new(1, 2, vec![1], vec![]).is_ok());
    }

    #[test]
    fn order_examples() {
        assert!(t("1<0 2", 2).leq(&t("1<1 2", 2)).unwrap());
        assert!(!t("1<1 2", 2).leq(&t("2<1 1", 2)).unwrap());
        assert!(t("2<0 1", 2).leq(&t("1<1 2", 2)).unwrap());
    }

    #[test]
    fn coface_examples() {
        let g = t("1<0 2", 2);
        assert_eq!(g.coface(1).unwrap(), t("1<1 2<0 3", 2));
        assert_eq!(g.coface(0).unwrap(), t("1<1 2<0 3", 2));
        assert_eq!(g.coface(3).unwrap(), t("1<0 2<1 3", 2));
        assert!(g.coface(4).is_err());
        let e = FnTree::empty(3).unwrap();
        assert_eq!(e.coface(0).unwrap(), t("1", 3));
        assert_eq!(e.coface(1).unwrap(), t("1", 3));
    }

    #[test]
    fn codegeneracy_examples() {
        assert_eq!(t("1<1 2", 2).codegeneracy(0).unwrap(), t("1", 2));
        assert_eq!(t("1<1 2<0 3", 2).codegeneracy(1).unwrap(), t("1<0 2", 2));
        assert_eq!(t("1<0 2", 2).coface(1).unwrap().codegeneracy(1).unwrap(), t("1<0 2", 2));
        assert_eq!(t("1", 2).codegeneracy(0).unwrap(), FnTree::empty(2).unwrap());
    }

    #[test]
    fn extremal_examples() {
        let e = FnTree::trivial(4, 2).unwrap().extremal();
        assert_eq!((e.a, e.b, e.set), (3, 1, vec![1, 2, 3]));
        let e = t("2<0 1", 2).extremal();
        assert_eq!((e.a, e.b, e.set), (0, 2, vec![]));
        let e = t("1<1 2<0 3", 2).extremal();
        assert_eq!((e.a, e.b, e.set), (1, 3, vec![1]));
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_trees(2, 2, u128::MAX).unwrap().len(), 4);
        assert_eq!(enumerate_trees(3, 2, u128::MAX).unwrap().len(), 6);
        let all = enumerate_trees(2, 3, u128::MAX).unwrap();
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(enumerate_trees(2, 3, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn text_and_json_round_trip() {
        let g = t("3<2 1<1 2<0 5<1 4", 3);
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(json, r#"{"n":5,"m":3,"sigma":[3,1,2,5,4],"depths":[2,1,0,1]}"#);
        assert_eq!(serde_json::from_str::<FnTree>(&json).unwrap(), g);
        assert!(serde_json::from_str::<FnTree>(r#"{"n":2,"m":2,"sigma":[1,2],"depths":[5]}"#).is_err());
        assert_eq!(t(&g.to_string(), 3), g);
    }
}
