use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fn_core::FnTree;

/// Default tolerance for reading strata and checking unit norms.
pub const EPS_GEO: f64 = 1e-9;
/// Default tolerance for floating-point checks of algebraic identities.
pub const EPS_ALGEBRAIC: f64 = 1e-12;

/// `n` labelled points in `ℝ^m`; `points[i − 1]` is the point of label `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub m: usize,
    pub points: Vec<Vec<f64>>,
}

impl Configuration {
    pub fn new(m: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(Error::Mismatch(format!("point of dimension {} in ℝ^{m}", p.len())));
        }
        Ok(Configuration { m, points })
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn point(&self, label: usize) -> &[f64] {
        &self.points[label - 1]
    }

    /// `x_j − x_i`.
    pub fn difference(&self, i: usize, j: usize) -> Vec<f64> {
        self.point(j).iter().zip(self.point(i)).map(|(b, a)| b - a).collect()
    }

    /// Smallest pairwise sup-distance; `∞` for fewer than two points.
    pub fn separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 1..=self.n() {
            for j in i + 1..=self.n() {
                let d = self.difference(i, j).iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
                best = best.min(d);
            }
        }
        best
    }
}

pub(crate) fn basis(m: usize, k: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[k] = 1.0;
    v
}

/// The configuration placing label `σ(p+1)` at `x_{σ(p)} + θ_p e_{1+a_p}`.
pub fn config_from_tree(tree: &FnTree, theta: &[f64]) -> Result<Configuration> {
    let n = tree.n();
    if theta.len() != n.saturating_sub(1) {
        return Err(Error::Mismatch(format!("{} weights for a tree with {n} leaves", theta.len())));
    }
    if let Some(w) = theta.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::Config(format!("weight {w} is not a positive real")));
    }
    let m = tree.m();
    let mut points = vec![vec![0.0; m]; n];
    for p in 1..n {
        let mut x = points[tree.label_at(p) - 1].clone();
        x[tree.depths()[p - 1]] += theta[p - 1];
        points[tree.label_at(p + 1) - 1] = x;
    }
    Configuration::new(m, points)
}

/// Lexicographic comparison treating coordinates within `eps` as equal;
/// also returns the first differing coordinate.
fn compare(a: &[f64], b: &[f64], eps: f64) -> Option<(Ordering, usize)> {
    a.iter().zip(b).enumerate().find_map(|(k, (x, y))| {
        let delta = y - x;
        (delta.abs() > eps).then(|| (if delta > 0.0 { Ordering::Less } else { Ordering::Greater }, k))
    })
}

/// Reads the tree whose stratum contains `c`: sorts the points
/// lexicographically and records the first coordinate where neighbours differ.
pub fn stratum_of(c: &Configuration, eps: f64) -> Result<FnTree> {
    let n = c.n();
    if n == 0 {
        return FnTree::empty(c.m);
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if compare(c.point(i), c.point(j), eps).is_none() {
                return Err(Error::Invariant(format!("points {i} and {j} coincide within {eps}")));
            }
        }
    }
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.sort_by(|&i, &j| compare(c.point(i), c.point(j), eps).map_or(Ordering::Equal, |(o, _)| o));
    let mut depths = Vec::with_capacity(n - 1);
    for w in sigma.windows(2) {
        let (o, k) = compare(c.point(w[0]), c.point(w[1]), eps).expect("distinct");
        if o != Ordering::Less {
            return Err(Error::Invariant("lexicographic comparison is ambiguous at this tolerance".into()));
        }
        depths.push(k);
    }
    // Non-consecutive pairs must agree with the min-rule of the sorted chain.
    for p in 0..n {
        for q in p + 2..n {
            let (o, k) = compare(c.point(sigma[p]), c.point(sigma[q]), eps).expect("distinct");
            let expected = depths[p..q].iter().copied().min().expect("nonempty");
            if o != Ordering::Less || k != expected {
                return Err(Error::Invariant("lexicographic comparison is ambiguous at this tolerance".into()));
            }
        }
    }
    FnTree::new(n, c.m, sigma, depths)
}
