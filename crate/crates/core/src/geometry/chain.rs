use serde::{Deserialize, Serialize};

use crate::complex::TreeChain;
use crate::error::{Error, Result};
use crate::fn_core::FnTree;
use crate::geometry::config::{config_from_tree, Configuration, EPS_GEO};

/// Convex combination of weighted trees along a chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedChain {
    pub trees: Vec<FnTree>,
    pub lambda: Vec<f64>,
    pub weights: Vec<Vec<f64>>,
}

impl WeightedChain {
    /// Validates a plain chain: strictly ascending trees, convex
    /// coefficients and positive finite weights.
    pub fn new(trees: Vec<FnTree>, lambda: Vec<f64>, weights: Vec<Vec<f64>>) -> Result<Self> {
        TreeChain::new(trees.clone())?;
        if lambda.len() != trees.len() || weights.len() != trees.len() {
            return Err(Error::Mismatch("one coefficient and one weight vector per tree".into()));
        }
        if lambda.iter().any(|l| !(*l >= 0.0 && l.is_finite())) || (lambda.iter().sum::<f64>() - 1.0).abs() > EPS_GEO {
            return Err(Error::Config("coefficients must be nonnegative and sum to 1".into()));
        }
        let n = trees[0].n();
        for w in &weights {
            if w.len() != n.saturating_sub(1) || w.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                return Err(Error::Config(format!("weights must be {} positive reals", n.saturating_sub(1))));
            }
        }
        Ok(WeightedChain { trees, lambda, weights })
    }

    pub fn single(tree: FnTree, weights: Vec<f64>) -> Result<Self> {
        WeightedChain::new(vec![tree], vec![1.0], vec![weights])
    }

    pub fn n(&self) -> usize {
        self.trees[0].n()
    }

    pub fn m(&self) -> usize {
        self.trees[0].m()
    }
}

/// `Σ_k λ_k x(Γ_k, ω^k)`, checked to be a configuration.
pub fn config_from_chain(w: &WeightedChain) -> Result<Configuration> {
    let (n, m) = (w.n(), w.m());
    let mut points = vec![vec![0.0; m]; n];
    for ((tree, &l), theta) in w.trees.iter().zip(&w.lambda).zip(&w.weights) {
        if l == 0.0 {
            continue;
        }
        let c = config_from_tree(tree, theta)?;
        for (acc, p) in points.iter_mut().zip(&c.points) {
            for (a, x) in acc.iter_mut().zip(p) {
                *a += l * x;
            }
        }
    }
    let c = Configuration::new(m, points)?;
    if c.separation() <= EPS_GEO {
        return Err(Error::Invariant("convex combination has coincident points".into()));
    }
    Ok(c)
}

/// Positions `(p, q)` of `min(i, j)` and `max(i, j)` in the order of `tree`.
pub(crate) fn span(tree: &FnTree, i: usize, j: usize) -> (usize, usize) {
    let (a, b) = (tree.position_of(i), tree.position_of(j));
    (a.min(b), a.max(b))
}

/// `x_j − x_i` by summing the weighted fork directions between the two
/// labels in each tree.
pub fn pair_difference(w: &WeightedChain, i: usize, j: usize) -> Result<Vec<f64>> {
    let n = w.n();
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::OutOfRange(format!("pair ({i}, {j}) for {n} labels")));
    }
    let mut v = vec![0.0; w.m()];
    for ((tree, &l), omega) in w.trees.iter().zip(&w.lambda).zip(&w.weights) {
        let sign = f64::from(tree.sgn(i, j)?);
        let (p, q) = span(tree, i, j);
        for h in p..q {
            v[tree.depths()[h - 1]] += l * sign * omega[h - 1];
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_tree_chain_averages_vertices() {
        let t0 = FnTree::parse("1<0 2", 2).unwrap();
        let t1 = FnTree::parse("1<1 2", 2).unwrap();
        let w = WeightedChain::new(vec![t0, t1], vec![0.5, 0.5], vec![vec![1.0], vec![1.0]]).unwrap();
        let c = config_from_chain(&w).unwrap();
        assert_eq!(c.points, vec![vec![0.0, 0.0], vec![0.5, 0.5]]);
        assert_eq!(pair_difference(&w, 1, 2).unwrap(), vec![0.5, 0.5]);
        assert_eq!(pair_difference(&w, 2, 1).unwrap(), vec![-0.5, -0.5]);
    }

    #[test]
    fn walking_across_forks() {
        let t = FnTree::parse("1<1 3<0 2<1 4", 2).unwrap();
        let w = WeightedChain::single(t, vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(pair_difference(&w, 1, 4).unwrap(), vec![2.0, 5.0]);
        assert_eq!(pair_difference(&w, 3, 2).unwrap(), vec![2.0, 0.0]);
        let c = config_from_chain(&w).unwrap();
        assert_eq!(c.difference(1, 4), vec![2.0, 5.0]);
    }

    #[test]
    fn rejects_non_chains_and_bad_coefficients() {
        let t0 = FnTree::parse("1<0 2", 2).unwrap();
        let t1 = FnTree::parse("1<1 2", 2).unwrap();
        assert!(WeightedChain::new(vec![t1.clone(), t0.clone()], vec![0.5, 0.5], vec![vec![1.0], vec![1.0]]).is_err());
        assert!(WeightedChain::new(vec![t0.clone(), t1.clone()], vec![0.5, 0.6], vec![vec![1.0], vec![1.0]]).is_err());
        assert!(WeightedChain::new(vec![t0, t1], vec![0.5, 0.5], vec![vec![1.0], vec![-1.0]]).is_err());
    }
}
