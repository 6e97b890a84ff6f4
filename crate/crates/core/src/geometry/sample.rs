//! Seeded random trees, chains, tensors and stratum points.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::TreeChain;
use crate::fn_core::{FnTree, MonotoneMap};
use crate::geometry::chain::WeightedChain;
use crate::geometry::konts::{normalize, KontsTensor};
use crate::geometry::tau::{ExtendedChain, Stratum, Weight};

pub fn random_tree<R: Rng>(rng: &mut R, m: usize, n: usize) -> FnTree {
    let mut sigma: Vec<usize> = (1..=n).collect();
    sigma.shuffle(rng);
    let depths = (1..n).map(|_| rng.gen_range(0..m)).collect();
    FnTree::new(n, m, sigma, depths).expect("valid random tree")
}

/// A random tree strictly above `tree`, if one is found.
pub fn random_step_up<R: Rng>(rng: &mut R, tree: &FnTree) -> Option<FnTree> {
    let (m, n) = (tree.m(), tree.n());
    for _ in 0..64 {
        let cand = random_tree(rng, m, n);
        if cand != *tree && tree.leq(&cand).unwrap_or(false) {
            return Some(cand);
        }
    }
    let raisable: Vec<usize> = (0..n.saturating_sub(1)).filter(|&p| tree.depths()[p] + 1 < m).collect();
    let &p = raisable.choose(rng)?;
    let mut depths = tree.depths().to_vec();
    depths[p] = rng.gen_range(depths[p] + 1..m);
    FnTree::new(n, m, tree.sigma().to_vec(), depths).ok()
}

/// A strictly ascending chain of at most `max_len` trees.
pub fn random_chain<R: Rng>(rng: &mut R, m: usize, n: usize, max_len: usize) -> Vec<FnTree> {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut chain = vec![random_tree(rng, m, n)];
    while chain.len() < len {
        match random_step_up(rng, chain.last().expect("nonempty")) {
            Some(t) => chain.push(t),
            None => break,
        }
    }
    chain
}

pub fn random_convex<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

pub fn random_weighted_chain<R: Rng>(rng: &mut R, m: usize, n: usize, max_len: usize) -> WeightedChain {
    let trees = random_chain(rng, m, n, max_len);
    let lambda = random_convex(rng, trees.len());
    let weights = trees.iter().map(|_| (1..n).map(|_| rng.gen_range(0.1..3.0)).collect()).collect();
    WeightedChain::new(trees, lambda, weights).expect("valid random chain")
}

/// A tensor of random unit vectors.
pub fn random_tensor<R: Rng>(rng: &mut R, m: usize, n: usize) -> KontsTensor {
    KontsTensor::from_fn(n, m, |_, _| loop {
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if let Some(u) = normalize(&v) {
            return Ok(u);
        }
    })
    .expect("sampling is infallible")
}

pub fn random_monotone<R: Rng>(rng: &mut R, n: usize, ell: usize) -> MonotoneMap {
    let mut pool: Vec<usize> = (0..=ell).collect();
    pool.shuffle(rng);
    let mut values = pool[..=n].to_vec();
    values.sort_unstable();
    MonotoneMap::new(ell, values).expect("n ≤ ℓ")
}

/// A random point of a random stratum over `Γ` chains on `ell` leaves, with
/// `D = id`. Returns `None` when the drawn data does not form a stratum.
pub fn random_stratum_point<R: Rng>(rng: &mut R, m: usize, n: usize, ell: usize, max_len: usize) -> Option<(ExtendedChain, Stratum)> {
    let phi = random_monotone(rng, n, ell);
    let source = random_chain(rng, m, n, max_len);
    let trees = source.iter().map(|t| phi.apply_to_tree(t)).collect::<crate::Result<Vec<_>>>().ok()?;
    TreeChain::new(trees.clone()).ok()?;
    let slots = ell.saturating_sub(1);
    let mut weights = Vec::with_capacity(trees.len());
    for lam in &source {
        let psi = phi.twisted(lam).ok()?;
        let (lo, hi) = (psi.apply(0), psi.apply(n));
        let v = (1..=slots)
            .map(|a| {
                if a < lo || a > hi {
                    if rng.gen_bool(0.2) {
                        Weight::Finite(0.0)
                    } else {
                        Weight::Finite(rng.gen_range(0.1..3.0))
                    }
                } else if a == lo || a == hi {
                    Weight::Infinite
                } else if psi.contains(a) {
                    Weight::Finite(rng.gen_range(0.1..3.0))
                } else {
                    Weight::Finite(0.0)
                }
            })
            .collect();
        weights.push(v);
    }
    let lambda = random_convex(rng, trees.len());
    let d_map = MonotoneMap::identity(trees.len() - 1);
    Some((ExtendedChain { trees, lambda, weights }, Stratum { source, phi, d_map }))
}

/// A random point of a trivial stratum: a chain on `ell` leaves ending at
/// the trivial tree, with all weight on that tree.
pub fn random_trivial_point<R: Rng>(rng: &mut R, m: usize, n: usize, ell: usize, max_len: usize) -> (ExtendedChain, Stratum) {
    let top = FnTree::trivial(ell, m).expect("trivial tree");
    let mut trees: Vec<FnTree> = random_chain(rng, m, ell, max_len).into_iter().filter(|t| t.leq(&top).unwrap_or(false) && *t != top).collect();
    trees.truncate(max_len.saturating_sub(1));
    trees.push(top);
    let trees = TreeChain::new(trees.clone()).map(|_| trees).unwrap_or_else(|_| vec![FnTree::trivial(ell, m).expect("trivial tree")]);
    let d = trees.len() - 1;
    let mut lambda = vec![0.0; d + 1];
    lambda[d] = 1.0;
    let weights = trees
        .iter()
        .map(|_| (1..ell).map(|_| if rng.gen_bool(0.3) { Weight::Infinite } else { Weight::Finite(rng.gen_range(0.0..2.0)) }).collect())
        .collect();
    let stratum = Stratum {
        source: vec![FnTree::trivial(n, m).expect("trivial tree")],
        phi: random_monotone(rng, n, ell),
        d_map: MonotoneMap::new(d, vec![d]).expect("single value"),
    };
    (ExtendedChain { trees, lambda, weights }, stratum)
}
