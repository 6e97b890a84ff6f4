use serde::{Deserialize, Serialize};

use crate::complex::TreeChain;
use crate::error::{Error, Result};
use crate::fn_core::{classify_pair, FnTree, MonotoneMap};
use crate::geometry::chain::{span, WeightedChain};
use crate::geometry::config::EPS_GEO;
use crate::geometry::konts::{normalize, CollapseDirection, KontsTensor};

/// A branch weight in `[0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    Finite(f64),
    Infinite,
}

impl Weight {
    fn is_zero(self) -> bool {
        self == Weight::Finite(0.0)
    }

    fn is_positive_real(self) -> bool {
        matches!(self, Weight::Finite(w) if w > 0.0 && w.is_finite())
    }
}

/// A weighted chain `Γ_0 < … < Γ_d` whose weights may be `0` or `∞`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtendedChain {
    pub trees: Vec<FnTree>,
    pub lambda: Vec<f64>,
    pub weights: Vec<Vec<Weight>>,
}

impl ExtendedChain {
    pub fn from_plain(w: &WeightedChain) -> Self {
        ExtendedChain {
            trees: w.trees.clone(),
            lambda: w.lambda.clone(),
            weights: w.weights.iter().map(|v| v.iter().map(|&x| Weight::Finite(x)).collect()).collect(),
        }
    }

    /// The plain chain obtained by replacing `0` by `small` and `∞` by `large`.
    pub fn approximate(&self, small: f64, large: f64) -> Result<WeightedChain> {
        let weights = self
            .weights
            .iter()
            .map(|v| {
                v.iter()
                    .map(|w| match *w {
                        Weight::Infinite => large,
                        Weight::Finite(x) if x == 0.0 => small,
                        Weight::Finite(x) => x,
                    })
                    .collect()
            })
            .collect();
        WeightedChain::new(self.trees.clone(), self.lambda.clone(), weights)
    }

    pub fn ell(&self) -> usize {
        self.trees[0].n()
    }
}

/// The stratum data: a chain `Λ_0 < … < Λ_r` on `n` leaves, a map
/// `φ: [n] → [ℓ]` and a map `D: [r] → [d]` with `φ Λ_k = Γ_{D(k)}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    pub source: Vec<FnTree>,
    pub phi: MonotoneMap,
    pub d_map: MonotoneMap,
}

impl Stratum {
    /// The stratum of a plain chain: `φ = id`, `D = id`.
    pub fn plain(trees: &[FnTree]) -> Self {
        Stratum {
            source: trees.to_vec(),
            phi: MonotoneMap::identity(trees[0].n()),
            d_map: MonotoneMap::identity(trees.len() - 1),
        }
    }

    /// `r = 0`, a single trivial tree, and `D(0) = d`.
    pub fn is_trivial(&self) -> bool {
        self.source.len() == 1 && self.source[0].is_trivial() && self.d_map.apply(0) == self.d_map.codomain()
    }
}

fn check(w: &ExtendedChain, s: &Stratum) -> Result<()> {
    let bad = |msg: String| Err(Error::Config(msg));
    TreeChain::new(w.trees.clone())?;
    TreeChain::new(s.source.clone())?;
    let d = w.trees.len() - 1;
    if w.lambda.len() != d + 1 || w.weights.len() != d + 1 {
        return bad("one coefficient and one weight vector per tree".into());
    }
    if s.d_map.domain() + 1 != s.source.len() || s.d_map.codomain() != d {
        return bad(format!("D must map [{}] to [{d}]", s.source.len() - 1));
    }
    if s.phi.domain() != s.source[0].n() || s.phi.codomain() != w.ell() {
        return bad(format!("φ must map [{}] to [{}]", s.source[0].n(), w.ell()));
    }
    let sum: f64 = w.lambda.iter().sum();
    for (k, &l) in w.lambda.iter().enumerate() {
        if !(l >= 0.0 && l.is_finite()) || (l > 0.0) != s.d_map.contains(k) {
            return bad(format!("coefficient {k} must be positive exactly on the image of D"));
        }
    }
    if (sum - 1.0).abs() > EPS_GEO {
        return bad("coefficients must sum to 1".into());
    }
    let slots = w.ell().saturating_sub(1);
    for v in &w.weights {
        if v.len() != slots || v.iter().any(|x| matches!(x, Weight::Finite(x) if !(*x >= 0.0 && x.is_finite()))) {
            return bad(format!("weights must be {slots} values in [0, ∞]"));
        }
    }
    if s.is_trivial() {
        return Ok(());
    }
    for (k, lambda_tree) in s.source.iter().enumerate() {
        let target = s.d_map.apply(k);
        if s.phi.apply_to_tree(lambda_tree)? != w.trees[target] {
            return bad(format!("φ applied to source tree {k} is not tree {target} of the chain"));
        }
        let psi = s.phi.twisted(lambda_tree)?;
        let (lo, hi) = (psi.apply(0), psi.apply(psi.domain()));
        for alpha in lo.max(1)..=hi.min(slots) {
            let x = w.weights[target][alpha - 1];
            let ok = if alpha == lo || alpha == hi {
                x == Weight::Infinite
            } else if psi.contains(alpha) {
                x.is_positive_real()
            } else {
                x.is_zero()
            };
            if !ok {
                return bad(format!("weight {alpha} of tree {target} violates the stratum constraints"));
            }
        }
    }
    Ok(())
}

/// Evaluates the Kontsevich tensor of a point of an extended stratum.
/// Degenerate pairs and the trivial stratum take the collapse direction;
/// a sum with infinite weights is dominated by its infinite terms.
pub fn tau_tensor(w: &ExtendedChain, s: &Stratum, collapse: CollapseDirection) -> Result<KontsTensor> {
    check(w, s)?;
    let (ell, m) = (w.ell(), w.trees[0].m());
    let fixed = collapse.vector(m);
    if s.is_trivial() {
        return Ok(KontsTensor::constant(ell, m, &fixed));
    }
    KontsTensor::from_fn(ell, m, |i, j| {
        if classify_pair(&s.phi, i, j)?.is_degenerate() {
            return Ok(fixed.clone());
        }
        let mut finite = vec![0.0; m];
        let mut infinite = vec![0.0; m];
        let mut any_infinite = false;
        for k in 0..s.source.len() {
            let target = s.d_map.apply(k);
            let tree = &w.trees[target];
            let scale = w.lambda[target] * f64::from(tree.sgn(i, j)?);
            let (p, q) = span(tree, i, j);
            for h in p..q {
                let axis = tree.depths()[h - 1];
                match w.weights[target][h - 1] {
                    Weight::Finite(x) => finite[axis] += scale * x,
                    Weight::Infinite => {
                        any_infinite = true;
                        infinite[axis] += scale;
                    }
                }
            }
        }
        let v = if any_infinite { infinite } else { finite };
        normalize(&v).ok_or_else(|| Error::Invariant(format!("τ has a zero direction at pair ({i}, {j})")))
    })
}
