use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fn_core::{codegeneracy_index, is_exceptional};
use crate::geometry::config::{basis, Configuration};

/// Unit vector assigned to pairs of points that have merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CollapseDirection {
    /// `e_m`, the direction of depth-`(m−1)` forks.
    #[default]
    Em,
    /// `e_1`.
    E1,
}

impl CollapseDirection {
    pub fn vector(self, m: usize) -> Vec<f64> {
        match self {
            CollapseDirection::Em => basis(m, m - 1),
            CollapseDirection::E1 => basis(m, 0),
        }
    }
}

impl FromStr for CollapseDirection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "em" => Ok(CollapseDirection::Em),
            "e1" => Ok(CollapseDirection::E1),
            _ => Err(Error::Parse(format!("collapse direction {s:?} is not em or e1"))),
        }
    }
}

impl fmt::Display for CollapseDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseDirection::Em => "em",
            CollapseDirection::E1 => "e1",
        })
    }
}

/// One unit vector per unordered pair `i < j`; `entry(j, i)` is the negative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KontsTensor {
    pub n: usize,
    pub m: usize,
    /// Row-major over pairs `(1,2), (1,3), …, (n−1,n)`.
    pub entries: Vec<Vec<f64>>,
}

pub(crate) fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (i - 1) * (2 * n - i) / 2 + (j - i - 1)
}

pub(crate) fn normalize(v: &[f64]) -> Option<Vec<f64>> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| v.iter().map(|x| x / norm).collect())
}

impl KontsTensor {
    /// Builds a tensor from a rule for the pairs `i < j`.
    pub fn from_fn(n: usize, m: usize, mut f: impl FnMut(usize, usize) -> Result<Vec<f64>>) -> Result<Self> {
        let mut entries = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 1..=n {
            for j in i + 1..=n {
                entries.push(f(i, j)?);
            }
        }
        Ok(KontsTensor { n, m, entries })
    }

    pub fn constant(n: usize, m: usize, v: &[f64]) -> Self {
        KontsTensor { n, m, entries: vec![v.to_vec(); n * n.saturating_sub(1) / 2] }
    }

    pub fn entry(&self, i: usize, j: usize) -> Vec<f64> {
        assert!(i != j && i >= 1 && j >= 1 && i.max(j) <= self.n, "pair ({i}, {j}) out of range");
        if i < j {
            self.entries[pair_index(self.n, i, j)].clone()
        } else {
            self.entries[pair_index(self.n, j, i)].iter().map(|x| -x).collect()
        }
    }

    /// Largest deviation of an entry norm from 1.
    pub fn unit_defect(&self) -> f64 {
        self.entries.iter().map(|v| (v.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest coordinate difference from another tensor of the same shape.
    pub fn distance(&self, other: &KontsTensor) -> f64 {
        assert_eq!((self.n, self.m), (other.n, other.m), "tensor shapes differ");
        self.entries
            .iter()
            .zip(&other.entries)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// Normalized differences `n̂(x_j − x_i)`.
pub fn konts_point(c: &Configuration) -> Result<KontsTensor> {
    KontsTensor::from_fn(c.n(), c.m, |i, j| {
        normalize(&c.difference(i, j)).ok_or_else(|| Error::Invariant(format!("points {i} and {j} coincide")))
    })
}

/// The `u`-th coface, from `ℓ` to `ℓ + 1` points.
pub fn konts_coface(u: usize, t: &KontsTensor, collapse: CollapseDirection) -> Result<KontsTensor> {
    let ell = t.n;
    if u > ell + 1 {
        return Err(Error::OutOfRange(format!("coface index {u} not in 0..{}", ell + 1)));
    }
    let fixed = collapse.vector(t.m);
    KontsTensor::from_fn(ell + 1, t.m, |k, l| {
        Ok(if is_exceptional(u, k, l, ell)? {
            fixed.clone()
        } else {
            t.entry(codegeneracy_index(u, k), codegeneracy_index(u, l))
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_row_major() {
        let n = 5;
        let mut k = 0;
        for i in 1..=n {
            for j in i + 1..=n {
                assert_eq!(pair_index(n, i, j), k);
                k += 1;
            }
        }
    }

    #[test]
    fn point_is_invariant_under_scaling_and_translation() {
        let c = Configuration::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![3.0, -2.0]]).unwrap();
        let t = konts_point(&c).unwrap();
        assert_eq!(t.entry(1, 2), vec![1.0, 0.0]);
        assert_eq!(t.entry(2, 1), vec![-1.0, 0.0]);
        let moved = Configuration::new(2, c.points.iter().map(|p| vec![3.0 * p[0] + 1.0, 3.0 * p[1] - 7.0]).collect()).unwrap();
        assert!(konts_point(&moved).unwrap().distance(&t) < 1e-15);
        assert!(t.unit_defect() < 1e-15);
    }

    #[test]
    fn coface_from_one_point() {
        let t = KontsTensor::constant(1, 3, &[]);
        let up = konts_coface(0, &t, CollapseDirection::Em).unwrap();
        assert_eq!(up.entries, vec![vec![0.0, 0.0, 1.0]]);
        let up = konts_coface(2, &t, CollapseDirection::E1).unwrap();
        assert_eq!(up.entries, vec![vec![1.0, 0.0, 0.0]]);
    }

    #[test]
    fn coface_copies_non_exceptional_entries() {
        let c = Configuration::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![3.0, -2.0]]).unwrap();
        let t = konts_point(&c).unwrap();
        let up = konts_coface(2, &t, CollapseDirection::Em).unwrap();
        assert_eq!(up.entry(2, 3), vec![0.0, 1.0]);
        assert_eq!(up.entry(1, 2), t.entry(1, 2));
        assert_eq!(up.entry(1, 3), t.entry(1, 2));
        assert_eq!(up.entry(3, 4), t.entry(2, 3));
        assert_eq!(up.entry(1, 4), t.entry(1, 3));
    }
}
