//! The bicomplex of nerve chains: nerve boundary `H` within a column and
//! alternating cofaces `V` between columns.

use serde::{Deserialize, Serialize};

use crate::complex::chains::{enumerate_level, ChainLevel};
use crate::complex::poset::TreePoset;
use crate::error::{Error, Result};
use crate::linalg::sparse::{ColumnBuilder, SparseMatrix};

/// Enumeration limits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub trees: u128,
    pub chains: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { trees: 1_000_000, chains: 50_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Plain,
    Conormalized,
}

/// Highest populated nerve degree of column `n`.
pub fn max_degree(m: usize, n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (m - 1) * (n - 1)
    }
}

/// Trees, chains and structure maps of one column.
#[derive(Debug, Clone)]
pub struct NerveColumn {
    pub poset: TreePoset,
    pub levels: Vec<ChainLevel>,
    /// `coface[i][t]`: index in column `n+1` of `d_i` applied to tree `t`.
    pub coface: Vec<Vec<u16>>,
    /// `codegeneracy[j][t]`: index in column `n−1` of `s_j` applied to tree `t`.
    pub codegeneracy: Vec<Vec<u16>>,
}

#[derive(Debug, Clone)]
pub struct Nerve {
    pub m: usize,
    pub columns: Vec<NerveColumn>,
}

impl Nerve {
    pub fn build(m: usize, n_max: usize, caps: Caps) -> Result<Nerve> {
        if m < 2 {
            return Err(Error::Config(format!("m = {m} must be at least 2")));
        }
        let posets = (0..=n_max).map(|n| TreePoset::new(m, n, caps.trees)).collect::<Result<Vec<_>>>()?;
        let mut columns = Vec::with_capacity(posets.len());
        for (n, poset) in posets.iter().enumerate() {
            let levels = (0..=max_degree(m, n)).map(|d| enumerate_level(poset, d, caps.chains)).collect::<Result<Vec<_>>>()?;
            let coface = match posets.get(n + 1) {
                Some(next) => (0..=n + 1).map(|i| structure_table(poset, next, |t| t.coface(i))).collect::<Result<_>>()?,
                None => Vec::new(),
            };
            let codegeneracy = match n.checked_sub(1) {
                Some(prev) => (0..n)
                    .map(|j| structure_table(poset, &posets[prev], |t| t.codegeneracy(j)))
                    .collect::<Result<_>>()?,
                None => Vec::new(),
            };
            columns.push(NerveColumn { poset: poset.clone(), levels, coface, codegeneracy });
        }
        Ok(Nerve { m, columns })
    }

    pub fn n_max(&self) -> usize {
        self.columns.len() - 1
    }

    pub fn level(&self, d: usize, n: usize) -> Option<&ChainLevel> {
        self.columns.get(n)?.levels.get(d)
    }

    pub fn count(&self, d: usize, n: usize) -> usize {
        self.level(d, n).map_or(0, ChainLevel::len)
    }

    /// Nerve boundary `(d,n) → (d−1,n)`; for `d = 0` the map to the zero space.
    pub fn nerve_boundary(&self, d: usize, n: usize) -> Result<SparseMatrix> {
        let src = self.level(d, n).ok_or_else(|| out_of_range(d, n))?;
        if d == 0 {
            return Ok(SparseMatrix::zeros(0, src.len()));
        }
        let dst = self.level(d - 1, n).expect("lower degrees exist");
        let mut b = ColumnBuilder::with_capacity(dst.len(), src.len(), src.len() * (d + 1));
        let mut face = Vec::with_capacity(d);
        for chain in src.iter() {
            let mut col = Vec::with_capacity(d + 1);
            for i in 0..=d {
                face.clear();
                face.extend(chain.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &t)| t));
                let row = dst.index_of(&face).ok_or_else(|| Error::Invariant(format!("face {face:?} missing")))?;
                col.push((row as u32, if i % 2 == 0 { 1 } else { -1 }));
            }
            b.push_column(col);
        }
        Ok(b.finish())
    }

    /// Alternating coface map `(d,n) → (d,n+1)` and the number of chain
    /// images that failed strict ascent and were sent to zero.
    pub fn coface_differential(&self, d: usize, n: usize) -> Result<(SparseMatrix, u64)> {
        self.coface_like(d, n, None)
    }

    /// Matrix of a single coface `d_i` on chains `(d,n) → (d,n+1)`.
    pub fn coface_matrix(&self, d: usize, n: usize, i: usize) -> Result<(SparseMatrix, u64)> {
        if i > n + 1 {
            return Err(Error::OutOfRange(format!("coface index {i} not in 0..{}", n + 1)));
        }
        self.coface_like(d, n, Some(i))
    }

    fn coface_like(&self, d: usize, n: usize, only: Option<usize>) -> Result<(SparseMatrix, u64)> {
        let src = self.level(d, n).ok_or_else(|| out_of_range(d, n))?;
        let col = &self.columns[n];
        if col.coface.is_empty() {
            return Err(Error::OutOfRange(format!("column {n} is the last built column and has no cofaces")));
        }
        let next = &self.columns[n + 1];
        let dst = &next.levels[d];
        let mut b = ColumnBuilder::with_capacity(dst.len(), src.len(), src.len() * (n + 2));
        let mut image = vec![0u16; d + 1];
        let mut dropped = 0u64;
        for chain in src.iter() {
            let mut entries = Vec::with_capacity(n + 2);
            for i in 0..=n + 1 {
                if only.is_some_and(|o| o != i) {
                    continue;
                }
                let table = &col.coface[i];
                for (slot, &t) in image.iter_mut().zip(chain) {
                    *slot = table[t as usize];
                }
                if !image.windows(2).all(|w| next.poset.less(w[0] as usize, w[1] as usize)) {
                    dropped += 1;
                    continue;
                }
                let row = dst.index_of(&image).ok_or_else(|| Error::Invariant(format!("coface image {image:?} missing")))?;
                entries.push((row as u32, if only.is_some() || i % 2 == 0 { 1 } else { -1 }));
            }
            b.push_column(entries);
        }
        Ok((b.finish(), dropped))
    }

    /// Elementwise `s_j` on chains `(d,n) → (d,n−1)`; chains with repeated
    /// trees map to zero.
    pub fn codegeneracy_matrix(&self, d: usize, n: usize, j: usize) -> Result<SparseMatrix> {
        let src = self.level(d, n).ok_or_else(|| out_of_range(d, n))?;
        if n == 0 || j >= n {
            return Err(Error::OutOfRange(format!("codegeneracy s_{j} undefined on column {n}")));
        }
        let prev = &self.columns[n - 1];
        let table = &self.columns[n].codegeneracy[j];
        let dst = prev.levels.get(d);
        let mut b = ColumnBuilder::new(dst.map_or(0, ChainLevel::len));
        let mut image = vec![0u16; d + 1];
        for chain in src.iter() {
            for (slot, &t) in image.iter_mut().zip(chain) {
                *slot = table[t as usize];
            }
            if image.windows(2).any(|w| w[0] == w[1]) {
                b.push_sorted_column(Vec::new());
                continue;
            }
            if !image.windows(2).all(|w| prev.poset.less(w[0] as usize, w[1] as usize)) {
                return Err(Error::Invariant(format!("codegeneracy image {image:?} is not ascending")));
            }
            let row = dst.and_then(|l| l.index_of(&image)).ok_or_else(|| Error::Invariant(format!("image {image:?} missing")))?;
            b.push_sorted_column(vec![(row as u32, 1)]);
        }
        Ok(b.finish())
    }
}

fn structure_table(
    from: &TreePoset,
    to: &TreePoset,
    f: impl Fn(&crate::fn_core::FnTree) -> Result<crate::fn_core::FnTree>,
) -> Result<Vec<u16>> {
    from.trees()
        .iter()
        .map(|t| {
            let image = f(t)?;
            to.index_of(&image).map(|i| i as u16).ok_or_else(|| Error::Invariant(format!("{image} not enumerated")))
        })
        .collect()
}

fn out_of_range(d: usize, n: usize) -> Error {
    Error::OutOfRange(format!("bidegree (d, n) = ({d}, {n}) not built"))
}

/// A bounded bicomplex with generators at `(d,n)`, `0 ≤ n ≤ n_max`,
/// `0 ≤ d ≤ max_degree(n)`. Column `n_max` receives `V` but emits none.
#[derive(Debug, Clone)]
pub struct Bicomplex {
    m: usize,
    n_max: usize,
    normalization: Normalization,
    /// `h[n][d]: (d,n) → (d−1,n)`.
    h: Vec<Vec<SparseMatrix>>,
    /// `v[n][d]: (d,n) → (d,n+1)` for `n < n_max`.
    v: Vec<Vec<SparseMatrix>>,
    defensive_zeros: Vec<Vec<u64>>,
    /// Inclusions of the conormalized spaces into the plain ones.
    inclusions: Option<Vec<Vec<SparseMatrix>>>,
}

impl Bicomplex {
    pub fn build(m: usize, n_max: usize, caps: Caps) -> Result<(Bicomplex, Nerve)> {
        let nerve = Nerve::build(m, n_max, caps)?;
        let b = Bicomplex::from_nerve(&nerve)?;
        Ok((b, nerve))
    }

    pub fn from_nerve(nerve: &Nerve) -> Result<Bicomplex> {
        let n_max = nerve.n_max();
        let mut h = Vec::new();
        let mut v = Vec::new();
        let mut zeros = Vec::new();
        for n in 0..=n_max {
            let top = max_degree(nerve.m, n);
            h.push((0..=top).map(|d| nerve.nerve_boundary(d, n)).collect::<Result<Vec<_>>>()?);
            if n < n_max {
                let (mats, counts): (Vec<_>, Vec<_>) =
                    (0..=top).map(|d| nerve.coface_differential(d, n)).collect::<Result<Vec<_>>>()?.into_iter().unzip();
                v.push(mats);
                zeros.push(counts);
            }
        }
        Ok(Bicomplex {
            m: nerve.m,
            n_max,
            normalization: Normalization::Plain,
            h,
            v,
            defensive_zeros: zeros,
            inclusions: None,
        })
    }

    /// Assembles a bicomplex from explicit matrices (used for conormalized
    /// and cached data). Shapes are checked.
    pub fn from_parts(
        m: usize,
        normalization: Normalization,
        h: Vec<Vec<SparseMatrix>>,
        v: Vec<Vec<SparseMatrix>>,
        defensive_zeros: Vec<Vec<u64>>,
        inclusions: Option<Vec<Vec<SparseMatrix>>>,
    ) -> Result<Bicomplex> {
        let n_max = h.len().checked_sub(1).ok_or_else(|| Error::Mismatch("no columns".into()))?;
        if v.len() != n_max || defensive_zeros.len() != n_max {
            return Err(Error::Mismatch("V blocks must cover columns 0..n_max".into()));
        }
        for n in 0..=n_max {
            if h[n].len() != max_degree(m, n) + 1 {
                return Err(Error::Mismatch(format!("column {n} has {} degrees", h[n].len())));
            }
            for d in 1..h[n].len() {
                if h[n][d].nrows() != h[n][d - 1].ncols() {
                    return Err(Error::Mismatch(format!("H shapes disagree at ({d}, {n})")));
                }
            }
            if n < n_max {
                for d in 0..h[n].len() {
                    let (src, dst) = (h[n][d].ncols(), h[n + 1][d].ncols());
                    if v[n][d].ncols() != src || v[n][d].nrows() != dst {
                        return Err(Error::Mismatch(format!("V shape wrong at ({d}, {n})")));
                    }
                }
            }
        }
        Ok(Bicomplex { m, n_max, normalization, h, v, defensive_zeros, inclusions })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn max_degree(&self, n: usize) -> usize {
        max_degree(self.m, n)
    }

    /// Number of generators at `(d,n)`, zero outside the built range.
    pub fn dim(&self, d: usize, n: usize) -> usize {
        self.h.get(n).and_then(|c| c.get(d)).map_or(0, SparseMatrix::ncols)
    }

    pub fn dims(&self) -> Vec<Vec<usize>> {
        self.h.iter().map(|c| c.iter().map(SparseMatrix::ncols).collect()).collect()
    }

    pub fn h(&self, d: usize, n: usize) -> Option<&SparseMatrix> {
        self.h.get(n)?.get(d)
    }

    pub fn v(&self, d: usize, n: usize) -> Option<&SparseMatrix> {
        self.v.get(n)?.get(d)
    }

    pub fn defensive_zeros(&self, d: usize, n: usize) -> u64 {
        self.defensive_zeros.get(n).and_then(|c| c.get(d)).copied().unwrap_or(0)
    }

    pub fn total_defensive_zeros(&self) -> u64 {
        self.defensive_zeros.iter().flatten().sum()
    }

    pub fn inclusion(&self, d: usize, n: usize) -> Option<&SparseMatrix> {
        self.inclusions.as_ref()?.get(n)?.get(d)
    }

    /// Column `n_max` receives `V` but emits none.
    pub fn is_truncated(&self) -> bool {
        true
    }

    pub(crate) fn parts(&self) -> (&[Vec<SparseMatrix>], &[Vec<SparseMatrix>], &[Vec<u64>]) {
        (&self.h, &self.v, &self.defensive_zeros)
    }

    /// Evaluates every matrix identity blockwise. `D = H + (−1)^d V`, whose
    /// square has blocks `HH`, `H·V' + V'·H` and `V'V'` with `V' = (−1)^d V`.
    pub fn check_identities(&self) -> Result<IdentityReport> {
        let mut checks = Vec::new();
        let mut push = |kind: IdentityKind, d: usize, n: usize, m: SparseMatrix| {
            checks.push(IdentityCheck { kind, d, n, nonzero: m.nnz() });
        };
        let signed_v = |d: usize, n: usize| self.v(d, n).map(|v| if d % 2 == 0 { v.clone() } else { v.scale(-1) });
        for n in 0..=self.n_max {
            for d in 0..=self.max_degree(n) {
                if d >= 2 {
                    push(IdentityKind::HH, d, n, self.h[n][d - 1].mul(&self.h[n][d])?);
                }
                if n + 2 <= self.n_max {
                    push(IdentityKind::VV, d, n, self.v[n + 1][d].mul(&self.v[n][d])?);
                    let sv1 = signed_v(d, n + 1).expect("V block");
                    let sv0 = signed_v(d, n).expect("V block");
                    push(IdentityKind::TotalSquare, d, n, sv1.mul(&sv0)?);
                }
                if d >= 1 && n < self.n_max {
                    let hv = self.h[n + 1][d].mul(&self.v[n][d])?;
                    let vh = self.v[n][d - 1].mul(&self.h[n][d])?;
                    push(IdentityKind::HV, d, n, hv.add(&vh.scale(-1))?);
                    let a = self.h[n + 1][d].mul(&signed_v(d, n).expect("V block"))?;
                    let b = signed_v(d - 1, n).expect("V block").mul(&self.h[n][d])?;
                    push(IdentityKind::TotalSquare, d, n, a.add(&b)?);
                }
                if d >= 2 {
                    push(IdentityKind::TotalSquare, d, n, self.h[n][d - 1].mul(&self.h[n][d])?);
                }
            }
        }
        Ok(IdentityReport { checks })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentityKind {
    /// `H∘H = 0`.
    HH,
    /// `V∘V = 0`.
    VV,
    /// `H∘V = V∘H`.
    HV,
    /// A block of `D∘D` on the signed total complex.
    TotalSquare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub kind: IdentityKind,
    /// Source bidegree.
    pub d: usize,
    pub n: usize,
    /// Nonzero entries of the defect matrix.
    pub nonzero: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn holds(&self, kind: IdentityKind) -> bool {
        self.checks.iter().filter(|c| c.kind == kind).all(|c| c.nonzero == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| c.nonzero != 0)
    }
}
