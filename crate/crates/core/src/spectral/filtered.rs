use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Bicomplex;
use crate::error::{Error, Result};
use crate::linalg::sparse::{ColumnBuilder, SparseMatrix};

/// Which direction of the bicomplex the filtration follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Filter by cosimplicial degree, `p = −n`; page 0 is the nerve boundary.
    #[default]
    Columns,
    /// Filter by nerve degree, `p = d`; page 0 is the coface differential.
    Rows,
}

/// One bidegree inside a total degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub d: usize,
    pub n: usize,
    pub p: i64,
    pub offset: usize,
    pub len: usize,
}

/// Generators of one total degree, ordered by filtration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeSpace {
    pub blocks: Vec<Block>,
}

impl DegreeSpace {
    pub fn dim(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.offset + b.len)
    }

    /// Filtration value of every generator.
    pub fn filtration(&self) -> Vec<i64> {
        self.blocks.iter().flat_map(|b| std::iter::repeat_n(b.p, b.len)).collect()
    }

    pub fn block_at(&self, p: i64) -> Option<&Block> {
        self.blocks.iter().find(|b| b.p == p)
    }
}

/// The total complex `D = H + (−1)^d V` with total degree `k = d − n`.
#[derive(Debug, Clone)]
pub struct FilteredComplex {
    pub orientation: Orientation,
    pub n_max: usize,
    pub degrees: BTreeMap<i64, DegreeSpace>,
    /// `boundary[k]: C_k → C_{k−1}`.
    pub boundary: BTreeMap<i64, SparseMatrix>,
}

impl FilteredComplex {
    pub fn dim(&self, k: i64) -> usize {
        self.degrees.get(&k).map_or(0, DegreeSpace::dim)
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.values().map(DegreeSpace::dim).sum()
    }
}

pub fn filtration_index(orientation: Orientation, d: usize, n: usize) -> i64 {
    match orientation {
        Orientation::Columns => -(n as i64),
        Orientation::Rows => d as i64,
    }
}

/// Assembles the total complex and checks `D² = 0`.
pub fn total_complex(b: &Bicomplex, orientation: Orientation) -> Result<FilteredComplex> {
    let mut by_degree: BTreeMap<i64, Vec<(i64, usize, usize)>> = BTreeMap::new();
    for n in 0..=b.n_max() {
        for d in 0..=b.max_degree(n) {
            let k = d as i64 - n as i64;
            by_degree.entry(k).or_default().push((filtration_index(orientation, d, n), d, n));
        }
    }
    let mut degrees = BTreeMap::new();
    for (k, mut list) in by_degree {
        list.sort();
        let mut offset = 0;
        let blocks = list
            .into_iter()
            .map(|(p, d, n)| {
                let len = b.dim(d, n);
                let blk = Block { d, n, p, offset, len };
                offset += len;
                blk
            })
            .collect();
        degrees.insert(k, DegreeSpace { blocks });
    }
    let empty = DegreeSpace::default();
    let mut boundary = BTreeMap::new();
    for (&k, space) in &degrees {
        let target = degrees.get(&(k - 1)).unwrap_or(&empty);
        let locate = |d: usize, n: usize| target.blocks.iter().find(|t| t.d == d && t.n == n).map(|t| t.offset);
        let mut builder = ColumnBuilder::new(target.dim());
        for blk in &space.blocks {
            let h = b.h(blk.d, blk.n).expect("bidegree built");
            let h_off = if blk.d > 0 { locate(blk.d - 1, blk.n) } else { None };
            let v = b.v(blk.d, blk.n);
            let v_off = v.and_then(|_| locate(blk.d, blk.n + 1));
            let sign = if blk.d % 2 == 0 { 1 } else { -1 };
            for c in 0..blk.len {
                let mut col: Vec<(u32, i64)> = Vec::new();
                if let Some(off) = h_off {
                    let (r, x) = h.column(c);
                    col.extend(r.iter().zip(x).map(|(&r, &x)| (r + off as u32, x)));
                }
                if let (Some(v), Some(off)) = (v, v_off) {
                    let (r, x) = v.column(c);
                    col.extend(r.iter().zip(x).map(|(&r, &x)| (r + off as u32, sign * x)));
                }
                builder.push_column(col);
            }
        }
        boundary.insert(k, builder.finish());
    }
    for (&k, dk) in &boundary {
        if let Some(dk1) = boundary.get(&(k - 1)) {
            if dk1.nrows() > 0 && !dk1.mul(dk)?.is_zero() {
                return Err(Error::Invariant(format!(
                    "total differential squares to a nonzero map in degree {k} (the coface action is not compatible with the order here)"
                )));
            }
        }
    }
    Ok(FilteredComplex { orientation, n_max: b.n_max(), degrees, boundary })
}
