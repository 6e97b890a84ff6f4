//! Compressed-column integer matrices used for every differential.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer matrix in compressed-column form. Row indices inside each column
/// are strictly increasing and stored values are never zero, so equal
/// matrices have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, col_ptr: vec![0; ncols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut b = ColumnBuilder::new(n);
        for i in 0..n {
            b.push_column([(i as u32, 1)]);
        }
        b.finish()
    }

    /// Builds from unordered triplets; duplicates are summed, zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, i64)]) -> Result<Self> {
        let mut per_col: Vec<Vec<(u32, i64)>> = vec![Vec::new(); ncols];
        for &(r, c, v) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::OutOfRange(format!("entry ({r}, {c}) outside {nrows}×{ncols}")));
            }
            per_col[c].push((r as u32, v));
        }
        let mut b = ColumnBuilder::new(nrows);
        for col in per_col {
            b.push_column(col);
        }
        Ok(b.finish())
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut b = ColumnBuilder::new(nrows);
        for c in 0..ncols {
            b.push_column((0..nrows).map(|r| (r as u32, rows[r][c])));
        }
        b.finish()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// Row indices and values of column `c`.
    pub fn column(&self, c: usize) -> (&[u32], &[i64]) {
        let (s, e) = (self.col_ptr[c], self.col_ptr[c + 1]);
        (&self.row_idx[s..e], &self.vals[s..e])
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let (rows, vals) = self.column(c);
        rows.binary_search(&(r as u32)).map_or(0, |k| vals[k])
    }

    /// Triplets in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        (0..self.ncols).flat_map(move |c| {
            let (rows, vals) = self.column(c);
            rows.iter().zip(vals).map(move |(&r, &v)| (r as usize, c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![0; self.ncols]; self.nrows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v;
        }
        out
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut per_row: Vec<Vec<(u32, i64)>> = vec![Vec::new(); self.nrows];
        for (r, c, v) in self.triplets() {
            per_row[r].push((c as u32, v));
        }
        let mut b = ColumnBuilder::new(self.ncols);
        for col in per_row {
            b.push_sorted_column(col);
        }
        b.finish()
    }

    pub fn scale(&self, k: i64) -> SparseMatrix {
        if k == 0 {
            return SparseMatrix::zeros(self.nrows, self.ncols);
        }
        let mut out = self.clone();
        for v in &mut out.vals {
            *v = v.checked_mul(k).expect("integer overflow while scaling a differential");
        }
        out
    }

    /// `self + other`.
    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(Error::Mismatch(format!(
                "adding {}×{} and {}×{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut b = ColumnBuilder::new(self.nrows);
        for c in 0..self.ncols {
            let (r1, v1) = self.column(c);
            let (r2, v2) = other.column(c);
            let mut col: Vec<(u32, i64)> = r1.iter().copied().zip(v1.iter().copied()).collect();
            col.extend(r2.iter().copied().zip(v2.iter().copied()));
            b.push_column(col);
        }
        Ok(b.finish())
    }

    /// `self · other`, exact with overflow detection.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.ncols != other.nrows {
            return Err(Error::Mismatch(format!(
                "multiplying {}×{} by {}×{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![0i64; self.nrows];
        let mut touched: Vec<u32> = Vec::new();
        let mut b = ColumnBuilder::new(self.nrows);
        for c in 0..other.ncols {
            let (rows, vals) = other.column(c);
            for (&k, &w) in rows.iter().zip(vals) {
                let (r2, v2) = self.column(k as usize);
                for (&r, &v) in r2.iter().zip(v2) {
                    let slot = &mut acc[r as usize];
                    if *slot == 0 {
                        touched.push(r);
                    }
                    let prod = v.checked_mul(w).ok_or_else(overflow)?;
                    *slot = slot.checked_add(prod).ok_or_else(overflow)?;
                    if *slot == 0 {
                        // Keep the row in `touched`; it is filtered below.
                    }
                }
            }
            touched.sort_unstable();
            touched.dedup();
            let col: Vec<(u32, i64)> = touched.iter().map(|&r| (r, acc[r as usize])).filter(|e| e.1 != 0).collect();
            for &r in &touched {
                acc[r as usize] = 0;
            }
            touched.clear();
            b.push_sorted_column(col);
        }
        Ok(b.finish())
    }

    /// Submatrix keeping the listed rows and columns, in the listed order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SparseMatrix {
        let mut map = vec![u32::MAX; self.nrows];
        for (new, &old) in rows.iter().enumerate() {
            map[old] = new as u32;
        }
        let mut b = ColumnBuilder::new(rows.len());
        for &c in cols {
            let (r, v) = self.column(c);
            b.push_column(
                r.iter().zip(v).filter(|(&r, _)| map[r as usize] != u32::MAX).map(|(&r, &v)| (map[r as usize], v)),
            );
        }
        b.finish()
    }

    /// Entries reduced modulo `p` into `0..p`.
    pub fn reduce_mod(&self, p: u64) -> SparseMatrix {
        let mut b = ColumnBuilder::new(self.nrows);
        for c in 0..self.ncols {
            let (r, v) = self.column(c);
            b.push_sorted_column(
                r.iter().zip(v).map(|(&r, &v)| (r, v.rem_euclid(p as i64))).filter(|e| e.1 != 0).collect(),
            );
        }
        b.finish()
    }

    /// Stacks blocks vertically.
    pub fn vstack(blocks: &[&SparseMatrix]) -> Result<SparseMatrix> {
        let ncols = blocks.first().map_or(0, |b| b.ncols);
        if blocks.iter().any(|b| b.ncols != ncols) {
            return Err(Error::Mismatch("vstack blocks disagree on column count".into()));
        }
        let nrows = blocks.iter().map(|b| b.nrows).sum();
        let mut b = ColumnBuilder::new(nrows);
        for c in 0..ncols {
            let mut col = Vec::new();
            let mut offset = 0u32;
            for blk in blocks {
                let (r, v) = blk.column(c);
                col.extend(r.iter().zip(v).map(|(&r, &v)| (r + offset, v)));
                offset += blk.nrows as u32;
            }
            b.push_sorted_column(col);
        }
        Ok(b.finish())
    }

    /// Largest absolute entry, or zero for an empty matrix.
    pub fn max_abs(&self) -> u64 {
        self.vals.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }
}

fn overflow() -> Error {
    Error::Invariant("64-bit overflow in sparse product".into())
}

/// Incremental column-by-column construction.
#[derive(Debug)]
pub struct ColumnBuilder {
    nrows: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl ColumnBuilder {
    pub fn new(nrows: usize) -> Self {
        ColumnBuilder { nrows, col_ptr: vec![0], row_idx: Vec::new(), vals: Vec::new() }
    }

    pub fn with_capacity(nrows: usize, ncols: usize, nnz: usize) -> Self {
        let mut col_ptr = Vec::with_capacity(ncols + 1);
        col_ptr.push(0);
        ColumnBuilder { nrows, col_ptr, row_idx: Vec::with_capacity(nnz), vals: Vec::with_capacity(nnz) }
    }

    /// Appends a column given in any order; duplicates are summed.
    pub fn push_column(&mut self, entries: impl IntoIterator<Item = (u32, i64)>) {
        let mut col: Vec<(u32, i64)> = entries.into_iter().collect();
        col.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(u32, i64)> = Vec::with_capacity(col.len());
        for (r, v) in col {
            match merged.last_mut() {
                Some(last) if last.0 == r => last.1 += v,
                _ => merged.push((r, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        self.push_sorted_column(merged);
    }

    /// Appends a column whose rows are strictly increasing and values nonzero.
    pub fn push_sorted_column(&mut self, entries: Vec<(u32, i64)>) {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        for (r, v) in entries {
            debug_assert!((r as usize) < self.nrows && v != 0);
            self.row_idx.push(r);
            self.vals.push(v);
        }
        self.col_ptr.push(self.row_idx.len());
    }

    pub fn finish(self) -> SparseMatrix {
        SparseMatrix {
            nrows: self.nrows,
            ncols: self.col_ptr.len() - 1,
            col_ptr: self.col_ptr,
            row_idx: self.row_idx,
            vals: self.vals,
        }
    }
}
