//! Smith normal form over ℤ.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::sparse::SparseMatrix;

pub type DenseInt = Vec<Vec<BigInt>>;

/// `U · M · V = S` with `S` diagonal, diagonal entries nonnegative and each
/// dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: DenseInt,
    pub s: DenseInt,
    pub v: DenseInt,
}

impl SmithForm {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.len().min(self.s.first().map_or(0, |r| r.len())))
            .map(|i| self.s[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

fn identity(n: usize) -> DenseInt {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Dense Smith normal form with transforms. Pivot: smallest nonzero absolute
/// value in the remaining block, ties broken by `(row, col)`.
pub fn smith_normal_form(m: &DenseInt) -> SmithForm {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&a, t, t) else { break };
        swap_rows(&mut a, &mut u, t, pr);
        swap_cols(&mut a, &mut v, t, pc);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut u, i, t, &-q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, &mut v, j, t, &-q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A remainder smaller than the pivot appeared in row or column t.
                let (pr, pc) = smallest_in_cross(&a, t);
                swap_rows(&mut a, &mut u, t, pr);
                swap_cols(&mut a, &mut v, t, pc);
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => add_row(&mut a, &mut u, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for j in 0..cols {
                a[t][j] = -a[t][j].clone();
            }
            for j in 0..rows {
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    SmithForm { u, s: a, v }
}

fn smallest_entry(a: &DenseInt, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|b| ax < b.0) {
                best = Some((ax, i, j));
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

fn smallest_in_cross(a: &DenseInt, t: usize) -> (usize, usize) {
    let mut best = (a[t][t].abs(), t, t);
    for i in t + 1..a.len() {
        if !a[i][t].is_zero() && a[i][t].abs() < best.0 {
            best = (a[i][t].abs(), i, t);
        }
    }
    for j in t + 1..a[t].len() {
        if !a[t][j].is_zero() && a[t][j].abs() < best.0 {
            best = (a[t][j].abs(), t, j);
        }
    }
    (best.1, best.2)
}

fn swap_rows(a: &mut DenseInt, u: &mut DenseInt, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        u.swap(i, j);
    }
}

fn swap_cols(a: &mut DenseInt, v: &mut DenseInt, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
}

/// `row_dst += k · row_src`.
fn add_row(a: &mut DenseInt, u: &mut DenseInt, dst: usize, src: usize, k: &BigInt) {
    for mat in [a, u] {
        let s = mat[src].clone();
        for (x, y) in mat[dst].iter_mut().zip(s) {
            *x += k * y;
        }
    }
}

/// `col_dst += k · col_src`.
fn add_col(a: &mut DenseInt, v: &mut DenseInt, dst: usize, src: usize, k: &BigInt) {
    for mat in [a, v] {
        for row in mat.iter_mut() {
            let s = row[src].clone();
            row[dst] += k * s;
        }
    }
}

/// Invariant factors of a sparse integer matrix: unit pivots are eliminated
/// sparsely, the remaining block goes through the dense form.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut cols: Vec<BTreeMap<usize, BigInt>> = (0..m.ncols())
        .map(|c| {
            let (r, v) = m.column(c);
            r.iter().zip(v).map(|(&r, &v)| (r as usize, BigInt::from(v))).collect()
        })
        .collect();
    let mut row_cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.nrows()];
    for (c, col) in cols.iter().enumerate() {
        for &r in col.keys() {
            row_cols[r].insert(c);
        }
    }
    let mut alive_col = vec![true; m.ncols()];
    let mut alive_row = vec![true; m.nrows()];
    let mut units = 0usize;
    loop {
        let mut pivot: Option<(usize, usize, usize)> = None;
        for c in (0..cols.len()).filter(|&c| alive_col[c]) {
            for (&r, x) in &cols[c] {
                if x.abs().is_one() {
                    let cost = row_cols[r].len();
                    if pivot.is_none_or(|p| cost < p.2) {
                        pivot = Some((r, c, cost));
                    }
                }
            }
            if pivot.is_some_and(|p| p.2 <= 1) {
                break;
            }
        }
        let Some((r, c, _)) = pivot else { break };
        let unit = cols[c][&r].clone();
        let pivot_col = cols[c].clone();
        let others: Vec<usize> = row_cols[r].iter().copied().filter(|&c2| c2 != c).collect();
        for c2 in others {
            let f = &cols[c2][&r] * &unit;
            for (&rr, x) in &pivot_col {
                let entry = cols[c2].entry(rr).or_insert_with(BigInt::zero);
                *entry -= &f * x;
                if entry.is_zero() {
                    cols[c2].remove(&rr);
                    row_cols[rr].remove(&c2);
                } else {
                    row_cols[rr].insert(c2);
                }
            }
        }
        for &rr in pivot_col.keys() {
            row_cols[rr].remove(&c);
        }
        alive_col[c] = false;
        alive_row[r] = false;
        cols[c].clear();
        units += 1;
    }
    let rows_left: Vec<usize> = (0..m.nrows()).filter(|&r| alive_row[r] && !row_cols[r].is_empty()).collect();
    let cols_left: Vec<usize> = (0..cols.len()).filter(|&c| alive_col[c] && !cols[c].is_empty()).collect();
    let mut out = vec![BigInt::one(); units];
    if !rows_left.is_empty() && !cols_left.is_empty() {
        let pos: BTreeMap<usize, usize> = rows_left.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); cols_left.len()]; rows_left.len()];
        for (j, &c) in cols_left.iter().enumerate() {
            for (r, x) in &cols[c] {
                dense[pos[r]][j] = x.clone();
            }
        }
        out.extend(smith_normal_form(&dense).invariant_factors());
    }
    out.sort();
    out
}

/// Dense product helper used by tests and verification.
pub fn dense_mul(a: &DenseInt, b: &DenseInt) -> DenseInt {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t].is_zero() {
                continue;
            }
            for j in 0..m {
                out[i][j] += &a[i][t] * &b[t][j];
            }
        }
    }
    out
}

/// Determinant by fraction-free elimination (square input).
pub fn determinant(m: &DenseInt) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigInt::zero() };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a.get(n.wrapping_sub(1)).map_or(BigInt::one(), |r| r[n - 1].clone())
}
