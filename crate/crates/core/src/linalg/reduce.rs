//! Column reduction over ℚ (fraction-free, integer entries) and 𝔽_p.
//!
//! Columns are processed left to right. Each column is reduced against the
//! stored columns by repeatedly clearing its lowest entry; a nonzero result
//! is stored with its lowest row as pivot. Scaling a column by a nonzero
//! scalar does not change lows, so pairings and ranks are exact over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::linalg::field::Field;
use crate::linalg::sparse::SparseMatrix;

type Col<E> = Vec<(u32, E)>;

/// Outcome of a reduction.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// For each column, the pivot row of its reduced form (None if reduced to zero).
    pub lows: Vec<Option<u32>>,
    /// Kernel vectors, one per zero-reduced column, when requested.
    pub kernel: Option<Vec<KernelVector>>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.lows.iter().filter(|l| l.is_some()).count()
    }
}

/// A kernel vector with integer (ℚ case) or residue (𝔽_p case) entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelVector {
    /// The zero-reduced column that produced this vector.
    pub column: usize,
    /// Sorted entries (column index, value).
    pub entries: Vec<(u32, BigInt)>,
}

#[derive(Debug)]
struct Overflow;

trait Arith {
    type E: Clone;
    fn from_i64(&self, v: i64) -> Self::E;
    fn is_zero(&self, e: &Self::E) -> bool;
    /// Returns `(ct, cq)` such that `ct·t + cq·q` clears the entry where `t` has `a` and `q` has `b`.
    fn multipliers(&self, a: &Self::E, b: &Self::E) -> Result<(Self::E, Self::E), Overflow>;
    fn lin(&self, ct: &Self::E, x: &Self::E, cq: &Self::E, y: &Self::E) -> Result<Self::E, Overflow>;
    fn scale(&self, c: &Self::E, x: &Self::E) -> Result<Self::E, Overflow>;
    fn one(&self) -> Self::E;
    fn normalize(&self, cols: &mut [&mut Col<Self::E>]);
    fn to_big(&self, e: &Self::E) -> BigInt;
}

struct SmallInt;
struct BigInts;
struct Modular(u64);

impl Arith for SmallInt {
    type E = i64;
    fn from_i64(&self, v: i64) -> i64 {
        v
    }
    fn is_zero(&self, e: &i64) -> bool {
        *e == 0
    }
    fn multipliers(&self, a: &i64, b: &i64) -> Result<(i64, i64), Overflow> {
        let g = a.gcd(b);
        Ok((b / g, (a / g).checked_neg().ok_or(Overflow)?))
    }
    fn lin(&self, ct: &i64, x: &i64, cq: &i64, y: &i64) -> Result<i64, Overflow> {
        let l = ct.checked_mul(*x).ok_or(Overflow)?;
        let r = cq.checked_mul(*y).ok_or(Overflow)?;
        l.checked_add(r).ok_or(Overflow)
    }
    fn scale(&self, c: &i64, x: &i64) -> Result<i64, Overflow> {
        c.checked_mul(*x).ok_or(Overflow)
    }
    fn one(&self) -> i64 {
        1
    }
    fn normalize(&self, cols: &mut [&mut Col<i64>]) {
        let g = cols.iter().flat_map(|c| c.iter()).fold(0i64, |g, e| g.gcd(&e.1));
        if g > 1 {
            for c in cols.iter_mut() {
                for e in c.iter_mut() {
                    e.1 /= g;
                }
            }
        }
    }
    fn to_big(&self, e: &i64) -> BigInt {
        BigInt::from(*e)
    }
}

impl Arith for BigInts {
    type E = BigInt;
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn is_zero(&self, e: &BigInt) -> bool {
        e.is_zero()
    }
    fn multipliers(&self, a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt), Overflow> {
        let g = a.gcd(b);
        Ok((b / &g, -(a / &g)))
    }
    fn lin(&self, ct: &BigInt, x: &BigInt, cq: &BigInt, y: &BigInt) -> Result<BigInt, Overflow> {
        Ok(ct * x + cq * y)
    }
    fn scale(&self, c: &BigInt, x: &BigInt) -> Result<BigInt, Overflow> {
        Ok(c * x)
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn normalize(&self, cols: &mut [&mut Col<BigInt>]) {
        let g = cols.iter().flat_map(|c| c.iter()).fold(BigInt::zero(), |g, e| g.gcd(&e.1));
        if g > BigInt::one() {
            for c in cols.iter_mut() {
                for e in c.iter_mut() {
                    e.1 = &e.1 / &g;
                }
            }
        }
    }
    fn to_big(&self, e: &BigInt) -> BigInt {
        e.clone()
    }
}

impl Arith for Modular {
    type E = u64;
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.0 as i64) as u64
    }
    fn is_zero(&self, e: &u64) -> bool {
        *e == 0
    }
    fn multipliers(&self, a: &u64, b: &u64) -> Result<(u64, u64), Overflow> {
        // t − (a/b)·q
        let inv = mod_inverse(*b, self.0);
        Ok((1, (self.0 - mul_mod(*a, inv, self.0)) % self.0))
    }
    fn lin(&self, ct: &u64, x: &u64, cq: &u64, y: &u64) -> Result<u64, Overflow> {
        Ok((mul_mod(*ct, *x, self.0) + mul_mod(*cq, *y, self.0)) % self.0)
    }
    fn scale(&self, c: &u64, x: &u64) -> Result<u64, Overflow> {
        Ok(mul_mod(*c, *x, self.0))
    }
    fn one(&self) -> u64 {
        1
    }
    fn normalize(&self, _cols: &mut [&mut Col<u64>]) {}
    fn to_big(&self, e: &u64) -> BigInt {
        BigInt::from(*e)
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, (a % p) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "{a} is not invertible modulo {p}");
    t.rem_euclid(p as i128) as u64
}

/// `ct·t + cq·q` on sorted sparse columns, dropping zeros.
fn combine<A: Arith>(ar: &A, ct: &A::E, t: &Col<A::E>, cq: &A::E, q: &Col<A::E>) -> Result<Col<A::E>, Overflow> {
    let mut out = Vec::with_capacity(t.len() + q.len());
    let (mut i, mut j) = (0, 0);
    while i < t.len() || j < q.len() {
        let take_t = j >= q.len() || (i < t.len() && t[i].0 < q[j].0);
        let take_q = i >= t.len() || (j < q.len() && q[j].0 < t[i].0);
        let (row, val) = if take_t {
            let v = ar.scale(ct, &t[i].1)?;
            i += 1;
            (t[i - 1].0, v)
        } else if take_q {
            let v = ar.scale(cq, &q[j].1)?;
            j += 1;
            (q[j - 1].0, v)
        } else {
            let v = ar.lin(ct, &t[i].1, cq, &q[j].1)?;
            i += 1;
            j += 1;
            (t[i - 1].0, v)
        };
        if !ar.is_zero(&val) {
            out.push((row, val));
        }
    }
    Ok(out)
}

fn run<A: Arith>(ar: &A, m: &SparseMatrix, track: bool) -> Result<Reduction, Overflow> {
    let nrows = m.nrows();
    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; nrows];
    let mut stored: Vec<(Col<A::E>, Col<A::E>)> = Vec::new();
    let mut lows = Vec::with_capacity(m.ncols());
    let mut kernel = track.then(Vec::new);
    for c in 0..m.ncols() {
        let (rows, vals) = m.column(c);
        let mut col: Col<A::E> =
            rows.iter().zip(vals).map(|(&r, &v)| (r, ar.from_i64(v))).filter(|e| !ar.is_zero(&e.1)).collect();
        let mut hist: Col<A::E> = if track { vec![(c as u32, ar.one())] } else { Vec::new() };
        while let Some(&(low, _)) = col.last() {
            let slot = pivot_of_row[low as usize];
            if slot == u32::MAX {
                break;
            }
            let (pcol, phist) = &stored[slot as usize];
            let a = &col.last().expect("nonempty").1;
            let b = &pcol.last().expect("pivot nonempty").1;
            let (ct, cq) = ar.multipliers(a, b)?;
            col = combine(ar, &ct, &col, &cq, pcol)?;
            if track {
                hist = combine(ar, &ct, &hist, &cq, phist)?;
            }
            ar.normalize(&mut [&mut col, &mut hist]);
        }
        match col.last() {
            Some(&(low, _)) => {
                pivot_of_row[low as usize] = stored.len() as u32;
                lows.push(Some(low));
                stored.push((col, if track { hist } else { Vec::new() }));
            }
            None => {
                lows.push(None);
                if let Some(k) = kernel.as_mut() {
                    let mut entries: Vec<(u32, BigInt)> = hist.iter().map(|(r, v)| (*r, ar.to_big(v))).collect();
                    let lead = entries.iter().find(|e| e.0 as usize == c).map(|e| e.1.is_negative()).unwrap_or(false);
                    if lead {
                        for e in &mut entries {
                            e.1 = -e.1.clone();
                        }
                    }
                    k.push(KernelVector { column: c, entries });
                }
            }
        }
    }
    Ok(Reduction { lows, kernel })
}

/// Reduces the columns of `m` over `field`, optionally recording kernel vectors.
pub fn reduce(m: &SparseMatrix, field: Field, track_kernel: bool) -> Reduction {
    match field {
        Field::Prime(p) => run(&Modular(p), m, track_kernel).expect("modular arithmetic cannot overflow"),
        Field::Rational => match run(&SmallInt, m, track_kernel) {
            Ok(r) => r,
            Err(Overflow) => run(&BigInts, m, track_kernel).expect("big integers cannot overflow"),
        },
    }
}

/// Exact rank over `field`.
pub fn rank(m: &SparseMatrix, field: Field) -> usize {
    if m.nnz() == 0 {
        return 0;
    }
    // Reduce along the shorter side.
    if m.ncols() > m.nrows() {
        reduce(&m.transpose(), field, false).rank()
    } else {
        reduce(m, field, false).rank()
    }
}

/// Reduction of columns given with big-integer entries (ℚ only).
pub(crate) fn reduce_big(nrows: usize, columns: &[Vec<(usize, BigInt)>], track: bool) -> Reduction {
    let ar = BigInts;
    let mut pivot_of_row: Vec<u32> = vec![u32::MAX; nrows];
    let mut stored: Vec<(Col<BigInt>, Col<BigInt>)> = Vec::new();
    let mut lows = Vec::new();
    let mut kernel = track.then(Vec::new);
    for (c, src) in columns.iter().enumerate() {
        let mut col: Col<BigInt> = src.iter().filter(|e| !e.1.is_zero()).map(|(r, v)| (*r as u32, v.clone())).collect();
        col.sort_by_key(|e| e.0);
        let mut hist: Col<BigInt> = if track { vec![(c as u32, BigInt::one())] } else { Vec::new() };
        while let Some(&(low, _)) = col.last() {
            let slot = pivot_of_row[low as usize];
            if slot == u32::MAX {
                break;
            }
            let (pcol, phist) = &stored[slot as usize];
            let (ct, cq) = ar.multipliers(&col.last().expect("nonempty").1, &pcol.last().expect("nonempty").1).expect("big");
            col = combine(&ar, &ct, &col, &cq, pcol).expect("big");
            if track {
                hist = combine(&ar, &ct, &hist, &cq, phist).expect("big");
            }
            ar.normalize(&mut [&mut col, &mut hist]);
        }
        match col.last() {
            Some(&(low, _)) => {
                pivot_of_row[low as usize] = stored.len() as u32;
                lows.push(Some(low));
                stored.push((col, hist));
            }
            None => {
                lows.push(None);
                if let Some(k) = kernel.as_mut() {
                    k.push(KernelVector { column: c, entries: hist });
                }
            }
        }
    }
    Reduction { lows, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_small() {
        let m = SparseMatrix::from_dense(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(rank(&m, Field::Rational), 2);
        assert_eq!(rank(&m, Field::Prime(2)), 1);
        let two = SparseMatrix::from_dense(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(rank(&two, Field::Rational), 2);
        assert_eq!(rank(&two, Field::Prime(2)), 0);
        assert_eq!(rank(&SparseMatrix::zeros(3, 4), Field::Rational), 0);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 3;
        let m = SparseMatrix::from_dense(&[vec![big, big - 1], vec![big - 2, big - 7]]);
        assert_eq!(rank(&m, Field::Rational), 2);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0, 2], vec![0, 1, 1, 1]]);
        let red = reduce(&m, Field::Rational, true);
        let ker = red.kernel.unwrap();
        assert_eq!(ker.len(), 2);
        for v in ker {
            for r in 0..2 {
                let s: BigInt = v.entries.iter().map(|(c, x)| x * m.get(r, *c as usize)).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn inverse_mod_p() {
        for p in [2u64, 3, 5, 7, 101] {
            for a in 1..p {
                assert_eq!(mul_mod(a, mod_inverse(a, p), p), 1);
            }
        }
    }
}
