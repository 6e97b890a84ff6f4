//! Dense-API exact matrices over ℤ, ℚ or 𝔽_p.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::field::{Field, Ring};
use crate::linalg::reduce::{reduce, reduce_big, Reduction};
use crate::linalg::snf::{smith_normal_form, SmithForm};
use crate::linalg::sparse::{ColumnBuilder, SparseMatrix};

/// Matrix with big-integer entries interpreted in `ring`. Over 𝔽_p entries
/// are kept reduced into `0..p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    ring: Ring,
    rows: Vec<Vec<BigInt>>,
    ncols: usize,
}

impl ExactMatrix {
    pub fn new(ring: Ring, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Mismatch("ragged rows".into()));
        }
        let mut m = ExactMatrix { ring, rows, ncols };
        m.normalize();
        Ok(m)
    }

    pub fn from_i64(ring: Ring, rows: &[Vec<i64>]) -> Result<Self> {
        ExactMatrix::new(ring, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn from_sparse(ring: Ring, m: &SparseMatrix) -> Self {
        let mut rows = vec![vec![BigInt::zero(); m.ncols()]; m.nrows()];
        for (r, c, v) in m.triplets() {
            rows[r][c] = BigInt::from(v);
        }
        let mut out = ExactMatrix { ring, rows, ncols: m.ncols() };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        if let Ring::Prime(p) = self.ring {
            let p = BigInt::from(p);
            for x in self.rows.iter_mut().flatten() {
                *x = ((&*x % &p) + &p) % &p;
            }
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        (0..self.ncols)
            .map(|c| {
                (0..self.nrows()).filter(|&r| !self.rows[r][c].is_zero()).map(|r| (r, self.rows[r][c].clone())).collect()
            })
            .collect()
    }

    /// Converts to the i64 sparse form when every entry fits.
    fn to_sparse(&self) -> Option<SparseMatrix> {
        let mut b = ColumnBuilder::new(self.nrows());
        for col in self.columns() {
            let col: Option<Vec<(u32, i64)>> = col.into_iter().map(|(r, v)| v.to_i64().map(|v| (r as u32, v))).collect();
            b.push_sorted_column(col?);
        }
        Some(b.finish())
    }

    fn reduction(&self, field: Field, track: bool) -> Reduction {
        match (field, self.to_sparse()) {
            (_, Some(s)) => reduce(&s, field, track),
            (Field::Rational, None) => reduce_big(self.nrows(), &self.columns(), track),
            (Field::Prime(_), None) => unreachable!("residues always fit in i64"),
        }
    }

    /// Rank over the fraction field (ℚ for ℤ).
    pub fn rank(&self) -> usize {
        let field = self.ring.as_field().unwrap_or(Field::Rational);
        self.reduction(field, false).rank()
    }

    /// Kernel basis as dense column vectors. Over ℚ the vectors are primitive
    /// integer vectors.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<BigInt>>> {
        let field = self.ring.as_field()?;
        let red = self.reduction(field, true);
        Ok(red
            .kernel
            .expect("tracked")
            .into_iter()
            .map(|k| {
                let mut v = vec![BigInt::zero(); self.ncols];
                for (i, x) in k.entries {
                    v[i as usize] = x;
                }
                v
            })
            .collect())
    }

    /// Image basis: the original columns that survive reduction.
    pub fn image_basis(&self) -> Result<Vec<Vec<BigInt>>> {
        let field = self.ring.as_field()?;
        let red = self.reduction(field, false);
        Ok(red
            .lows
            .iter()
            .enumerate()
            .filter(|(_, l)| l.is_some())
            .map(|(c, _)| self.rows.iter().map(|r| r[c].clone()).collect())
            .collect())
    }

    /// Smith normal form; only defined over ℤ.
    pub fn smith(&self) -> Result<SmithForm> {
        if self.ring != Ring::Integer {
            return Err(Error::UnsupportedRing(format!("Smith form requires ℤ, not {}", self.ring)));
        }
        Ok(smith_normal_form(&self.rows))
    }
}
