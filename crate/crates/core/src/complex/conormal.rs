use num_traits::{One, ToPrimitive};

use crate::complex::bicomplex::{Bicomplex, Nerve, Normalization};
use crate::error::{Error, Result};
use crate::linalg::field::Field;
use crate::linalg::reduce::reduce;
use crate::linalg::sparse::{ColumnBuilder, SparseMatrix};

/// Integral basis of `∩_j ker s_j` at one bidegree. Each basis vector has a
/// unit entry at its own free coordinate and zeros at all other free
/// coordinates, so coordinates of a subspace element are its free entries.
struct Subspace {
    inclusion: SparseMatrix,
    free: Vec<usize>,
}

impl Subspace {
    fn full(dim: usize) -> Subspace {
        Subspace { inclusion: SparseMatrix::identity(dim), free: (0..dim).collect() }
    }

    /// Coordinates of the columns of `y`, which must lie in the subspace.
    fn coordinates(&self, y: &SparseMatrix, what: &str) -> Result<SparseMatrix> {
        let coords = y.select(&self.free, &(0..y.ncols()).collect::<Vec<_>>());
        if self.inclusion.mul(&coords)? != *y {
            return Err(Error::Invariant(format!("{what} leaves the conormalized subspace")));
        }
        Ok(coords)
    }
}

fn kernel_subspace(nerve: &Nerve, d: usize, n: usize) -> Result<Subspace> {
    let dim = nerve.count(d, n);
    if n == 0 {
        return Ok(Subspace::full(dim));
    }
    let blocks = (0..n).map(|j| nerve.codegeneracy_matrix(d, n, j)).collect::<Result<Vec<_>>>()?;
    let stacked = SparseMatrix::vstack(&blocks.iter().collect::<Vec<_>>())?;
    let red = reduce(&stacked, Field::Rational, true);
    let mut b = ColumnBuilder::new(dim);
    let mut free = Vec::new();
    for k in red.kernel.expect("kernel tracked") {
        let lead = k.entries.iter().find(|e| e.0 as usize == k.column).map(|e| e.1.clone());
        if !lead.is_some_and(|l| l.is_one()) {
            return Err(Error::Invariant(format!("codegeneracy kernel at ({d}, {n}) has no unit-lead integral basis")));
        }
        let entries = k
            .entries
            .iter()
            .map(|(r, v)| v.to_i64().map(|v| (*r, v)).ok_or_else(|| Error::Invariant("kernel entry too large".into())))
            .collect::<Result<Vec<_>>>()?;
        b.push_column(entries);
        free.push(k.column);
    }
    Ok(Subspace { inclusion: b.finish(), free })
}

/// Restricts every column to the joint kernel of its codegeneracies, with the
/// induced `H` and `V`. Fails if an induced map does not preserve the kernels.
pub fn conormalize(b: &Bicomplex, nerve: &Nerve) -> Result<Bicomplex> {
    if b.normalization() != Normalization::Plain || nerve.n_max() != b.n_max() || nerve.m != b.m() {
        return Err(Error::Mismatch("conormalization needs the plain bicomplex of this nerve".into()));
    }
    let spaces = (0..=b.n_max())
        .map(|n| (0..=b.max_degree(n)).map(|d| kernel_subspace(nerve, d, n)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let mut h = Vec::new();
    let mut v = Vec::new();
    for n in 0..=b.n_max() {
        let mut column = Vec::new();
        for d in 0..=b.max_degree(n) {
            let image = b.h(d, n).expect("built").mul(&spaces[n][d].inclusion)?;
            column.push(if d == 0 {
                SparseMatrix::zeros(0, image.ncols())
            } else {
                spaces[n][d - 1].coordinates(&image, &format!("H at ({d}, {n})"))?
            });
        }
        h.push(column);
        if n < b.n_max() {
            let mut column = Vec::new();
            for d in 0..=b.max_degree(n) {
                let image = b.v(d, n).expect("built").mul(&spaces[n][d].inclusion)?;
                column.push(spaces[n + 1][d].coordinates(&image, &format!("V at ({d}, {n})"))?);
            }
            v.push(column);
        }
    }
    let (_, _, zeros) = b.parts();
    let inclusions = spaces.into_iter().map(|c| c.into_iter().map(|s| s.inclusion).collect()).collect();
    Bicomplex::from_parts(b.m(), Normalization::Conormalized, h, v, zeros.to_vec(), Some(inclusions))
}
