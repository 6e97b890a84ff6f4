//! Homology of a chain complex at one degree.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::field::{Field, Ring};
use crate::linalg::reduce::rank;
use crate::linalg::snf::invariant_factors;
use crate::linalg::sparse::SparseMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub dim: usize,
    pub kernel_rank: usize,
    pub image_rank: usize,
    pub betti: usize,
    /// Invariant factors greater than one; only filled over ℤ.
    pub torsion: Vec<BigInt>,
}

/// Homology at `C` for `d_in: C_in → C` and `d_out: C → C_out`.
pub fn homology(d_in: &SparseMatrix, d_out: &SparseMatrix, ring: Ring) -> Result<HomologySummary> {
    if d_in.nrows() != d_out.ncols() {
        return Err(Error::Mismatch(format!(
            "incoming map lands in dimension {}, outgoing map starts at {}",
            d_in.nrows(),
            d_out.ncols()
        )));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(Error::Invariant("composite of consecutive differentials is nonzero".into()));
    }
    let field = ring.as_field().unwrap_or(Field::Rational);
    let (d_in_f, d_out_f) = match field {
        Field::Prime(p) => (d_in.reduce_mod(p), d_out.reduce_mod(p)),
        Field::Rational => (d_in.clone(), d_out.clone()),
    };
    let dim = d_in.nrows();
    let kernel_rank = dim - rank(&d_out_f, field);
    let image_rank = rank(&d_in_f, field);
    let torsion = if ring == Ring::Integer {
        invariant_factors(d_in).into_iter().filter(|x| !x.is_one()).collect()
    } else {
        Vec::new()
    };
    Ok(HomologySummary { dim, kernel_rank, image_rank, betti: kernel_rank - image_rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_plane_like() {
        // ℤ --2--> ℤ --0--> 0 has H = ℤ/2.
        let d_in = SparseMatrix::from_dense(&[vec![2]]);
        let d_out = SparseMatrix::zeros(0, 1);
        let h = homology(&d_in, &d_out, Ring::Integer).unwrap();
        assert_eq!((h.betti, h.torsion.clone()), (0, vec![BigInt::from(2)]));
        assert_eq!(homology(&d_in, &d_out, Ring::Prime(2)).unwrap().betti, 1);
        assert_eq!(homology(&d_in, &d_out, Ring::Rational).unwrap().betti, 0);
    }

    #[test]
    fn rejects_non_complex() {
        let a = SparseMatrix::from_dense(&[vec![1]]);
        assert!(homology(&a, &a, Ring::Rational).is_err());
    }
}
