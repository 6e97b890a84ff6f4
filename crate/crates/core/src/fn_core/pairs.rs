//! Discrete pair predicates relative to a monotone map or a coface index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fn_core::monotone::MonotoneMap;

/// Degeneracy class of a label pair relative to `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairClass {
    LeftExtreme,
    RightExtreme,
    Collapsed,
    None,
}

impl PairClass {
    pub fn is_degenerate(self) -> bool {
        self != PairClass::None
    }
}

/// Classifies `(i, j)` with first-match precedence left, right, collapsed.
pub fn classify_pair(phi: &MonotoneMap, i: usize, j: usize) -> Result<PairClass> {
    let ell = phi.codomain();
    if !(1 <= i && i < j && j <= ell) {
        return Err(Error::OutOfRange(format!("pair ({i}, {j}) not in 1 ≤ i < j ≤ {ell}")));
    }
    let n = phi.domain();
    Ok(if i <= phi.apply(0) {
        PairClass::LeftExtreme
    } else if j > phi.apply(n) {
        PairClass::RightExtreme
    } else if (i..j).all(|x| !phi.contains(x)) {
        PairClass::Collapsed
    } else {
        PairClass::None
    })
}

/// Whether `(i, j)` is made degenerate by the `u`-th coface of a level with `ℓ` points.
pub fn is_exceptional(u: usize, i: usize, j: usize, ell: usize) -> Result<bool> {
    if u > ell + 1 || !(1 <= i && i < j && j <= ell + 1) {
        return Err(Error::OutOfRange(format!("u = {u}, pair ({i}, {j}) for ℓ = {ell}")));
    }
    Ok(if u == 0 {
        i == 1
    } else if u == ell + 1 {
        j == ell + 1
    } else {
        i == u && j == u + 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let phi = MonotoneMap::from_digits(9, "2358").unwrap();
        assert_eq!(classify_pair(&phi, 1, 4).unwrap(), PairClass::LeftExtreme);
        assert_eq!(classify_pair(&phi, 4, 9).unwrap(), PairClass::RightExtreme);
        assert_eq!(classify_pair(&phi, 6, 8).unwrap(), PairClass::Collapsed);
        assert_eq!(classify_pair(&phi, 3, 5).unwrap(), PairClass::None);
        assert!(classify_pair(&phi, 5, 5).is_err());
    }

    #[test]
    fn exceptional_examples() {
        assert!(is_exceptional(0, 1, 5, 6).unwrap());
        assert!(is_exceptional(3, 3, 4, 6).unwrap());
        assert!(!is_exceptional(3, 2, 4, 6).unwrap());
        assert!(is_exceptional(7, 2, 7, 6).unwrap());
        assert!(is_exceptional(6, 6, 7, 6).unwrap());
    }
}
