use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Bicomplex;
use crate::error::Result;
use crate::linalg::field::{Field, Ring};
use crate::linalg::reduce::rank;
use crate::spectral::filtered::Orientation;
use crate::spectral::pages::{column_homology, row_homology, SpectralSequence};

/// Outcome of re-deriving a spectral sequence along independent paths.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageVerification {
    /// `d_r ∘ d_r = 0` on every page.
    pub d_squared_zero: bool,
    /// `dim E_{r+1} = dim H(E_r, d_r)` at every bidegree.
    pub recursion_holds: bool,
    /// Pairing dimensions equal the rank-formula dimensions.
    pub formula_agrees: bool,
    /// `E_1` equals the homology of the page-0 differential computed directly.
    pub e1_matches: bool,
    /// `E_∞` summed along total degrees equals total homology.
    pub infinity_matches: bool,
    pub problems: Vec<String>,
}

impl PageVerification {
    pub fn passed(&self) -> bool {
        self.d_squared_zero && self.recursion_holds && self.formula_agrees && self.e1_matches && self.infinity_matches
    }
}

fn modp(m: &crate::linalg::sparse::SparseMatrix, field: Field) -> crate::linalg::sparse::SparseMatrix {
    match field {
        Field::Prime(p) => m.reduce_mod(p),
        Field::Rational => m.clone(),
    }
}

pub fn verify_sequence(b: &Bicomplex, ss: &SpectralSequence) -> Result<PageVerification> {
    let field = ss.field;
    let mut out = PageVerification {
        d_squared_zero: true,
        recursion_holds: true,
        formula_agrees: true,
        e1_matches: true,
        infinity_matches: true,
        problems: Vec::new(),
    };
    let r_max = ss.options.r_max;
    for (idx, page) in ss.pages.iter().enumerate() {
        let r = page.r;
        for d in &page.differentials {
            if let Some(next) = page.differential_from(d.target.0, d.target.1) {
                if !next.matrix.mul(&d.matrix)?.is_zero() {
                    out.d_squared_zero = false;
                    out.problems.push(format!("d_{r}² ≠ 0 from {:?}", d.source));
                }
            }
        }
        let next = if idx + 1 < ss.pages.len() { ss.pages[idx + 1].clone() } else { ss.page(r_max + 1) };
        for e in &page.entries {
            let outgoing = page.differential_from(e.p, e.q).map_or(0, |d| rank(&modp(&d.matrix, field), field));
            let incoming: usize = page
                .differentials
                .iter()
                .filter(|d| d.target == (e.p, e.q))
                .map(|d| rank(&modp(&d.matrix, field), field))
                .sum();
            let expected = e.dim - outgoing - incoming;
            if next.dim(e.p, e.q) != expected {
                out.recursion_holds = false;
                out.problems.push(format!("E_{} at {:?}: {} vs H(E_{r}) = {expected}", r + 1, (e.p, e.q), next.dim(e.p, e.q)));
            }
        }
    }
    let mut formula = ss.rank_formula();
    for page in &ss.pages {
        for e in &page.entries {
            let f = ss.formula_dim(&mut formula, e.p + e.q, e.p, page.r);
            if f != e.dim {
                out.formula_agrees = false;
                out.problems.push(format!("E_{} at {:?}: pairing {} vs rank formula {f}", page.r, (e.p, e.q), e.dim));
            }
        }
    }
    let e1 = &ss.pages[0];
    let mut column_cache: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in &e1.entries {
        let direct = match ss.options.orientation {
            Orientation::Columns => {
                let bettis = match column_cache.get(&e.n) {
                    Some(v) => v.clone(),
                    None => {
                        let v: Vec<usize> = column_homology(b, e.n, Ring::from(field))?.iter().map(|h| h.betti).collect();
                        column_cache.insert(e.n, v.clone());
                        v
                    }
                };
                bettis[e.d]
            }
            Orientation::Rows => row_homology(b, e.d, e.n, field)?,
        };
        if direct != e.dim {
            out.e1_matches = false;
            out.problems.push(format!("E_1 at (d, n) = ({}, {}): {} vs direct {direct}", e.d, e.n, e.dim));
        }
    }
    let inf = ss.page(ss.infinity_index());
    let mut sums: BTreeMap<i64, usize> = BTreeMap::new();
    for e in &inf.entries {
        *sums.entry(e.p + e.q).or_default() += e.dim;
    }
    for (k, h) in ss.total_homology() {
        let s = sums.get(&k).copied().unwrap_or(0);
        if s != h {
            out.infinity_matches = false;
            out.problems.push(format!("degree {k}: E_∞ total {s} vs total homology {h}"));
        }
    }
    Ok(out)
}
