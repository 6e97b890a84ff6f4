use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Bicomplex;
use crate::error::{Error, Result};
use crate::linalg::field::{Field, Ring};
use crate::linalg::homology::{homology, HomologySummary};
use crate::linalg::reduce::rank;
use crate::linalg::sparse::SparseMatrix;
use crate::spectral::engine::{persistence, Graded, RankFormula, Status};
use crate::spectral::filtered::{total_complex, FilteredComplex, Orientation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    #[default]
    Homology,
    Cohomology,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageOptions {
    pub ring: Ring,
    pub r_max: usize,
    pub variance: Variance,
    pub orientation: Orientation,
}

impl Default for PageOptions {
    fn default() -> Self {
        PageOptions { ring: Ring::Rational, r_max: 4, variance: Variance::Homology, orientation: Orientation::Columns }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageEntry {
    pub p: i64,
    pub q: i64,
    pub d: usize,
    pub n: usize,
    pub dim: usize,
    pub reliable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDifferential {
    pub source: (i64, i64),
    pub target: (i64, i64),
    pub reliable: bool,
    pub matrix: SparseMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralPage {
    pub r: usize,
    pub variance: Variance,
    pub orientation: Orientation,
    pub entries: Vec<PageEntry>,
    pub differentials: Vec<PageDifferential>,
}

impl SpectralPage {
    pub fn entry(&self, p: i64, q: i64) -> Option<&PageEntry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entry(p, q).map_or(0, |e| e.dim)
    }

    pub fn differential_from(&self, p: i64, q: i64) -> Option<&PageDifferential> {
        self.differentials.iter().find(|d| d.source == (p, q))
    }
}

/// Whether `E_r` at column `n` is unaffected by cutting the bicomplex after
/// column `n_max`. The truncated total complex is the quotient by the
/// columns beyond `n_max`, so `E_r` at column `n` only sees columns up to
/// `n + r − 1`; in row orientation `E_1` already needs the outgoing `V`.
pub fn is_reliable(orientation: Orientation, n: usize, r: usize, n_max: usize) -> bool {
    let reach = n + r.max(1) - 1;
    match orientation {
        Orientation::Columns => reach <= n_max,
        Orientation::Rows => n < n_max && reach <= n_max,
    }
}

/// A computed spectral sequence: the filtered complex, the persistence
/// pairing and the pages `1..=r_max`.
#[derive(Debug, Clone)]
pub struct SpectralSequence {
    pub options: PageOptions,
    pub field: Field,
    pub complex: FilteredComplex,
    graded: Graded,
    status: BTreeMap<i64, Vec<Status>>,
    pub pages: Vec<SpectralPage>,
}

/// Engine index range of a block of degree `k`.
fn engine_range(fc: &FilteredComplex, variance: Variance, k: i64, offset: usize, len: usize) -> std::ops::Range<usize> {
    match variance {
        Variance::Homology => offset..offset + len,
        Variance::Cohomology => {
            let dim = fc.dim(k);
            dim - offset - len..dim - offset
        }
    }
}

impl SpectralSequence {
    pub fn compute(b: &Bicomplex, options: PageOptions) -> Result<SpectralSequence> {
        let field = options.ring.as_field().map_err(|_| {
            Error::UnsupportedRing("pages beyond column homology need field coefficients (q or fp:<prime>)".into())
        })?;
        if options.r_max < 1 {
            return Err(Error::Config("r_max must be at least 1".into()));
        }
        let complex = total_complex(b, options.orientation)?;
        let graded = match options.variance {
            Variance::Homology => Graded::homological(&complex),
            Variance::Cohomology => Graded::cohomological(&complex),
        };
        let status = persistence(&graded, field);
        let mut ss = SpectralSequence { options, field, complex, graded, status, pages: Vec::new() };
        ss.pages = (1..=options.r_max).map(|r| ss.page(r)).collect();
        Ok(ss)
    }

    /// Page `r` read off the pairing; `r` may exceed `r_max`.
    pub fn page(&self, r: usize) -> SpectralPage {
        let fc = &self.complex;
        let var = self.options.variance;
        let orient = self.options.orientation;
        let ri = r as i64;
        let mut entries = Vec::new();
        // Position of every surviving engine generator inside its block basis.
        let mut position: BTreeMap<i64, Vec<Option<u32>>> = BTreeMap::new();
        for (&k, space) in &fc.degrees {
            let status = &self.status[&k];
            let mut pos = vec![None; space.dim()];
            for blk in &space.blocks {
                let mut count = 0u32;
                for e in engine_range(fc, var, k, blk.offset, blk.len) {
                    if status[e].alive(ri) {
                        pos[e] = Some(count);
                        count += 1;
                    }
                }
                entries.push(PageEntry {
                    p: blk.p,
                    q: k - blk.p,
                    d: blk.d,
                    n: blk.n,
                    dim: count as usize,
                    reliable: is_reliable(orient, blk.n, r, fc.n_max),
                });
            }
            position.insert(k, pos);
        }
        entries.sort_by_key(|e| (e.p, e.q));
        let lookup = |p: i64, q: i64| entries.iter().find(|e| e.p == p && e.q == q);
        let mut blocks: BTreeMap<((i64, i64), (i64, i64)), Vec<(usize, usize, i64)>> = BTreeMap::new();
        let step = self.graded.step;
        for (&k, status) in &self.status {
            for (j, s) in status.iter().enumerate() {
                let Status::Source { partner, gap } = *s else { continue };
                if gap != ri {
                    continue;
                }
                let engine_p = self.graded.filt[&k][j];
                let target_k = k + step;
                let target_engine_p = self.graded.filt[&target_k][partner as usize];
                let (p, tp) = match var {
                    Variance::Homology => (engine_p, target_engine_p),
                    Variance::Cohomology => (-engine_p, -target_engine_p),
                };
                let src = (p, k - p);
                let dst = (tp, target_k - tp);
                let row = position[&target_k][partner as usize].expect("target alive") as usize;
                let col = position[&k][j].expect("source alive") as usize;
                blocks.entry((src, dst)).or_default().push((row, col, 1));
            }
        }
        let mut differentials = Vec::new();
        for (&(src, dst), trip) in &blocks {
            let (s, t) = (lookup(src.0, src.1).expect("source entry"), lookup(dst.0, dst.1).expect("target entry"));
            differentials.push(PageDifferential {
                source: src,
                target: dst,
                reliable: s.reliable && t.reliable,
                matrix: SparseMatrix::from_triplets(t.dim, s.dim, trip).expect("indices in range"),
            });
        }
        SpectralPage { r, variance: var, orientation: orient, entries, differentials }
    }

    /// Page dimensions from the rank formula, independent of the pairing.
    pub fn formula_dim(&self, formula: &mut RankFormulaHandle<'_>, k: i64, p: i64, r: usize) -> usize {
        let engine_p = match self.options.variance {
            Variance::Homology => p,
            Variance::Cohomology => -p,
        };
        formula.0.page_dim(k, engine_p, r as i64)
    }

    pub fn rank_formula(&self) -> RankFormulaHandle<'_> {
        RankFormulaHandle(RankFormula::new(&self.graded, self.field))
    }

    /// Homology of the whole truncated total complex, by degree.
    pub fn total_homology(&self) -> BTreeMap<i64, usize> {
        let fc = &self.complex;
        fc.degrees
            .keys()
            .map(|&k| {
                let out = fc.boundary.get(&k).map_or(0, |m| rank(m, self.field));
                let inc = fc.boundary.get(&(k + 1)).map_or(0, |m| rank(m, self.field));
                (k, fc.dim(k) - out - inc)
            })
            .collect()
    }

    /// A page index past every differential.
    pub fn infinity_index(&self) -> usize {
        let gaps = self.status.values().flatten().map(|s| match s {
            Status::Essential => 0,
            Status::Source { gap, .. } | Status::Target { gap, .. } => *gap,
        });
        gaps.max().unwrap_or(0) as usize + 1
    }
}

/// Opaque memoizing evaluator of the rank formula.
pub struct RankFormulaHandle<'a>(RankFormula<'a>);

/// Convenience wrapper returning only the pages.
pub fn pages(b: &Bicomplex, options: PageOptions) -> Result<Vec<SpectralPage>> {
    Ok(SpectralSequence::compute(b, options)?.pages)
}

/// SNF homology over ℤ of the nerve column `n`, one summary per degree.
pub fn integral_column_homology(b: &Bicomplex, n: usize) -> Result<Vec<HomologySummary>> {
    column_homology(b, n, Ring::Integer)
}

/// Homology of column `n` under the nerve boundary, over any ring.
pub fn column_homology(b: &Bicomplex, n: usize, ring: Ring) -> Result<Vec<HomologySummary>> {
    if n > b.n_max() {
        return Err(Error::OutOfRange(format!("column {n} beyond n_max = {}", b.n_max())));
    }
    let top = b.max_degree(n);
    (0..=top)
        .map(|d| {
            let d_out = b.h(d, n).expect("built");
            let zero_in = SparseMatrix::zeros(b.dim(d, n), 0);
            let d_in = b.h(d + 1, n).unwrap_or(&zero_in);
            homology(d_in, d_out, ring)
        })
        .collect()
}

/// Homology of row `d` under the coface differential at column `n`.
pub fn row_homology(b: &Bicomplex, d: usize, n: usize, field: Field) -> Result<usize> {
    let dim = b.dim(d, n);
    let modp = |m: &SparseMatrix| match field {
        Field::Prime(p) => m.reduce_mod(p),
        Field::Rational => m.clone(),
    };
    let out = b.v(d, n).map_or(0, |v| rank(&modp(v), field));
    let inc = match n.checked_sub(1) {
        Some(prev) if d <= b.max_degree(prev) => b.v(d, prev).map_or(0, |v| rank(&modp(v), field)),
        _ => 0,
    };
    Ok(dim - out - inc)
}
