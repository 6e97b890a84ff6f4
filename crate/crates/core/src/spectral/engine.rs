//! Two independent evaluations of the spectral sequence of a filtered
//! complex: persistence pairing, and ranks of filtration submatrices.

use std::collections::{BTreeMap, HashMap};

use crate::linalg::field::Field;
use crate::linalg::reduce::{rank, reduce};
use crate::linalg::sparse::SparseMatrix;
use crate::spectral::filtered::FilteredComplex;

/// A graded space with an ascending filtration on each degree and maps
/// `maps[k]: C_k → C_{k+step}` that never raise the filtration.
#[derive(Debug, Clone)]
pub(crate) struct Graded {
    pub step: i64,
    pub filt: BTreeMap<i64, Vec<i64>>,
    pub maps: BTreeMap<i64, SparseMatrix>,
}

impl Graded {
    pub fn homological(fc: &FilteredComplex) -> Graded {
        Graded {
            step: -1,
            filt: fc.degrees.iter().map(|(&k, s)| (k, s.filtration())).collect(),
            maps: fc.boundary.clone(),
        }
    }

    /// The dual complex, with generators listed in reverse so that the
    /// negated filtration is again ascending.
    pub fn cohomological(fc: &FilteredComplex) -> Graded {
        let filt: BTreeMap<i64, Vec<i64>> =
            fc.degrees.iter().map(|(&k, s)| (k, s.filtration().into_iter().rev().map(|p| -p).collect())).collect();
        let mut maps = BTreeMap::new();
        for &k in fc.degrees.keys() {
            let dim_k = fc.dim(k);
            let dim_up = fc.dim(k + 1);
            let triplets: Vec<(usize, usize, i64)> = match fc.boundary.get(&(k + 1)) {
                Some(b) => b.triplets().map(|(r, c, v)| (dim_up - 1 - c, dim_k - 1 - r, v)).collect(),
                None => Vec::new(),
            };
            maps.insert(k, SparseMatrix::from_triplets(dim_up, dim_k, &triplets).expect("indices in range"));
        }
        Graded { step: 1, filt, maps }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Status {
    Essential,
    /// The column of this generator reduces onto `partner` in degree `k+step`.
    Source { partner: u32, gap: i64 },
    /// This generator is the pivot of `partner` in degree `k−step`.
    Target { partner: u32, gap: i64 },
}

impl Status {
    /// Whether the generator survives to page `r`.
    pub fn alive(self, r: i64) -> bool {
        match self {
            Status::Essential => true,
            Status::Source { gap, .. } | Status::Target { gap, .. } => gap >= r,
        }
    }
}

pub(crate) fn persistence(g: &Graded, field: Field) -> BTreeMap<i64, Vec<Status>> {
    let mut status: BTreeMap<i64, Vec<Status>> = g.filt.iter().map(|(&k, f)| (k, vec![Status::Essential; f.len()])).collect();
    for (&k, m) in &g.maps {
        if m.nrows() == 0 || m.ncols() == 0 {
            continue;
        }
        let red = reduce(m, field, false);
        let src_f = &g.filt[&k];
        let dst_f = &g.filt[&(k + g.step)];
        for (j, low) in red.lows.iter().enumerate() {
            if let Some(i) = *low {
                let gap = src_f[j] - dst_f[i as usize];
                debug_assert!(gap >= 0, "map raises the filtration");
                status.get_mut(&k).expect("degree")[j] = Status::Source { partner: i, gap };
                status.get_mut(&(k + g.step)).expect("degree")[i as usize] = Status::Target { partner: j as u32, gap };
            }
        }
    }
    status
}

/// Page dimensions from ranks of submatrices `M_k[filt > a, filt ≤ b]`.
pub(crate) struct RankFormula<'a> {
    g: &'a Graded,
    field: Field,
    memo: HashMap<(i64, usize, usize), usize>,
}

impl<'a> RankFormula<'a> {
    pub fn new(g: &'a Graded, field: Field) -> Self {
        RankFormula { g, field, memo: HashMap::new() }
    }

    fn count_upto(&self, k: i64, q: i64) -> usize {
        self.g.filt.get(&k).map_or(0, |f| f.partition_point(|&x| x <= q))
    }

    /// Rank of `M_k` restricted to target rows with filtration `> a` and
    /// source columns with filtration `≤ b`.
    fn sub_rank(&mut self, k: i64, a: Option<i64>, b: i64) -> usize {
        let Some(m) = self.g.maps.get(&k) else { return 0 };
        if m.nrows() == 0 {
            return 0;
        }
        let dst = &self.g.filt[&(k + self.g.step)];
        let row_start = a.map_or(0, |a| dst.partition_point(|&x| x <= a));
        let col_end = self.count_upto(k, b);
        if row_start >= dst.len() || col_end == 0 {
            return 0;
        }
        let key = (k, row_start, col_end);
        if let Some(&r) = self.memo.get(&key) {
            return r;
        }
        let rows: Vec<usize> = (row_start..dst.len()).collect();
        let cols: Vec<usize> = (0..col_end).collect();
        let r = rank(&m.select(&rows, &cols), self.field);
        self.memo.insert(key, r);
        r
    }

    /// `dim Z_s^q` in degree `k`.
    fn cycles(&mut self, k: i64, s: i64, q: i64) -> usize {
        self.count_upto(k, q) - self.sub_rank(k, Some(q - s), q)
    }

    /// `dim D(Z_s^q)` for the map leaving degree `k`.
    fn bounded_image(&mut self, k: i64, s: i64, q: i64) -> usize {
        self.sub_rank(k, None, q) - self.sub_rank(k, Some(q - s), q)
    }

    pub fn page_dim(&mut self, k: i64, p: i64, r: i64) -> usize {
        let from = k - self.g.step;
        let plus = self.cycles(k, r, p) + self.bounded_image(from, r, p + r - 1);
        let minus = self.cycles(k, r - 1, p - 1) + self.bounded_image(from, r - 1, p + r - 1);
        plus.checked_sub(minus).expect("page dimension is nonnegative")
    }
}
