use foxweave::complex::{Bicomplex, Caps};
use foxweave::linalg::Ring;
use foxweave::spectral::{
    column_homology, verify_sequence, Orientation, PageOptions, PageReport, SpectralPage, SpectralSequence, Variance,
};
use foxweave::Error;

const P: i64 = 10_007;

fn inv(x: i64) -> i64 {
    let (mut b, mut e, mut acc) = (x.rem_euclid(P), P - 2, 1i64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    acc
}

// Row echelon form in place; returns pivot columns.
fn echelon(rows: &mut [Vec<i64>]) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..ncols {
        let Some(p) = (top..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(top, p);
        let iv = inv(rows[top][c]);
        for x in rows[top].iter_mut() {
            *x = *x * iv % P;
        }
        for r in 0..rows.len() {
            if r != top && rows[r][c] != 0 {
                let f = rows[r][c];
                for k in 0..ncols {
                    rows[r][k] = (rows[r][k] - f * rows[top][k]).rem_euclid(P);
                }
            }
        }
        pivots.push(c);
        top += 1;
    }
    pivots
}

fn rank_of(vectors: &[Vec<i64>]) -> usize {
    let mut rows = vectors.to_vec();
    echelon(&mut rows).len()
}

// Null space of `a` (rows × cols), as vectors of length cols.
fn kernel(a: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let mut rows = a.to_vec();
    let pivots = echelon(&mut rows);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (-rows[r][free]).rem_euclid(P);
            }
            v
        })
        .collect()
}

/// Dense total complex with an explicit filtration, built straight from the blocks.
struct Dense {
    // Per total degree k: generator labels (d, n, filtration).
    gens: std::collections::BTreeMap<i64, Vec<(usize, usize, i64)>>,
    // Differential from degree k to k − 1 as a map column → entries.
    diff: std::collections::BTreeMap<i64, Vec<Vec<i64>>>,
}

impl Dense {
    fn new(b: &Bicomplex, orientation: Orientation) -> Dense {
        let dims = b.dims();
        let filt = |d: usize, n: usize| match orientation {
            Orientation::Columns => -(n as i64),
            Orientation::Rows => d as i64,
        };
        let mut gens: std::collections::BTreeMap<i64, Vec<(usize, usize, i64)>> = Default::default();
        let mut offset = std::collections::BTreeMap::new();
        for (n, col) in dims.iter().enumerate() {
            for (d, &len) in col.iter().enumerate() {
                let k = d as i64 - n as i64;
                let list = gens.entry(k).or_default();
                offset.insert((d, n), list.len());
                list.extend(std::iter::repeat_n((d, n, filt(d, n)), len));
            }
        }
        let mut diff = std::collections::BTreeMap::new();
        for (&k, list) in &gens {
            let target_len = gens.get(&(k - 1)).map_or(0, Vec::len);
            let mut cols = vec![vec![0i64; target_len]; list.len()];
            for (n, col) in dims.iter().enumerate() {
                for d in 0..col.len() {
                    if d as i64 - n as i64 != k {
                        continue;
                    }
                    let src = offset[&(d, n)];
                    if d > 0 {
                        let dst = offset[&(d - 1, n)];
                        for (r, c, v) in b.h(d, n).unwrap().triplets() {
                            cols[src + c][dst + r] = (cols[src + c][dst + r] + v).rem_euclid(P);
                        }
                    }
                    if let Some(vm) = b.v(d, n) {
                        let dst = offset[&(d, n + 1)];
                        let sign = if d % 2 == 0 { 1 } else { -1 };
                        for (r, c, v) in vm.triplets() {
                            cols[src + c][dst + r] = (cols[src + c][dst + r] + sign * v).rem_euclid(P);
                        }
                    }
                }
            }
            diff.insert(k, cols);
        }
        Dense { gens, diff }
    }

    fn apply(&self, k: i64, x: &[i64]) -> Vec<i64> {
        let cols = &self.diff[&k];
        let len = self.gens.get(&(k - 1)).map_or(0, Vec::len);
        let mut out = vec![0; len];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0 {
                for (i, &a) in cols[j].iter().enumerate() {
                    out[i] = (out[i] + xj * a) % P;
                }
            }
        }
        out
    }

    // {x ∈ F_p C_k : dx ∈ F_{p−r} C_{k−1}}.
    fn cycles(&self, k: i64, p: i64, r: i64) -> Vec<Vec<i64>> {
        let Some(list) = self.gens.get(&k) else { return Vec::new() };
        let domain: Vec<usize> = (0..list.len()).filter(|&j| list[j].2 <= p).collect();
        let target = self.gens.get(&(k - 1)).cloned().unwrap_or_default();
        let forbidden: Vec<usize> = (0..target.len()).filter(|&i| target[i].2 > p - r).collect();
        let cols = &self.diff[&k];
        let a: Vec<Vec<i64>> = forbidden.iter().map(|&i| domain.iter().map(|&j| cols[j][i]).collect()).collect();
        kernel(&a, domain.len())
            .into_iter()
            .map(|v| {
                let mut full = vec![0; list.len()];
                for (t, &j) in domain.iter().enumerate() {
                    full[j] = v[t];
                }
                full
            })
            .collect()
    }

    // dim E_r at the block (d, n) of degree k and filtration p.
    fn page_dim(&self, k: i64, p: i64, r: i64) -> usize {
        let z = self.cycles(k, p, r);
        let mut below = self.cycles(k, p - 1, r - 1);
        if self.gens.contains_key(&(k + 1)) {
            below.extend(self.cycles(k + 1, p + r - 1, r - 1).iter().map(|x| self.apply(k + 1, x)));
        }
        below.retain(|v| v.iter().any(|&x| x != 0));
        rank_of(&z) - rank_of(&below)
    }
}

fn dim_at(page: &SpectralPage, d: usize, n: usize) -> usize {
    page.entries.iter().find(|e| e.d == d && e.n == n).map_or(0, |e| e.dim)
}

fn compare_with_oracle(m: usize, n_max: usize, orientation: Orientation) {
    let (b, _) = Bicomplex::build(m, n_max, Caps::default()).unwrap();
    let oracle = Dense::new(&b, orientation);
    let opts = PageOptions { ring: Ring::Prime(P as u64), r_max: 4, orientation, ..PageOptions::default() };
    let ss = SpectralSequence::compute(&b, opts).unwrap();
    for page in &ss.pages {
        for (n, col) in b.dims().iter().enumerate() {
            for d in 0..col.len() {
                let k = d as i64 - n as i64;
                let p = match orientation {
                    Orientation::Columns => -(n as i64),
                    Orientation::Rows => d as i64,
                };
                assert_eq!(
                    dim_at(page, d, n),
                    oracle.page_dim(k, p, page.r as i64),
                    "m = {m}, n_max = {n_max}, {orientation:?}, r = {}, (d, n) = ({d}, {n})",
                    page.r
                );
            }
        }
    }
}

#[test]
fn column_pages_match_dense_oracle() {
    compare_with_oracle(2, 3, Orientation::Columns);
    compare_with_oracle(3, 2, Orientation::Columns);
}

#[test]
fn row_pages_match_dense_oracle() {
    compare_with_oracle(2, 3, Orientation::Rows);
}

#[test]
fn first_page_is_column_homology() {
    let (b, _) = Bicomplex::build(2, 3, Caps::default()).unwrap();
    let ss = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    for n in 0..=3 {
        let hom = column_homology(&b, n, Ring::Rational).unwrap();
        for (d, h) in hom.iter().enumerate() {
            assert_eq!(dim_at(&ss.pages[0], d, n), h.betti, "(d, n) = ({d}, {n})");
        }
    }
}

#[test]
fn sphere_column_on_first_page() {
    let (b, _) = Bicomplex::build(3, 2, Caps::default()).unwrap();
    let ss = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    let e1 = &ss.pages[0];
    let column: Vec<usize> = (0..=2).map(|d| e1.dim(-2, d)).collect();
    assert_eq!(column, vec![1, 0, 1]);
}

#[test]
fn sequences_pass_internal_verification() {
    for (m, n_max) in [(2, 3), (3, 2)] {
        let (b, _) = Bicomplex::build(m, n_max, Caps::default()).unwrap();
        for ring in [Ring::Rational, Ring::Prime(2), Ring::Prime(3)] {
            for variance in [Variance::Homology, Variance::Cohomology] {
                for orientation in [Orientation::Columns, Orientation::Rows] {
                    let opts = PageOptions { ring, r_max: 4, variance, orientation };
                    let ss = SpectralSequence::compute(&b, opts).unwrap();
                    let v = verify_sequence(&b, &ss).unwrap();
                    assert!(v.passed(), "{m} {n_max} {ring} {variance:?} {orientation:?}: {:?}", v.problems);
                }
            }
        }
    }
}

#[test]
fn cohomology_dimensions_equal_homology_dimensions() {
    let (b, _) = Bicomplex::build(2, 3, Caps::default()).unwrap();
    let hom = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    let coh = SpectralSequence::compute(&b, PageOptions { variance: Variance::Cohomology, ..PageOptions::default() }).unwrap();
    for (a, c) in hom.pages.iter().zip(&coh.pages) {
        for e in &a.entries {
            assert_eq!(e.dim, dim_at(c, e.d, e.n), "r = {}, (d, n) = ({}, {})", a.r, e.d, e.n);
        }
    }
}

#[test]
fn mod_two_agrees_with_rationals_for_m2() {
    let (b, _) = Bicomplex::build(2, 3, Caps::default()).unwrap();
    let q = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    let f2 = SpectralSequence::compute(&b, PageOptions { ring: Ring::Prime(2), ..PageOptions::default() }).unwrap();
    assert_eq!(PageReport::new(&q.pages, false), PageReport::new(&f2.pages, false));
}

#[test]
fn reliability_follows_column_reach() {
    let (b, _) = Bicomplex::build(2, 3, Caps::default()).unwrap();
    let ss = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    for page in &ss.pages {
        for e in &page.entries {
            assert_eq!(e.reliable, e.n + page.r - 1 <= 3);
        }
    }
}

#[test]
fn report_round_trips_through_json() {
    let (b, _) = Bicomplex::build(2, 2, Caps::default()).unwrap();
    let ss = SpectralSequence::compute(&b, PageOptions::default()).unwrap();
    for with_matrices in [false, true] {
        let report = PageReport::new(&ss.pages, with_matrices);
        assert_eq!(PageReport::from_json(&report.to_json()).unwrap(), report);
    }
    let csv = PageReport::new(&ss.pages, false).to_csv();
    assert!(csv.starts_with("r,p,q,dim,reliable\n"));
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(3) != Some("0")));
}

#[test]
fn bad_options_are_rejected() {
    let (b, _) = Bicomplex::build(2, 2, Caps::default()).unwrap();
    let z = SpectralSequence::compute(&b, PageOptions { ring: Ring::Integer, ..PageOptions::default() });
    assert!(matches!(z, Err(Error::UnsupportedRing(_))));
    let r0 = SpectralSequence::compute(&b, PageOptions { r_max: 0, ..PageOptions::default() });
    assert!(matches!(r0, Err(Error::Config(_))));
}

#[test]
fn total_complex_refuses_m3_beyond_two_columns() {
    let (b, _) = Bicomplex::build(3, 3, Caps::default()).unwrap();
    assert!(SpectralSequence::compute(&b, PageOptions::default()).is_err());
}
