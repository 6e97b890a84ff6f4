use std::collections::BTreeMap;

use crate::complex::{conormalize, Bicomplex, IdentityKind};
use crate::error::Result;
use crate::linalg::field::Ring;
use crate::spectral::{column_homology, integral_column_homology, verify_sequence, PageOptions, SpectralSequence, Variance};
use crate::verify::{Check, VerifyOptions};

/// Coefficients of `∏_{k=1}^{n−1} (1 + k t^{m−1})`, indexed by degree.
pub fn poincare_betti(m: usize, n: usize) -> Vec<usize> {
    let mut poly = vec![1usize];
    for k in 1..n {
        let mut next = vec![0; poly.len() + m - 1];
        for (deg, &c) in poly.iter().enumerate() {
            next[deg] += c;
            next[deg + m - 1] += k * c;
        }
        poly = next;
    }
    poly
}

/// Rational Betti numbers of column `n`, one per nerve degree.
pub fn betti_numbers_over_q(b: &Bicomplex, n: usize) -> Result<Vec<usize>> {
    Ok(column_homology(b, n, Ring::Rational)?.into_iter().map(|h| h.betti).collect())
}

/// Compares reliable page dimensions of the plain and conormalized
/// bicomplexes for `r = r_min..=r_max` over ℚ. Returns the number of
/// compared entries and the mismatches.
pub fn normalization_agreement(m: usize, n_max: usize, r_min: usize, r_max: usize, caps: crate::complex::Caps) -> Result<(u64, Vec<String>)> {
    let (plain, nerve) = Bicomplex::build(m, n_max, caps)?;
    let normal = conormalize(&plain, &nerve)?;
    let opts = PageOptions { r_max, ..PageOptions::default() };
    let a = SpectralSequence::compute(&plain, opts)?;
    let b = SpectralSequence::compute(&normal, opts)?;
    let mut count = 0;
    let mut bad = Vec::new();
    for (pa, pb) in a.pages.iter().zip(&b.pages).filter(|(p, _)| p.r >= r_min) {
        let keys: BTreeMap<(i64, i64), bool> =
            pa.entries.iter().chain(&pb.entries).map(|e| ((e.p, e.q), e.reliable)).collect();
        for (&(p, q), &reliable) in &keys {
            if !reliable {
                continue;
            }
            count += 1;
            if pa.dim(p, q) != pb.dim(p, q) {
                bad.push(format!("E_{}^({p},{q}): plain {} vs conormalized {}", pa.r, pa.dim(p, q), pb.dim(p, q)));
            }
        }
    }
    Ok((count, bad))
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

pub(crate) fn bicomplex(opts: &VerifyOptions) -> Vec<Check> {
    let n_max = opts.n_max.unwrap_or(4);
    let mut checks = Vec::new();
    let mut built: BTreeMap<usize, Bicomplex> = BTreeMap::new();
    for m in opts.heights(&[2, 3]) {
        let name = format!("m{m}-build");
        match Bicomplex::build(m, n_max, opts.caps) {
            Ok((b, _)) => {
                let report = b.check_identities();
                for (kind, label) in [(IdentityKind::HH, "HH"), (IdentityKind::VV, "VV"), (IdentityKind::HV, "HV"), (IdentityKind::TotalSquare, "D2")] {
                    let check = report.as_ref().map_err(Clone::clone).map(|r| {
                        let all: Vec<_> = r.checks.iter().filter(|c| c.kind == kind).collect();
                        let bad: Vec<String> = all
                            .iter()
                            .filter(|c| c.nonzero != 0)
                            .map(|c| format!("bidegree (d={}, n={}) has {} nonzero entries", c.d, c.n, c.nonzero))
                            .collect();
                        Check::exact(format!("m{m}-{label}"), all.len() as u64, &bad)
                    });
                    checks.push(Check::from_result(format!("m{m}-{label}"), check));
                }
                built.insert(m, b);
            }
            Err(e) => checks.push(Check::from_result(name, Err(e))),
        }
    }
    if opts.m.is_none() || opts.m.is_some_and(|m| (2..=4).contains(&m)) {
        let run = || -> Result<Check> {
            let mut bad = Vec::new();
            let heights = opts.heights(&[2, 3, 4]);
            for &m in &heights {
                let b = match built.get(&m) {
                    Some(b) if b.n_max() >= 2 => b.clone(),
                    _ => Bicomplex::build(m, 2, opts.caps)?.0,
                };
                let hom = integral_column_homology(&b, 2)?;
                let betti = trim(hom.iter().map(|h| h.betti).collect());
                let mut expected = vec![0; m];
                expected[0] = 1;
                expected[m - 1] = 1;
                let torsion: Vec<String> = hom.iter().flat_map(|h| h.torsion.iter().map(|t| t.to_string())).collect();
                if betti != expected || !torsion.is_empty() {
                    bad.push(format!("m = {m}: betti {betti:?}, torsion {torsion:?}, expected {expected:?}"));
                }
            }
            Ok(Check::exact("sphere-columns", heights.len() as u64, &bad))
        };
        checks.push(Check::from_result("sphere-columns", run()));
    }
    let run = || -> Result<Check> {
        let mut bad = Vec::new();
        let mut count = 0;
        for (m, n) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
            if opts.m.is_some_and(|x| x != m) || n > n_max {
                continue;
            }
            let b = match built.get(&m) {
                Some(b) => b.clone(),
                None => Bicomplex::build(m, n, opts.caps)?.0,
            };
            count += 1;
            let got = trim(betti_numbers_over_q(&b, n)?);
            let expected = poincare_betti(m, n);
            if got != expected {
                bad.push(format!("(m, n) = ({m}, {n}): {got:?}, expected {expected:?}"));
            }
        }
        Ok(Check::exact("configuration-columns", count, &bad))
    };
    checks.push(Check::from_result("configuration-columns", run()));
    checks
}

pub(crate) fn pages(opts: &VerifyOptions) -> Vec<Check> {
    let mut checks = Vec::new();
    let heights = opts.heights(&[2]);
    let sizes: Vec<usize> = opts.n_max.map_or_else(|| vec![3, 4], |n| vec![n]);
    for &m in &heights {
        for &n_max in &sizes {
            let built = Bicomplex::build(m, n_max, opts.caps);
            for (ring, variance) in [(Ring::Rational, Variance::Homology), (Ring::Prime(2), Variance::Homology), (Ring::Rational, Variance::Cohomology)] {
                let tag = match variance {
                    Variance::Homology => "",
                    Variance::Cohomology => "-cohomology",
                };
                let name = format!("m{m}-n{n_max}-{ring}{tag}");
                let run = || -> Result<Check> {
                    let (b, _) = built.as_ref().map_err(Clone::clone)?;
                    let ss = SpectralSequence::compute(b, PageOptions { ring, r_max: 4, variance, ..PageOptions::default() })?;
                    let v = verify_sequence(b, &ss)?;
                    let entries: u64 = ss.pages.iter().map(|p| p.entries.len() as u64).sum();
                    Ok(Check::exact(name.clone(), entries, &v.problems))
                };
                checks.push(Check::from_result(name.clone(), run()));
            }
        }
    }
    if opts.m.is_none() {
        let run = || -> Result<Check> {
            let (b, _) = Bicomplex::build(2, 3, opts.caps)?;
            let q = SpectralSequence::compute(&b, PageOptions { ring: Ring::Rational, ..PageOptions::default() })?;
            let f2 = SpectralSequence::compute(&b, PageOptions { ring: Ring::Prime(2), ..PageOptions::default() })?;
            let mut bad = Vec::new();
            let mut count = 0;
            for (a, c) in q.pages.iter().zip(&f2.pages) {
                for e in &a.entries {
                    count += 1;
                    if e.dim != c.dim(e.p, e.q) {
                        bad.push(format!("E_{}^({},{}): q {} vs fp:2 {}", a.r, e.p, e.q, e.dim, c.dim(e.p, e.q)));
                    }
                }
            }
            Ok(Check::exact("fp2-matches-q", count, &bad))
        };
        checks.push(Check::from_result("fp2-matches-q", run()));
        let run = || -> Result<Check> {
            let (b, _) = Bicomplex::build(3, 2, opts.caps)?;
            let ss = SpectralSequence::compute(&b, PageOptions::default())?;
            let dims: Vec<usize> = (0..3).map(|q| ss.pages[0].dim(-2, q)).collect();
            let bad = if dims == [1, 0, 1] { vec![] } else { vec![format!("E_1 column p = −2 is {dims:?}")] };
            Ok(Check::exact("sphere-page", 1, &bad))
        };
        checks.push(Check::from_result("sphere-page", run()));
    }
    for m in opts.heights(&[2, 3]) {
        let top = opts.n_max.unwrap_or(3).min(3);
        for n_max in 1..=top {
            for r_min in [1, 2] {
                let name = format!("normalization-m{m}-n{n_max}-from-r{r_min}");
                let check = normalization_agreement(m, n_max, r_min, 4, opts.caps).map(|(c, bad)| Check::exact(name.clone(), c, &bad));
                checks.push(Check::from_result(name, check));
            }
        }
    }
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn poincare_polynomials() {
        assert_eq!(poincare_betti(2, 3), vec![1, 3, 2]);
        assert_eq!(poincare_betti(2, 4), vec![1, 6, 11, 6]);
        assert_eq!(poincare_betti(3, 3), vec![1, 0, 3, 0, 2]);
        assert_eq!(poincare_betti(4, 1), vec![1]);
    }

    #[test]
    fn unknown_error_is_reported() {
        let c = Check::from_result("x", Err(Error::Config("boom".into())));
        assert!(!c.passed);
        assert_eq!(c.detail, "configuration error: boom");
    }
}
