use foxweave::linalg::matrix_market;
use foxweave::linalg::snf::{dense_mul, determinant};
use foxweave::linalg::{invariant_factors, rank, smith_normal_form, ExactMatrix, Field, Ring, SparseMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// Fraction-free elimination over ℚ with i128 entries.
fn oracle_rank_q(rows: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = 1i128;
    for c in 0..nc {
        let Some(p) = (rank..nr).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, p);
        for r in rank + 1..nr {
            for k in c + 1..nc {
                a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[rank][c];
        rank += 1;
    }
    rank
}

fn oracle_rank_mod(rows: &[Vec<i64>], p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    let inv = |x: i64| {
        let mut e = p - 2;
        let (mut b, mut acc) = (x, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        acc
    };
    let mut rank = 0;
    for c in 0..nc {
        let Some(piv) = (rank..nr).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for r in 0..nr {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * iv % p;
                for k in 0..nc {
                    a[r][k] = (a[r][k] - f * a[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    if m.is_empty() {
        return 1;
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<i128>> =
                m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect()).collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] * det_i128(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

// Invariant factors from determinantal divisors: gcd of all k×k minors.
fn oracle_invariant_factors(rows: &[Vec<i64>]) -> Vec<BigInt> {
    let nr = rows.len();
    let nc = rows.first().map_or(0, |r| r.len());
    let mut divisors = vec![1i128];
    for k in 1..=nr.min(nc) {
        let mut g = 0i128;
        for rs in subsets(nr, k) {
            for cs in subsets(nc, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c] as i128).collect()).collect();
                g = g.gcd(&det_i128(&minor));
            }
        }
        if g == 0 {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| BigInt::from(w[1] / w[0])).collect()
}

fn matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(
            prop_oneof![3 => Just(0i64), 2 => -bound..=bound],
            c,
        ), r)
    })
}

fn to_big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_over_q_matches_fraction_free_oracle(rows in matrix(7, 7, 4)) {
        let m = SparseMatrix::from_dense(&rows);
        prop_assert_eq!(rank(&m, Field::Rational), oracle_rank_q(&rows));
    }

    #[test]
    fn rank_mod_p_matches_oracle(rows in matrix(7, 7, 6), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let m = SparseMatrix::from_dense(&rows).reduce_mod(p);
        prop_assert_eq!(rank(&m, Field::Prime(p)), oracle_rank_mod(&rows, p as i64));
    }

    #[test]
    fn rank_is_transpose_invariant(rows in matrix(6, 6, 3)) {
        let m = SparseMatrix::from_dense(&rows);
        prop_assert_eq!(rank(&m, Field::Rational), rank(&m.transpose(), Field::Rational));
    }

    #[test]
    fn smith_form_has_unimodular_transforms(rows in matrix(5, 5, 5)) {
        let a = to_big(&rows);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(dense_mul(&dense_mul(&snf.u, &a), &snf.v), snf.s.clone());
        prop_assert_eq!(determinant(&snf.u).abs(), BigInt::from(1));
        prop_assert_eq!(determinant(&snf.v).abs(), BigInt::from(1));
        for (i, row) in snf.s.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!(i == j || x.is_zero());
            }
        }
        let f = snf.invariant_factors();
        prop_assert!(f.iter().all(|x| x.is_positive()));
        for w in f.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }

    #[test]
    fn invariant_factors_match_determinantal_divisors(rows in matrix(4, 4, 6)) {
        let expected = oracle_invariant_factors(&rows);
        prop_assert_eq!(smith_normal_form(&to_big(&rows)).invariant_factors(), expected.clone());
        prop_assert_eq!(invariant_factors(&SparseMatrix::from_dense(&rows)), expected);
    }

    #[test]
    fn rank_over_q_counts_invariant_factors(rows in matrix(6, 6, 4)) {
        let m = SparseMatrix::from_dense(&rows);
        prop_assert_eq!(invariant_factors(&m).len(), rank(&m, Field::Rational));
    }

    #[test]
    fn kernel_basis_is_annihilated(rows in matrix(5, 6, 3)) {
        let e = ExactMatrix::from_i64(Ring::Rational, &rows).unwrap();
        let kernel = e.kernel_basis().unwrap();
        prop_assert_eq!(kernel.len() + e.rank(), e.ncols());
        for v in kernel {
            for row in e.rows() {
                let dot: BigInt = row.iter().zip(&v).map(|(a, b)| a * b).sum();
                prop_assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn matrix_market_round_trip(rows in matrix(6, 6, 1000)) {
        let m = SparseMatrix::from_dense(&rows);
        let text = matrix_market::to_string(&m);
        let back = matrix_market::read(text.as_bytes()).unwrap();
        prop_assert_eq!(back.to_dense(), rows);
    }

    #[test]
    fn product_matches_dense_product(a in matrix(5, 5, 4), cols in 1usize..5, seed in any::<u64>()) {
        let inner = a[0].len();
        let b: Vec<Vec<i64>> = (0..inner)
            .map(|i| (0..cols).map(|j| ((seed >> ((i * 5 + j) % 60)) & 7) as i64 - 3).collect())
            .collect();
        let dense: Vec<Vec<i64>> = a
            .iter()
            .map(|r| (0..cols).map(|j| (0..inner).map(|k| r[k] * b[k][j]).sum()).collect())
            .collect();
        let prod = SparseMatrix::from_dense(&a).mul(&SparseMatrix::from_dense(&b)).unwrap();
        prop_assert_eq!(prod.to_dense(), dense);
    }
}

#[test]
fn smith_form_of_known_matrix() {
    let rows = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
    assert_eq!(
        smith_normal_form(&to_big(&rows)).invariant_factors(),
        vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]
    );
}

#[test]
fn smith_requires_integer_ring() {
    let e = ExactMatrix::from_i64(Ring::Rational, &[vec![1, 2]]).unwrap();
    assert!(e.smith().is_err());
}

#[test]
fn matrix_market_rejects_bad_input() {
    assert!(matrix_market::read("".as_bytes()).is_err());
    assert!(matrix_market::read("%%MatrixMarket matrix array real general\n1 1\n".as_bytes()).is_err());
    assert!(matrix_market::read("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n".as_bytes()).is_err());
    assert!(matrix_market::read("%%MatrixMarket matrix coordinate integer general\n2 2 1\n0 1 1\n".as_bytes()).is_err());
}

#[test]
fn ring_parsing() {
    assert_eq!("q".parse::<Ring>().unwrap(), Ring::Rational);
    assert_eq!("fp:5".parse::<Ring>().unwrap(), Ring::Prime(5));
    assert!("fp:6".parse::<Ring>().is_err());
    assert!(Ring::Integer.as_field().is_err());
}
