//! Independent oracles and property bodies shared by the property suite and
//! the acceptance runner.
#![allow(dead_code)]

use fpp_core::exact::{determinant, rank, smith_normal_form, solve_rational, IntMatrix, RatVector};
use fpp_core::lattice::{discriminant_group, enumerate_integral_overlattices, Lattice};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn to_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    let flat: Vec<i64> = rows.iter().flatten().copied().collect();
    IntMatrix::from_i64(rows.len(), cols, &flat)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, v)| *v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * cofactor_det(&minor);
    }
    total
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

/// Rank as the size of the largest nonvanishing minor.
pub fn minor_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| i128::from(m[r][c])).collect())
                    .collect();
                if cofactor_det(&sub) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Index-`p` integral overlattices by direct search: nonzero `c ∈ F_p^n`
/// with `Gc ≡ 0 (mod p)` and `cᵀGc ≡ 0 (mod p²)`, counted up to scalars.
pub fn brute_overlattice_count(gram: &[Vec<i64>], p: i64) -> usize {
    let n = gram.len();
    let total = (p as usize).pow(n as u32);
    let mut hits = 0;
    for idx in 1..total {
        let mut c = vec![0i64; n];
        let mut rest = idx;
        for slot in c.iter_mut() {
            *slot = (rest % p as usize) as i64;
            rest /= p as usize;
        }
        let gc: Vec<i64> = (0..n).map(|i| (0..n).map(|j| gram[i][j] * c[j]).sum()).collect();
        if gc.iter().any(|v| v.rem_euclid(p) != 0) {
            continue;
        }
        let q: i64 = (0..n).map(|i| c[i] * gc[i]).sum();
        if q.rem_euclid(p * p) == 0 {
            hits += 1;
        }
    }
    hits / (p as usize - 1)
}

pub fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim)
        .prop_flat_map(move |(r, c)| prop::collection::vec(prop::collection::vec(-bound..=bound, c), r))
}

pub fn square_strategy(n: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-bound..=bound, n), n)
}

#[allow(clippy::needless_range_loop)]
pub fn symmetric_strategy(max_rank: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_rank).prop_flat_map(move |n| {
        prop::collection::vec(-bound..=bound, n * (n + 1) / 2).prop_map(move |upper| {
            let mut g = vec![vec![0i64; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    g[i][j] = upper[k];
                    g[j][i] = upper[k];
                    k += 1;
                }
            }
            g
        })
    })
}

/// Nondegenerate symmetric Gram matrices with `|det| ≤ max_det`.
pub fn lattice_strategy(max_rank: usize, max_det: i128) -> impl Strategy<Value = Vec<Vec<i64>>> {
    symmetric_strategy(max_rank, 4).prop_filter("nondegenerate, bounded determinant", move |g| {
        let wide: Vec<Vec<i128>> = g.iter().map(|r| r.iter().map(|&v| i128::from(v)).collect()).collect();
        let d = cofactor_det(&wide).abs();
        d != 0 && d <= max_det
    })
}

/// `U M V = D` with `U`, `V` unimodular and `D` a divisibility chain.
pub fn check_snf(rows: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let m = to_matrix(rows);
    let s = smith_normal_form(&m);
    let d = s.diagonal();
    let udv = s.left_transform.mul(&m).unwrap().mul(&s.right_transform).unwrap();
    prop_assert_eq!(&udv, &d);
    prop_assert_eq!(determinant(&s.left_transform).unwrap().magnitude().clone(), One::one());
    prop_assert_eq!(determinant(&s.right_transform).unwrap().magnitude().clone(), One::one());
    let divs = &s.elementary_divisors;
    for w in divs.windows(2) {
        // Zeros trail; each nonzero divisor divides the next.
        prop_assert!(
            w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()),
            "{:?}",
            divs
        );
    }
    prop_assert_eq!(divs.iter().filter(|v| !v.is_zero()).count(), minor_rank(rows));
    Ok(())
}

/// Rank and solvability agree with the minor oracle.
pub fn check_rank_and_solve(rows: &[Vec<i64>], rhs_seed: &[i64]) -> Result<(), TestCaseError> {
    let m = to_matrix(rows);
    let r = minor_rank(rows);
    prop_assert_eq!(rank(&m), r);
    let b: Vec<i64> = (0..rows.len()).map(|i| rhs_seed[i % rhs_seed.len()]).collect();
    let augmented: Vec<Vec<i64>> = rows
        .iter()
        .zip(&b)
        .map(|(row, v)| {
            let mut a = row.clone();
            a.push(*v);
            a
        })
        .collect();
    let sol = solve_rational(&m, &RatVector::from_integers(&b)).unwrap();
    prop_assert_eq!(sol.consistent, minor_rank(&augmented) == r);
    if let Some(w) = &sol.witness {
        prop_assert_eq!(m.apply(w.as_slice()).unwrap(), RatVector::from_integers(&b).0);
    }
    // A right-hand side in the column space is always solvable.
    let x: Vec<i64> = (0..m.cols()).map(|j| rhs_seed[j % rhs_seed.len()]).collect();
    let ax = m.apply(RatVector::from_integers(&x).as_slice()).unwrap();
    prop_assert!(solve_rational(&m, &RatVector(ax)).unwrap().consistent);
    Ok(())
}

/// The overlattice enumeration agrees with [`brute_overlattice_count`] for
/// every prime whose square can divide the determinant, and every
/// certificate carries an integral Gram of determinant `det / p²`.
pub fn check_overlattices(gram: &[Vec<i64>]) -> Result<(), TestCaseError> {
    let l = Lattice::unlabeled(to_matrix(gram)).unwrap();
    let det = l.determinant();
    let group = discriminant_group(&l).unwrap();
    prop_assert_eq!(group.order(), det.magnitude().clone().into());
    for p in [2i64, 3, 5, 7] {
        let certs = enumerate_integral_overlattices(&l, p as u64).unwrap();
        prop_assert_eq!(certs.len(), brute_overlattice_count(gram, p), "p = {}", p);
        for c in &certs {
            prop_assert!(c.new_gram.is_symmetric());
            let d = determinant(&c.new_gram).unwrap();
            prop_assert_eq!(d * BigInt::from(p * p), det.clone());
        }
    }
    Ok(())
}
