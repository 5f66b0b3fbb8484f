//! Fraction-free elimination: determinants, ranks, consistency-checked
//! rational solving and row Hermite bases.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, IntMatrix, RatVector};

/// Row echelon form produced by Bareiss elimination.
struct Echelon {
    matrix: IntMatrix,
    /// Column index of the pivot in each of the leading rows.
    pivots: Vec<usize>,
    /// Parity of the row swaps performed.
    negated: bool,
}

/// One-step Bareiss elimination on a copy of `m`. Every intermediate entry is
/// a minor of the input, so the divisions by the previous pivot are exact.
fn bareiss(m: &IntMatrix) -> Echelon {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut negated = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap_rows(p, r);
            negated = !negated;
        }
        let pivot = a[(r, c)].clone();
        for i in r + 1..rows {
            let lead = a[(i, c)].clone();
            for j in c..cols {
                let num = &pivot * &a[(i, j)] - &lead * &a[(r, j)];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[(i, j)] = q;
            }
            for j in 0..c {
                a[(i, j)] = BigInt::zero();
            }
        }
        // Rows above r keep their scale; later divisions only touch rows below.
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon {
        matrix: a,
        pivots,
        negated,
    }
}

/// Exact determinant of a square matrix.
pub fn determinant(m: &IntMatrix) -> Result<BigInt, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let ech = bareiss(m);
    if ech.pivots.len() < n {
        return Ok(BigInt::zero());
    }
    let det = ech.matrix[(n - 1, n - 1)].clone();
    Ok(if ech.negated { -det } else { det })
}

pub fn rank(m: &IntMatrix) -> usize {
    bareiss(m).pivots.len()
}

/// Verdict of [`solve_rational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub consistent: bool,
    pub rank: usize,
    pub augmented_rank: usize,
    /// One solution (free variables set to zero) when consistent.
    pub witness: Option<RatVector>,
}

/// Decides whether `a x = b` has a rational solution by comparing
/// `rank(a)` with `rank(a | b)`, and returns one solution when it does.
pub fn solve_rational(a: &IntMatrix, b: &RatVector) -> Result<Solution, ExactError> {
    if a.rows() != b.len() {
        return Err(ExactError::DimensionMismatch {
            left: (a.rows(), a.cols()),
            right: (b.len(), 1),
        });
    }
    let scale = b.common_denominator();
    let scaled: Vec<BigInt> = b
        .as_slice()
        .iter()
        .map(|v| (v * BigRational::from_integer(scale.clone())).to_integer())
        .collect();

    let n = a.cols();
    let mut aug = IntMatrix::zeros(a.rows(), n + 1);
    for r in 0..a.rows() {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        aug[(r, n)] = scaled[r].clone();
    }
    let ech = bareiss(&aug);
    let augmented_rank = ech.pivots.len();
    let rank = ech.pivots.iter().filter(|&&c| c < n).count();
    if rank != augmented_rank {
        return Ok(Solution {
            consistent: false,
            rank,
            augmented_rank,
            witness: None,
        });
    }

    let e = &ech.matrix;
    let mut x = vec![BigRational::zero(); n];
    for (row, &pc) in ech.pivots.iter().enumerate().rev() {
        let mut acc = BigRational::from_integer(e[(row, n)].clone());
        for c in pc + 1..n {
            if !e[(row, c)].is_zero() {
                acc -= BigRational::from_integer(e[(row, c)].clone()) * &x[c];
            }
        }
        x[pc] = acc / BigRational::from_integer(e[(row, pc)].clone());
    }
    let denom = BigRational::from_integer(scale);
    let x: RatVector = x.into_iter().map(|v| v / &denom).collect();
    debug_assert_eq!(a.apply(x.as_slice()).unwrap(), b.0);
    Ok(Solution {
        consistent: true,
        rank,
        augmented_rank,
        witness: Some(x),
    })
}

/// Extended gcd returning `(g, s, t)` with `s*a + t*b = g >= 0`.
pub(crate) fn xgcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Row-style Hermite normal form. Returns the nonzero rows, which form a
/// basis of the row lattice of `m`.
pub fn hermite_row_basis(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = (a.rows(), a.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if a[(i, c)].is_zero() {
                continue;
            }
            let x = a[(r, c)].clone();
            let y = a[(i, c)].clone();
            let (g, s, t) = xgcd(&x, &y);
            let (xg, yg) = (&x / &g, &y / &g);
            // [s t; -y/g x/g] has determinant 1.
            for j in 0..cols {
                let top = &s * &a[(r, j)] + &t * &a[(i, j)];
                let bottom = &xg * &a[(i, j)] - &yg * &a[(r, j)];
                a[(r, j)] = top;
                a[(i, j)] = bottom;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        let pivot = a[(r, c)].clone();
        for i in 0..r {
            let q = a[(i, c)].div_floor(&pivot);
            a.add_row_multiple(i, r, &-q);
        }
        r += 1;
    }
    a.submatrix(&(0..r).collect::<Vec<_>>(), &(0..cols).collect::<Vec<_>>())
}

/// Inverse of a square integer matrix over the rationals, or `None` when
/// singular. Gauss-Jordan on rationals; inputs here are small.
#[allow(clippy::needless_range_loop)]
pub fn rational_inverse(m: &IntMatrix) -> Result<Option<Vec<Vec<BigRational>>>, ExactError> {
    if !m.is_square() {
        return Err(ExactError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = m.row(r).iter().map(|v| BigRational::from_integer(v.clone())).collect();
            row.extend((0..n).map(|c| {
                if c == r {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Ok(None);
        };
        a.swap(p, c);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..2 * n {
                    let delta = &f * &a[c][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    Ok(Some(a.into_iter().map(|row| row[n..].to_vec()).collect()))
}

/// Inverse of a unimodular matrix, as an integer matrix.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<IntMatrix, ExactError> {
    let inv = rational_inverse(m)?.ok_or(ExactError::NotUnimodular)?;
    let n = m.rows();
    let mut out = IntMatrix::zeros(n, n);
    for (r, row) in inv.into_iter().enumerate() {
        for (c, v) in row.into_iter().enumerate() {
            if !v.is_integer() {
                return Err(ExactError::NotUnimodular);
            }
            out[(r, c)] = v.to_integer();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_gram(last: i64) -> IntMatrix {
        IntMatrix::from_i64(3, 3, &[-2, 1, 0, 1, -2, 1, 0, 1, last])
    }

    #[test]
    fn determinant_examples() {
        let sub = IntMatrix::from_i64(3, 3, &[-3, 1, 0, 1, -2, 1, 0, 1, -2]);
        assert_eq!(determinant(&sub).unwrap(), BigInt::from(-7));
        assert_eq!(determinant(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        assert_eq!(determinant(&chain_gram(-3)).unwrap(), BigInt::from(-7));
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::one());
    }

    #[test]
    fn determinant_tracks_row_swaps() {
        let m = IntMatrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(determinant(&m).unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_i64(3, 3, &[0, 2, 1, 0, 0, 3, 5, 1, 1]);
        // cofactor expansion on the first column: 5 * (2*3 - 1*0) = 30
        assert_eq!(determinant(&m).unwrap(), BigInt::from(30));
    }

    #[test]
    fn determinant_rejects_non_square() {
        let m = IntMatrix::zeros(2, 3);
        assert!(matches!(determinant(&m), Err(ExactError::NotSquare { .. })));
    }

    #[test]
    fn rank_handles_zero_and_rectangular() {
        assert_eq!(rank(&IntMatrix::zeros(3, 4)), 0);
        let m = IntMatrix::from_i64(3, 4, &[1, 2, 3, 4, 2, 4, 6, 8, 0, 0, 1, 1]);
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn identity_system_solves() {
        let b = RatVector::from_integers(&[1, 2, 3]);
        let s = solve_rational(&IntMatrix::identity(3), &b).unwrap();
        assert!(s.consistent);
        assert_eq!(s.witness.unwrap(), b);
    }

    #[test]
    fn inconsistent_system_detected() {
        let a = IntMatrix::from_i64(2, 1, &[1, 1]);
        let b = RatVector::from_integers(&[0, 1]);
        let s = solve_rational(&a, &b).unwrap();
        assert!(!s.consistent);
        assert_eq!((s.rank, s.augmented_rank), (1, 2));
    }

    #[test]
    fn fractional_right_hand_side() {
        let a = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let b = RatVector::from_fraction(&[1, 1], 2);
        let s = solve_rational(&a, &b).unwrap();
        assert_eq!(s.witness.unwrap(), RatVector::from_fraction(&[3, 2], 12));
    }

    #[test]
    fn solve_dimension_mismatch() {
        let err = solve_rational(&IntMatrix::identity(2), &RatVector::zeros(3)).unwrap_err();
        assert!(matches!(err, ExactError::DimensionMismatch { .. }));
    }

    #[test]
    fn hermite_basis_of_redundant_generators() {
        // rows 7*I and (1,4,2): lattice of index 7^2 in Z^3 scaled by 7
        let m = IntMatrix::from_i64(4, 3, &[7, 0, 0, 0, 7, 0, 0, 0, 7, 1, 4, 2]);
        let h = hermite_row_basis(&m);
        assert_eq!(h.rows(), 3);
        assert_eq!(determinant(&h).unwrap().abs(), BigInt::from(49));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let m = IntMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = unimodular_inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(2));
        let not = IntMatrix::from_i64(2, 2, &[2, 0, 0, 1]);
        assert!(matches!(unimodular_inverse(&not), Err(ExactError::NotUnimodular)));
    }
}
