use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form `left · m · right = diag(elementary_divisors)`.
///
/// `elementary_divisors` has `min(rows, cols)` entries, all nonnegative,
/// forming a divisibility chain with the zeros at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub elementary_divisors: Vec<BigInt>,
    pub left_transform: IntMatrix,
    pub right_transform: IntMatrix,
}

impl SnfResult {
    /// The `rows × cols` diagonal matrix carrying the divisors.
    pub fn diagonal(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.left_transform.rows(), self.right_transform.cols());
        for (i, v) in self.elementary_divisors.iter().enumerate() {
            d[(i, i)] = v.clone();
        }
        d
    }

    /// Divisors strictly greater than one: the invariant factors of the cokernel
    /// torsion.
    pub fn nontrivial_divisors(&self) -> Vec<BigInt> {
        self.elementary_divisors
            .iter()
            .filter(|d| **d > BigInt::from(1))
            .cloned()
            .collect()
    }
}

/// Smith normal form of an arbitrary integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // Bring the smallest nonzero entry of the trailing block to (t, t).
        let Some((pr, pc)) = smallest_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pr);
        left.swap_rows(t, pr);
        a.swap_cols(t, pc);
        right.swap_cols(t, pc);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row_multiple(i, t, &-&q);
                left.add_row_multiple(i, t, &-&q);
                if !a[(i, t)].is_zero() {
                    // remainder is smaller than the pivot
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                a.add_col_multiple(j, t, &-&q);
                right.add_col_multiple(j, t, &-&q);
                if !a[(t, j)].is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // Pivot row and column are clear; enforce divisibility of the block.
            let pivot = a[(t, t)].clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    a.add_row_multiple(t, i, &BigInt::from(1));
                    left.add_row_multiple(t, i, &BigInt::from(1));
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let elementary_divisors = (0..rows.min(cols)).map(|i| a[(i, i)].clone()).collect();
    SnfResult {
        elementary_divisors,
        left_transform: left,
        right_transform: right,
    }
}

fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for r in t..a.rows() {
        for c in t..a.cols() {
            let v = a[(r, c)].abs();
            if v.is_zero() {
                continue;
            }
            if best.as_ref().is_none_or(|(_, b)| v < *b) {
                best = Some(((r, c), v));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::determinant;

    fn divisors(m: &IntMatrix) -> Vec<i64> {
        smith_normal_form(m)
            .elementary_divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    fn check_reconstruction(m: &IntMatrix) {
        let s = smith_normal_form(m);
        let prod = s.left_transform.mul(m).unwrap().mul(&s.right_transform).unwrap();
        assert_eq!(prod, s.diagonal());
        assert_eq!(determinant(&s.left_transform).unwrap().abs(), BigInt::from(1));
        assert_eq!(determinant(&s.right_transform).unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn identity_has_unit_divisors() {
        assert_eq!(divisors(&IntMatrix::identity(3)), vec![1, 1, 1]);
    }

    #[test]
    fn two_by_two_example() {
        // gcd of entries is 2, |det| = 8, so (2, 4)
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 6, 8]);
        assert_eq!(divisors(&m), vec![2, 4]);
        check_reconstruction(&m);
    }

    #[test]
    fn a2_cubed_is_three_elementary() {
        let mut g = IntMatrix::zeros(6, 6);
        for b in 0..3 {
            let o = 2 * b;
            g[(o, o)] = (-2).into();
            g[(o + 1, o + 1)] = (-2).into();
            g[(o, o + 1)] = 1.into();
            g[(o + 1, o)] = 1.into();
        }
        assert_eq!(divisors(&g), vec![1, 1, 1, 3, 3, 3]);
        check_reconstruction(&g);
    }

    #[test]
    fn zero_and_rectangular_inputs() {
        assert_eq!(divisors(&IntMatrix::zeros(2, 3)), vec![0, 0]);
        let m = IntMatrix::from_i64(2, 3, &[0, 0, 0, 0, 0, 6]);
        assert_eq!(divisors(&m), vec![6, 0]);
        check_reconstruction(&m);
        let m = IntMatrix::from_i64(3, 2, &[2, 0, 0, 3, 0, 0]);
        assert_eq!(divisors(&m), vec![1, 6]);
        check_reconstruction(&m);
    }
}
