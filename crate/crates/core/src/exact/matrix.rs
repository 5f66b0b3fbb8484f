use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ExactError;

/// Dense integer matrix in row-major order with arbitrary-precision entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, ExactError> {
        if data.len() != rows * cols {
            return Err(ExactError::EntryCount {
                rows,
                cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from row slices; all rows must share a length.
    pub fn from_rows<T>(rows: &[Vec<T>]) -> Result<Self, ExactError>
    where
        T: Clone + Into<BigInt>,
    {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(ExactError::RaggedRows {
                expected: cols,
                found: bad.len(),
            });
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics if `entries.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Self {
            rows,
            cols,
            data: entries.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, ExactError> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Restriction to the given row and column index lists (in the order given).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    /// Applies the matrix to a rational column vector.
    pub fn apply(&self, x: &[BigRational]) -> Result<Vec<BigRational>, ExactError> {
        if x.len() != self.cols {
            return Err(ExactError::DimensionMismatch {
                left: (self.rows, self.cols),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(BigRational::zero(), |acc, (a, v)| {
                        acc + BigRational::from_integer(a.clone()) * v
                    })
            })
            .collect())
    }

    /// Bilinear value `x^T M y` over the rationals.
    pub fn bilinear(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational, ExactError> {
        let my = self.apply(y)?;
        if x.len() != self.rows {
            return Err(ExactError::DimensionMismatch {
                left: (x.len(), 1),
                right: (self.rows, self.cols),
            });
        }
        Ok(x.iter().zip(&my).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self.data[src * self.cols + c] * factor;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self.data[r * self.cols + src] * factor;
            self.data[r * self.cols + dst] += v;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }

    /// Largest absolute entry, used for diagnostics and benches.
    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(Signed::abs).max().unwrap_or_else(BigInt::zero)
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Exact rational vector. `BigRational` keeps every entry reduced with a
/// positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatVector(pub Vec<BigRational>);

impl RatVector {
    pub fn zeros(n: usize) -> Self {
        Self(vec![BigRational::zero(); n])
    }

    pub fn from_integers<T: Clone + Into<BigInt>>(values: &[T]) -> Self {
        Self(
            values
                .iter()
                .cloned()
                .map(|v| BigRational::from_integer(v.into()))
                .collect(),
        )
    }

    /// Builds `numerators / denominator` entrywise.
    pub fn from_fraction(numerators: &[i64], denominator: i64) -> Self {
        Self(
            numerators
                .iter()
                .map(|&n| BigRational::new(BigInt::from(n), BigInt::from(denominator)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    pub fn add(&self, other: &RatVector) -> Self {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Least common multiple of all denominators (1 for the empty vector).
    pub fn common_denominator(&self) -> BigInt {
        use num_integer::Integer;
        self.0.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }
}

impl Index<usize> for RatVector {
    type Output = BigRational;

    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl FromIterator<BigRational> for RatVector {
    fn from_iter<I: IntoIterator<Item = BigRational>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Reduces a rational into `[0, modulus)`.
pub fn reduce_mod(value: &BigRational, modulus: &BigInt) -> BigRational {
    let m = BigRational::from_integer(modulus.clone());
    let q = (value / &m).floor();
    value - q * m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_rows_rejected() {
        let err = IntMatrix::from_rows(&[vec![1, 2], vec![3]]).unwrap_err();
        assert!(matches!(err, ExactError::RaggedRows { .. }));
    }

    #[test]
    fn new_checks_entry_count() {
        assert!(IntMatrix::new(2, 2, vec![BigInt::one(); 3]).is_err());
    }

    #[test]
    fn multiply_and_transpose() {
        let a = IntMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]);
        let b = a.transpose();
        let c = a.mul(&b).unwrap();
        assert_eq!(c, IntMatrix::from_i64(2, 2, &[14, 32, 32, 77]));
        assert!(c.is_symmetric());
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn reduce_mod_normalizes_negative_values() {
        let v = BigRational::new((-3).into(), 7.into());
        assert_eq!(reduce_mod(&v, &BigInt::one()), BigRational::new(4.into(), 7.into()));
        let w = BigRational::new((-2).into(), 1.into());
        assert_eq!(reduce_mod(&w, &BigInt::from(2)), BigRational::zero());
    }

    #[test]
    fn rat_vector_stays_reduced() {
        let v = RatVector::from_fraction(&[2, -4, 6], 4);
        assert_eq!(v[0], BigRational::new(1.into(), 2.into()));
        assert_eq!(v[1].denom(), &BigInt::one());
        assert_eq!(v.common_denominator(), BigInt::from(2));
    }
}
