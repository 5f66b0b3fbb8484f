//! Integral lattices given by a labeled basis and a symmetric Gram matrix.
//!
//! Discriminant groups are computed from the Smith normal form of the Gram
//! matrix; overlattices of prime index are enumerated as integral cyclic
//! subgroups of the discriminant group.

mod discriminant;
mod overlattice;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exact::{determinant, ExactError, IntMatrix};

pub use discriminant::{
    disc_bilinear, discriminant_group, p_elementary_and_length, DiscFormValue, DiscriminantGroup, GroupElement,
};
pub use overlattice::{enumerate_integral_overlattices, OverlatticeCertificate};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("expected {expected} basis labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("duplicate basis label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown basis label {0:?}")]
    UnknownLabel(String),
    #[error("degenerate gram matrix (determinant 0); discriminant group undefined")]
    Degenerate,
    #[error("malformed discriminant group element: {0}")]
    MalformedElement(String),
    #[error("vector is not in the dual lattice")]
    NotInDual,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    labels: Vec<String>,
    gram: IntMatrix,
}

impl Lattice {
    pub fn new<S: Into<String>>(labels: Vec<S>, gram: IntMatrix) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if labels.len() != gram.rows() {
            return Err(LatticeError::LabelCount {
                expected: gram.rows(),
                found: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Self { labels, gram })
    }

    /// Lattice with basis labels `e1..en`.
    pub fn unlabeled(gram: IntMatrix) -> Result<Self, LatticeError> {
        let labels = (1..=gram.rows()).map(|i| format!("e{i}")).collect();
        Self::new(labels, gram)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.gram).expect("gram is square")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (&self.gram[(i, i)] % BigInt::from(2)).is_zero())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Pairing of two rational coordinate vectors.
    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> Result<BigRational, LatticeError> {
        Ok(self.gram.bilinear(x, y)?)
    }

    /// Restriction of the form to the basis vectors named in `labels`.
    pub fn sublattice<S: AsRef<str>>(&self, labels: &[S]) -> Result<Lattice, LatticeError> {
        let idx = labels
            .iter()
            .map(|l| {
                self.index_of(l.as_ref())
                    .ok_or_else(|| LatticeError::UnknownLabel(l.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Lattice::new(
            labels.iter().map(|l| l.as_ref().to_owned()).collect(),
            self.gram.submatrix(&idx, &idx),
        )
    }
}
