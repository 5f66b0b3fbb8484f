use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Lattice, LatticeError};
use crate::exact::{reduce_mod, smith_normal_form, unimodular_inverse, IntMatrix, RatVector};

/// Element of a discriminant group, as coefficients on its cyclic generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<BigInt>);

impl GroupElement {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Value of the discriminant form on one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscFormValue {
    /// `b(x, x)` in `[0, 1)`.
    pub bilinear: BigRational,
    /// `q(x)` in `[0, 2)`; only defined for even lattices.
    pub quadratic: Option<BigRational>,
}

/// `L*/L` for a nondegenerate lattice `L`.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    cyclic_orders: Vec<BigInt>,
    generator_lifts: Vec<RatVector>,
    gram: IntMatrix,
    even: bool,
    /// Rows of the inverse right transform belonging to the nontrivial factors.
    coordinate_rows: Vec<Vec<BigInt>>,
}

/// Computes the discriminant group from the Smith form `U G V = D`: the
/// columns of `V D^{-1}` with `d > 1` lift a set of cyclic generators.
pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup, LatticeError> {
    if l.determinant().is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let snf = smith_normal_form(l.gram());
    let v = &snf.right_transform;
    let v_inv = unimodular_inverse(v)?;
    let n = l.rank();

    let mut cyclic_orders = Vec::new();
    let mut generator_lifts = Vec::new();
    let mut coordinate_rows = Vec::new();
    for (k, d) in snf.elementary_divisors.iter().enumerate() {
        if *d <= BigInt::one() {
            continue;
        }
        let lift: RatVector = (0..n).map(|r| BigRational::new(v[(r, k)].clone(), d.clone())).collect();
        cyclic_orders.push(d.clone());
        generator_lifts.push(lift);
        coordinate_rows.push(v_inv.row(k).to_vec());
    }
    Ok(DiscriminantGroup {
        cyclic_orders,
        generator_lifts,
        gram: l.gram().clone(),
        even: l.is_even(),
        coordinate_rows,
    })
}

impl DiscriminantGroup {
    pub fn cyclic_orders(&self) -> &[BigInt] {
        &self.cyclic_orders
    }

    pub fn generator_lifts(&self) -> &[RatVector] {
        &self.generator_lifts
    }

    /// Number of cyclic factors.
    pub fn length(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn order(&self) -> BigInt {
        self.cyclic_orders.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.cyclic_orders.is_empty()
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![BigInt::zero(); self.length()])
    }

    pub fn generator(&self, k: usize) -> GroupElement {
        let mut e = self.zero();
        e.0[k] = BigInt::one();
        e
    }

    fn check(&self, x: &GroupElement) -> Result<GroupElement, LatticeError> {
        if x.0.len() != self.length() {
            return Err(LatticeError::MalformedElement(format!(
                "{} coefficients for a group with {} generators",
                x.0.len(),
                self.length()
            )));
        }
        Ok(GroupElement(
            x.0.iter()
                .zip(&self.cyclic_orders)
                .map(|(c, d)| c.mod_floor(d))
                .collect(),
        ))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, LatticeError> {
        let (x, y) = (self.check(x)?, self.check(y)?);
        self.check(&GroupElement(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect()))
    }

    pub fn scale(&self, x: &GroupElement, k: &BigInt) -> Result<GroupElement, LatticeError> {
        let x = self.check(x)?;
        self.check(&GroupElement(x.0.iter().map(|a| a * k).collect()))
    }

    /// A dual-lattice vector representing `x`, in lattice basis coordinates.
    pub fn lift(&self, x: &GroupElement) -> Result<RatVector, LatticeError> {
        let x = self.check(x)?;
        let n = self.gram.rows();
        let mut out = RatVector::zeros(n);
        for (c, g) in x.0.iter().zip(&self.generator_lifts) {
            if !c.is_zero() {
                out = out.add(&g.scaled(&BigRational::from_integer(c.clone())));
            }
        }
        Ok(out)
    }

    /// Class of a dual-lattice vector given in basis coordinates.
    pub fn element_of(&self, w: &RatVector) -> Result<GroupElement, LatticeError> {
        if w.len() != self.gram.rows() {
            return Err(LatticeError::MalformedElement(format!(
                "vector of length {} for a rank {} lattice",
                w.len(),
                self.gram.rows()
            )));
        }
        if !RatVector(self.gram.apply(w.as_slice())?).is_integral() {
            return Err(LatticeError::NotInDual);
        }
        let coeffs = self
            .coordinate_rows
            .iter()
            .zip(&self.cyclic_orders)
            .map(|(row, d)| {
                let t = row.iter().zip(w.as_slice()).fold(BigRational::zero(), |acc, (a, b)| {
                    acc + BigRational::from_integer(a.clone()) * b
                }) * BigRational::from_integer(d.clone());
                debug_assert!(t.is_integer());
                t.to_integer().mod_floor(d)
            })
            .collect();
        Ok(GroupElement(coeffs))
    }

    /// Exact pairing of two lifts, not reduced.
    pub fn raw_pairing(&self, x: &RatVector, y: &RatVector) -> Result<BigRational, LatticeError> {
        Ok(self.gram.bilinear(x.as_slice(), y.as_slice())?)
    }

    /// `b(x, y)` in `Q/Z`, normalized into `[0, 1)`.
    pub fn bilinear(&self, x: &GroupElement, y: &GroupElement) -> Result<BigRational, LatticeError> {
        let v = self.raw_pairing(&self.lift(x)?, &self.lift(y)?)?;
        Ok(reduce_mod(&v, &BigInt::one()))
    }

    pub fn form_value(&self, x: &GroupElement) -> Result<DiscFormValue, LatticeError> {
        let w = self.lift(x)?;
        let v = self.raw_pairing(&w, &w)?;
        Ok(DiscFormValue {
            bilinear: reduce_mod(&v, &BigInt::one()),
            quadratic: self.even.then(|| reduce_mod(&v, &BigInt::from(2))),
        })
    }

    /// Indices of the cyclic factors whose order is divisible by `p`.
    pub(crate) fn p_torsion_factors(&self, p: u64) -> Vec<usize> {
        let p = BigInt::from(p);
        (0..self.length())
            .filter(|&k| self.cyclic_orders[k].is_multiple_of(&p))
            .collect()
    }

    /// Basis of the `p`-torsion subgroup, one element per factor with `p | d`.
    pub fn p_torsion_basis(&self, p: u64) -> Vec<GroupElement> {
        let pb = BigInt::from(p);
        self.p_torsion_factors(p)
            .into_iter()
            .map(|k| {
                let mut e = self.zero();
                e.0[k] = &self.cyclic_orders[k] / &pb;
                e
            })
            .collect()
    }

    /// Coordinates of a `p`-torsion element on [`Self::p_torsion_basis`], or
    /// `None` if `p·x ≠ 0`.
    pub fn p_torsion_coordinates(&self, x: &GroupElement, p: u64) -> Result<Option<Vec<u64>>, LatticeError> {
        let x = self.check(x)?;
        let pb = BigInt::from(p);
        let factors = self.p_torsion_factors(p);
        let mut coords = Vec::with_capacity(factors.len());
        for (k, (c, d)) in x.0.iter().zip(&self.cyclic_orders).enumerate() {
            if !(c * &pb).is_multiple_of(d) {
                return Ok(None);
            }
            if factors.contains(&k) {
                let step = d / &pb;
                let t = (c / step).mod_floor(&pb);
                coords.push(u64::try_from(&t).expect("residue fits in u64"));
            }
        }
        Ok(Some(coords))
    }

    /// Every element of the group; intended for small groups in tests and
    /// brute-force checks.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = vec![self.zero()];
        for (k, d) in self.cyclic_orders.iter().enumerate() {
            let d = usize::try_from(d).expect("small group");
            out = out
                .into_iter()
                .flat_map(|e| {
                    (0..d).map(move |t| {
                        let mut e = e.clone();
                        e.0[k] = BigInt::from(t);
                        e
                    })
                })
                .collect();
        }
        out
    }
}

/// `b(x, y)` for the discriminant group of `l`, reduced into `[0, 1)`.
pub fn disc_bilinear(l: &Lattice, x: &GroupElement, y: &GroupElement) -> Result<BigRational, LatticeError> {
    discriminant_group(l)?.bilinear(x, y)
}

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Whether every cyclic factor of the discriminant group has order `p`, and
/// the number of cyclic factors. The trivial group is `p`-elementary of
/// length 0 for every `p`.
pub fn p_elementary_and_length(l: &Lattice, p: u64) -> Result<(bool, usize), LatticeError> {
    if !is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    let g = discriminant_group(l)?;
    let pb = BigInt::from(p);
    Ok((g.cyclic_orders().iter().all(|d| *d == pb), g.length()))
}
