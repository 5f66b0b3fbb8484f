use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::discriminant::{discriminant_group, is_prime, DiscriminantGroup, GroupElement};
use super::{Lattice, LatticeError};
use crate::exact::{hermite_row_basis, IntMatrix, RatVector};

/// An integral overlattice `M = L + Z·v` of prime index `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlatticeCertificate {
    pub index: u64,
    /// Generators of the glue subgroup on the `p`-torsion basis of the
    /// discriminant group, normalized so the first nonzero entry is 1.
    pub glue_generators: Vec<Vec<u64>>,
    /// The glue vector `v` in lattice basis coordinates.
    pub glue_lift: RatVector,
    /// Basis of `M`, written as `p` times the coordinates in the basis of `L`.
    pub scaled_basis: IntMatrix,
    pub new_gram: IntMatrix,
}

impl OverlatticeCertificate {
    /// True if `x` generates (a multiple of) this certificate's glue subgroup.
    pub fn contains(&self, group: &DiscriminantGroup, x: &GroupElement) -> Result<bool, LatticeError> {
        let Some(coords) = group.p_torsion_coordinates(x, self.index)? else {
            return Ok(false);
        };
        if coords.iter().all(|&c| c == 0) {
            return Ok(true);
        }
        Ok(self
            .glue_generators
            .iter()
            .any(|g| *g == normalize_projective(&coords, self.index)))
    }

    pub fn is_even(&self) -> bool {
        (0..self.new_gram.rows()).all(|i| self.new_gram[(i, i)].is_even())
    }
}

/// Scales a nonzero tuple mod `p` so its first nonzero entry is 1.
pub(crate) fn normalize_projective(t: &[u64], p: u64) -> Vec<u64> {
    let Some(&lead) = t.iter().find(|&&c| c % p != 0) else {
        return t.iter().map(|c| c % p).collect();
    };
    let inv = mod_inverse(lead % p, p);
    t.iter().map(|c| (c % p) * inv % p).collect()
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = i128::from(a).extended_gcd(&i128::from(p));
    u64::try_from(e.x.rem_euclid(i128::from(p))).expect("residue")
}

/// Nonzero tuples in `F_p^m` whose first nonzero entry is 1: one per cyclic
/// subgroup of order `p`.
fn projective_points(m: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for lead in 0..m {
        let free = m - lead - 1;
        let count = p.pow(u32::try_from(free).expect("small rank"));
        for mut code in 0..count {
            let mut t = vec![0; m];
            t[lead] = 1;
            for slot in t.iter_mut().skip(lead + 1) {
                *slot = code % p;
                code /= p;
            }
            out.push(t);
        }
    }
    out
}

/// All integral overlattices of index `p`, one per cyclic subgroup
/// `H ⊂ L*/L` of order `p` on which the discriminant bilinear form vanishes.
///
/// Returns an empty list when `p²` does not divide `det(L)`.
pub fn enumerate_integral_overlattices(l: &Lattice, p: u64) -> Result<Vec<OverlatticeCertificate>, LatticeError> {
    if !is_prime(p) {
        return Err(LatticeError::NotPrime(p));
    }
    let det = l.determinant();
    if det.is_zero() {
        return Err(LatticeError::Degenerate);
    }
    let pb = BigInt::from(p);
    if !det.is_multiple_of(&(&pb * &pb)) {
        return Ok(Vec::new());
    }
    let group = discriminant_group(l)?;
    let basis = group.p_torsion_basis(p);
    let mut out = Vec::new();
    for t in projective_points(basis.len(), p) {
        let mut x = group.zero();
        for (c, b) in t.iter().zip(&basis) {
            x = group.add(&x, &group.scale(b, &BigInt::from(*c))?)?;
        }
        let w = group.lift(&x)?;
        if !group.raw_pairing(&w, &w)?.is_integer() {
            continue;
        }
        out.push(certificate(l, p, t, w)?);
    }
    Ok(out)
}

fn certificate(l: &Lattice, p: u64, glue: Vec<u64>, w: RatVector) -> Result<OverlatticeCertificate, LatticeError> {
    let n = l.rank();
    let pr = BigRational::from_integer(BigInt::from(p));
    let mut gens = IntMatrix::zeros(n + 1, n);
    for i in 0..n {
        gens[(i, i)] = BigInt::from(p);
    }
    for (j, c) in w.as_slice().iter().enumerate() {
        let scaled = c * &pr;
        debug_assert!(scaled.is_integer());
        gens[(n, j)] = scaled.to_integer();
    }
    let scaled_basis = hermite_row_basis(&gens);
    let unscaled = scaled_basis.mul(l.gram())?.mul(&scaled_basis.transpose())?;
    let p2 = BigInt::from(p * p);
    let mut new_gram = IntMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            let (q, rem) = unscaled[(r, c)].div_rem(&p2);
            debug_assert!(rem.is_zero(), "overlattice gram must be integral");
            new_gram[(r, c)] = q;
        }
    }
    Ok(OverlatticeCertificate {
        index: p,
        glue_generators: vec![glue],
        glue_lift: w,
        scaled_basis,
        new_gram,
    })
}
