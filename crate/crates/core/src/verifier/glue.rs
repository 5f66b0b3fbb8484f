use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use super::VerifyError;
use crate::exact::RatVector;
use crate::lattice::{discriminant_group, enumerate_integral_overlattices, Lattice};
use crate::surface::{branch_divisor, intersect, Case, Divisor, SurfaceConfig, BRANCH_DEGREE, CONTRACTED_CHAINS};

/// Coefficients of `7·g` on each chain `(X1, X2, E)`: `g = (X1 + 2X2 + 3E)/7`.
pub const CHAIN_WEIGHTS: [i64; 3] = [1, 2, 3];
pub const GLUE_ORDER: i64 = 7;

/// Residues `(a, b)` of `v = g1 + a·g2 + b·g3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GlueVector {
    pub a: i64,
    pub b: i64,
}

impl GlueVector {
    pub fn coefficients(self) -> [i64; 3] {
        [1, self.a, self.b]
    }
}

/// `Σ t_k g_k` as a rational divisor, `g_k` the chain generators.
pub fn chain_combination(config: &SurfaceConfig, coeffs: [i64; 3]) -> Divisor {
    let mut d = Divisor::zero(config);
    for (chain, t) in CONTRACTED_CHAINS.iter().zip(coeffs) {
        for (name, w) in chain.iter().zip(CHAIN_WEIGHTS) {
            d = d.plus_rational(name, BigRational::new(BigInt::from(t * w), BigInt::from(GLUE_ORDER)));
        }
    }
    d
}

pub fn glue_divisor(config: &SurfaceConfig, v: GlueVector) -> Divisor {
    chain_combination(config, v.coefficients())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueSearch {
    pub candidates: usize,
    pub survivors: Vec<GlueVector>,
}

/// Tries all 49 residue pairs and keeps those whose `v` pairs integrally with
/// every curve of the configuration (components, sections and `F`).
pub fn glue_search(config: &SurfaceConfig) -> Result<GlueSearch, VerifyError> {
    let curves: Vec<Divisor> = config
        .curves()
        .iter()
        .map(|c| Divisor::curve(config, &c.name))
        .collect::<Result<_, _>>()?;
    let mut survivors = Vec::new();
    for a in 0..GLUE_ORDER {
        for b in 0..GLUE_ORDER {
            let g = GlueVector { a, b };
            let v = glue_divisor(config, g);
            let mut integral = true;
            for c in &curves {
                if !intersect(config, &v, c)?.is_integer() {
                    integral = false;
                    break;
                }
            }
            if integral {
                survivors.push(g);
            }
        }
    }
    Ok(GlueSearch {
        candidates: (GLUE_ORDER * GLUE_ORDER) as usize,
        survivors,
    })
}

/// The unique surviving glue vector.
pub fn glue_vector(config: &SurfaceConfig) -> Result<GlueVector, VerifyError> {
    let search = glue_search(config)?;
    match search.survivors[..] {
        [only] => Ok(only),
        _ => Err(VerifyError::GlueNotUnique(search.survivors)),
    }
}

pub fn expected_glue(case: Case) -> GlueVector {
    match case {
        Case::I => GlueVector { a: 4, b: 2 },
        Case::II => GlueVector { a: 2, b: 4 },
    }
}

/// The lattice spanned by the nine contracted curves.
pub fn contracted_lattice(config: &SurfaceConfig) -> Result<Lattice, VerifyError> {
    let names: Vec<&str> = CONTRACTED_CHAINS.iter().flatten().copied().collect();
    Ok(config.lattice(&names)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlueIsotropy {
    /// `v·v`, which must be an integer.
    pub self_pairing: String,
    /// Whether `v` generates one of the enumerated index-7 overlattices.
    pub in_overlattice_enumeration: bool,
    pub overlattice_count: usize,
}

/// Cross-checks `v` against the lattice-side enumeration of index-7
/// integral overlattices of the contracted lattice.
pub fn glue_isotropy(config: &SurfaceConfig, v: GlueVector) -> Result<GlueIsotropy, VerifyError> {
    let d = glue_divisor(config, v);
    let self_pairing = intersect(config, &d, &d)?;
    let lattice = contracted_lattice(config)?;
    let group = discriminant_group(&lattice)?;
    let lift: RatVector = lattice.labels().iter().map(|n| d.coefficient(n)).collect();
    let element = group.element_of(&lift)?;
    let certs = enumerate_integral_overlattices(&lattice, GLUE_ORDER as u64)?;
    let mut found = false;
    for c in &certs {
        found |= c.contains(&group, &element)?;
    }
    Ok(GlueIsotropy {
        self_pairing: self_pairing.to_string(),
        in_overlattice_enumeration: found && self_pairing.is_integer(),
        overlattice_count: certs.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchDivisibility {
    /// Coefficients of `B` agree with those of `7v` modulo 7.
    pub congruent_to_glue: bool,
    /// Curves `C` with `B·C` not divisible by 7.
    pub indivisible: Vec<String>,
}

pub fn branch_divisibility(
    config: &SurfaceConfig,
    case: Case,
    v: GlueVector,
) -> Result<BranchDivisibility, VerifyError> {
    let seven = BigRational::from_integer(BigInt::from(BRANCH_DEGREE));
    let seven_v = glue_divisor(config, v).scaled(&seven);
    let b_coeffs = branch_divisor(case);
    let mut b = Divisor::zero(config);
    for (n, c) in b_coeffs {
        b = b.plus(n, c);
    }
    let congruent_to_glue = CONTRACTED_CHAINS.iter().flatten().all(|n| {
        let diff = b.coefficient(n) - seven_v.coefficient(n);
        diff.is_integer() && diff.to_integer().is_multiple_of(&BigInt::from(BRANCH_DEGREE))
    }) && b_coeffs
        .iter()
        .all(|(n, _)| CONTRACTED_CHAINS.iter().flatten().any(|c| c == n));
    let mut indivisible = Vec::new();
    for c in config.curves() {
        let value = intersect(config, &b, &Divisor::curve(config, &c.name)?)?;
        if !(value.is_integer() && value.to_integer().is_multiple_of(&BigInt::from(BRANCH_DEGREE))) {
            indivisible.push(c.name.clone());
        }
    }
    Ok(BranchDivisibility {
        congruent_to_glue,
        indivisible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::build_config_x;

    #[test]
    fn glue_vectors_per_case() {
        for case in Case::ALL {
            let x = build_config_x(case);
            let s = glue_search(&x).unwrap();
            assert_eq!(s.candidates, 49);
            assert_eq!(s.survivors, vec![expected_glue(case)], "{case}");
        }
    }

    #[test]
    fn zero_candidate_rejected_by_a3() {
        let x = build_config_x(Case::I);
        let v = glue_divisor(&x, GlueVector { a: 0, b: 0 });
        let a3 = Divisor::curve(&x, "A3").unwrap();
        assert_eq!(intersect(&x, &v, &a3).unwrap(), BigRational::new(8.into(), 7.into()));
    }

    #[test]
    fn isotropy_and_branch_cross_checks() {
        for case in Case::ALL {
            let x = build_config_x(case);
            let v = expected_glue(case);
            let iso = glue_isotropy(&x, v).unwrap();
            assert!(iso.in_overlattice_enumeration);
            assert_eq!(iso.overlattice_count, 8);
            let b = branch_divisibility(&x, case, v).unwrap();
            assert!(b.congruent_to_glue && b.indivisible.is_empty(), "{b:?}");
        }
    }

    #[test]
    fn missing_glue_is_an_error() {
        let x = crate::surface::build_config_x_params("X", crate::surface::CaseParams::new(0, 0, 5));
        assert_eq!(glue_vector(&x), Err(VerifyError::GlueNotUnique(vec![])));
    }
}
