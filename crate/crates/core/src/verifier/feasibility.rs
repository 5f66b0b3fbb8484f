use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::VerifyError;
use crate::exact::{solve_rational, IntMatrix, RatVector};
use crate::surface::{build_config_x_params, intersect, CaseParams, Divisor, SurfaceConfig, I9_COMPONENTS, SECTIONS};

/// Number of nonnegative triples with `α + β + γ = 5`.
pub const CANDIDATE_COUNT: usize = 21;

/// The linear system for the coefficients of
/// `E2 - E1 = Σ a_i A_i + Σ b_i B_i + Σ c_i C_i`: one row per pairing with
/// `A1..C3, E1..E3`, then `a_i + b_i + c_i = 0` for `i = 1, 2, 3`, and
/// optionally the redundant pairing with `F`.
#[derive(Clone, Debug)]
pub struct FeasibilitySystem {
    pub matrix: IntMatrix,
    pub rhs: RatVector,
    pub row_labels: Vec<String>,
}

pub fn feasibility_system(config: &SurfaceConfig, include_fiber_row: bool) -> Result<FeasibilitySystem, VerifyError> {
    let difference = Divisor::curve(config, "E2")?.try_sub(&Divisor::curve(config, "E1")?)?;
    let mut targets: Vec<&str> = I9_COMPONENTS.iter().chain(SECTIONS.iter()).copied().collect();
    let fiber_name = config.fiber_class().name.clone();
    if include_fiber_row {
        targets.push(&fiber_name);
    }

    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut rhs = Vec::new();
    let mut row_labels = Vec::new();
    for t in &targets {
        rows.push(
            I9_COMPONENTS
                .iter()
                .map(|u| config.pairing(u, t))
                .collect::<Result<_, _>>()?,
        );
        rhs.push(intersect(config, &difference, &Divisor::curve(config, t)?)?);
        row_labels.push(format!("(E2-E1)·{t}"));
    }
    for i in 0..3 {
        let mut row = vec![0i64; 9];
        row[i] = 1;
        row[3 + i] = 1;
        row[6 + i] = 1;
        rows.push(row);
        rhs.push(BigRational::from_integer(BigInt::from(0)));
        row_labels.push(format!("a{0}+b{0}+c{0}=0", i + 1));
    }
    // Keep the fiber row last so the first 15 rows are the core system.
    if include_fiber_row {
        let f_row = rows.remove(12);
        let f_rhs = rhs.remove(12);
        let f_label = row_labels.remove(12);
        rows.push(f_row);
        rhs.push(f_rhs);
        row_labels.push(f_label);
    }
    Ok(FeasibilitySystem {
        matrix: IntMatrix::from_rows(&rows)?,
        rhs: RatVector(rhs),
        row_labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityResult {
    pub triple: CaseParams,
    pub consistent: bool,
    pub rank: usize,
    pub augmented_rank: usize,
    /// `(a1, a2, a3, b1, b2, b3, c1, c2, c3)` when consistent.
    pub witness: Option<Vec<String>>,
    #[serde(skip)]
    pub witness_exact: Option<RatVector>,
}

/// `E1·(A3, B3, C3)` as read from the table.
pub fn triple_of(config: &SurfaceConfig) -> Result<CaseParams, VerifyError> {
    Ok(CaseParams::new(
        config.pairing("E1", "A3")?,
        config.pairing("E1", "B3")?,
        config.pairing("E1", "C3")?,
    ))
}

/// Solves the 15-row system built from `config`'s own table.
pub fn check_config(config: &SurfaceConfig) -> Result<FeasibilityResult, VerifyError> {
    let sys = feasibility_system(config, false)?;
    let sol = solve_rational(&sys.matrix, &sys.rhs)?;
    Ok(FeasibilityResult {
        triple: triple_of(config)?,
        consistent: sol.consistent,
        rank: sol.rank,
        augmented_rank: sol.augmented_rank,
        witness: sol
            .witness
            .as_ref()
            .map(|w| w.as_slice().iter().map(ToString::to_string).collect()),
        witness_exact: sol.witness,
    })
}

/// Substitutes a witness back: `Σ x_j C_j` must pair with each of the 12
/// curves exactly like `E2 - E1`.
pub fn witness_round_trip(config: &SurfaceConfig, witness: &RatVector) -> Result<bool, VerifyError> {
    let mut combo = Divisor::zero(config);
    for (name, c) in I9_COMPONENTS.iter().zip(witness.as_slice()) {
        combo = combo.plus_rational(name, c.clone());
    }
    let difference = Divisor::curve(config, "E2")?.try_sub(&Divisor::curve(config, "E1")?)?;
    for t in I9_COMPONENTS.iter().chain(SECTIONS.iter()) {
        let c = Divisor::curve(config, t)?;
        if intersect(config, &combo, &c)? != intersect(config, &difference, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn candidate_triples() -> Vec<CaseParams> {
    let mut out = Vec::new();
    for alpha in 0..=5 {
        for beta in 0..=5 - alpha {
            out.push(CaseParams::new(alpha, beta, 5 - alpha - beta));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibilityScan {
    pub results: Vec<FeasibilityResult>,
    pub consistent: Vec<CaseParams>,
}

/// Scans every nonnegative triple summing to 5 on the embedded template.
pub fn feasible_triples() -> Result<FeasibilityScan, VerifyError> {
    let results = candidate_triples()
        .into_iter()
        .map(|t| check_config(&build_config_x_params(&format!("X{t}"), t)))
        .collect::<Result<Vec<_>, _>>()?;
    let consistent = results.iter().filter(|r| r.consistent).map(|r| r.triple).collect();
    Ok(FeasibilityScan { results, consistent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_config_x, Case};

    #[test]
    fn candidate_count() {
        assert_eq!(candidate_triples().len(), CANDIDATE_COUNT);
    }

    #[test]
    fn system_shape() {
        let x = build_config_x(Case::I);
        let s = feasibility_system(&x, false).unwrap();
        assert_eq!((s.matrix.rows(), s.matrix.cols()), (15, 9));
        let s = feasibility_system(&x, true).unwrap();
        assert_eq!(s.matrix.rows(), 16);
        assert_eq!(s.row_labels.last().unwrap(), "(E2-E1)·F");
    }

    #[test]
    fn fiber_row_is_redundant() {
        for t in candidate_triples() {
            let x = build_config_x_params("X", t);
            let [a, b] = [false, true].map(|f| {
                let sys = feasibility_system(&x, f).unwrap();
                solve_rational(&sys.matrix, &sys.rhs).unwrap().consistent
            });
            assert_eq!(a, b, "{t}");
        }
    }

    #[test]
    fn both_cases_consistent_with_round_trip() {
        for case in Case::ALL {
            let x = build_config_x(case);
            let r = check_config(&x).unwrap();
            assert!(r.consistent, "{case}");
            assert!(witness_round_trip(&x, r.witness_exact.as_ref().unwrap()).unwrap());
        }
    }
}
