//! Curve configurations on the elliptic surfaces `Y` and `X` and the
//! intersection calculus of divisors supported on them.

mod builders;
mod checks;
mod config;
mod divisor;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use builders::{
    build_config_x, build_config_x_params, build_config_y, CONTRACTED_CHAINS, I9_COMPONENTS, SECTIONS, Y_A2_CURVES,
};
pub use checks::{
    adjunction_check, branch_divisor, euler_numbers, expected_l_table, fiber_consistency, is_i9_component,
    multisection_degrees, rational_curve_union_euler, rotate_label, rotation_symmetry_check, surface_euler_number,
    verify_l_table, with_branch_l, AdjunctionEntry, EulerNumbers, FiberIssue, LTable, LTableEntry, RotationMismatch,
    BRANCH_DEGREE,
};
pub use config::{CaseParams, ConfigFile, CurveClass, CurveRole, FiberKind, FiberSpec, LClass, SurfaceConfig};
pub use divisor::{intersect, Divisor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),
    #[error("invalid config: {0}")]
    Invalid(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalcError {
    #[error("divisor belongs to configuration {found:?}, expected {expected:?}")]
    ConfigMismatch { expected: String, found: String },
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error("configuration has no L class attached")]
    MissingLClass,
    #[error("configuration has no reduced fiber with listed components")]
    NoReferenceFiber,
    #[error(
        "fiber class disagrees with its component sum on ({left})·({right}): formal {formal}, components {components}"
    )]
    FiberMismatch {
        left: String,
        right: String,
        formal: String,
        components: String,
    },
}

/// The two admissible values of `E1·(A3, B3, C3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    I,
    II,
}

impl Case {
    pub const ALL: [Case; 2] = [Case::I, Case::II];

    pub fn params(self) -> CaseParams {
        match self {
            Case::I => CaseParams::new(2, 1, 2),
            Case::II => CaseParams::new(1, 3, 1),
        }
    }

    /// Configuration name and file stem, e.g. `X_caseI`.
    pub fn config_name(self) -> &'static str {
        match self {
            Case::I => "X_caseI",
            Case::II => "X_caseII",
        }
    }

    /// Short tag used in claim ids.
    pub fn tag(self) -> &'static str {
        match self {
            Case::I => "caseI",
            Case::II => "caseII",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
        })
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "I" | "1" => Ok(Case::I),
            "II" | "2" => Ok(Case::II),
            other => Err(format!("invalid case {other:?}: expected I or II")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn r(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn case_parsing() {
        assert_eq!("II".parse::<Case>().unwrap(), Case::II);
        assert!("III".parse::<Case>().is_err());
    }

    #[test]
    fn intersect_examples() {
        let x = with_branch_l(&build_config_x(Case::I), Case::I).unwrap();
        let f = Divisor::curve(&x, "F").unwrap();
        assert_eq!(intersect(&x, &f, &f).unwrap(), BigRational::zero());
        let l = Divisor::l_class(&x);
        let a3 = Divisor::curve(&x, "A3").unwrap();
        assert_eq!(intersect(&x, &l, &a3).unwrap(), r(4));
        assert_eq!(intersect(&x, &l, &Divisor::canonical(&x)).unwrap(), r(2));
        assert_eq!(
            intersect(&x, &Divisor::canonical(&x), &Divisor::canonical(&x)).unwrap(),
            r(0)
        );
    }

    #[test]
    fn intersect_is_symmetric_bilinear() {
        let x = with_branch_l(&build_config_x(Case::II), Case::II).unwrap();
        let d1 = Divisor::canonical(&x).with_l(3).plus("E1", -2).plus("F", 1);
        let d2 = Divisor::l_class(&x).plus("B2", 5).plus("C3", -1);
        let d3 = Divisor::zero(&x).plus("A1", 1).plus("E3", 2);
        let v12 = intersect(&x, &d1, &d2).unwrap();
        assert_eq!(v12, intersect(&x, &d2, &d1).unwrap());
        let sum = d2.try_add(&d3).unwrap();
        assert_eq!(
            intersect(&x, &d1, &sum).unwrap(),
            v12 + intersect(&x, &d1, &d3).unwrap()
        );
    }

    #[test]
    fn intersect_error_paths() {
        let x = build_config_x(Case::I);
        let y = build_config_y();
        let dy = Divisor::curve(&y, "E").unwrap();
        let dx = Divisor::curve(&x, "E1").unwrap();
        assert!(matches!(intersect(&x, &dx, &dy), Err(CalcError::ConfigMismatch { .. })));
        assert!(matches!(dx.try_add(&dy), Err(CalcError::ConfigMismatch { .. })));
        assert_eq!(intersect(&x, &Divisor::l_class(&x), &dx), Err(CalcError::MissingLClass));
        let bogus = Divisor::zero(&x).plus("Q", 1);
        assert_eq!(intersect(&x, &bogus, &dx), Err(CalcError::UnknownCurve("Q".into())));
        let broken = x.with_pairing("F", "E1", 7).unwrap();
        let f = Divisor::curve(&broken, "F").unwrap();
        let e1 = Divisor::curve(&broken, "E1").unwrap();
        assert!(matches!(
            intersect(&broken, &f, &e1),
            Err(CalcError::FiberMismatch { .. })
        ));
    }

    #[test]
    fn divisor_display() {
        let x = build_config_x(Case::I);
        let d = Divisor::canonical(&x).with_l(6).plus("E1", -3).plus("A2", -2);
        assert_eq!(d.to_string(), "K + 6L - 2A2 - 3E1");
        assert_eq!(Divisor::zero(&x).to_string(), "0");
    }
}
