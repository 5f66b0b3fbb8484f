//! Embedded curve configurations for the two elliptic surfaces.

use super::config::{CaseParams, ConfigFile, CurveClass, CurveRole, FiberKind, FiberSpec};
use super::{Case, SurfaceConfig};

/// Components of the `I9` fiber, clockwise.
pub const I9_COMPONENTS: [&str; 9] = ["A1", "A2", "A3", "B1", "B2", "B3", "C1", "C2", "C3"];
pub const SECTIONS: [&str; 3] = ["E1", "E2", "E3"];
/// The nine curves contracted to the three quotient singularities on `X`.
pub const CONTRACTED_CHAINS: [[&str; 3]; 3] = [["A1", "A2", "E1"], ["B1", "B2", "E2"], ["C1", "C2", "E3"]];
/// The six curves of the `A2^3` configuration on `Y`.
pub const Y_A2_CURVES: [&str; 6] = ["A11", "A12", "A21", "A22", "A31", "A32"];

fn curve(name: &str, self_intersection: i64, role: CurveRole) -> CurveClass {
    CurveClass {
        name: name.to_owned(),
        self_intersection,
        role,
    }
}

fn pair(a: &str, b: &str, v: i64) -> (String, String, i64) {
    (a.to_owned(), b.to_owned(), v)
}

fn fiber(kind: FiberKind, components: &[&str], multiplicity: u32) -> FiberSpec {
    FiberSpec {
        kind,
        components: components.iter().map(|s| (*s).to_owned()).collect(),
        multiplicity,
    }
}

fn multiple_fibers() -> [FiberSpec; 2] {
    [fiber(FiberKind::Multiple, &[], 2), fiber(FiberKind::Multiple, &[], 3)]
}

/// The surface `Y`: four `I3` fibers, multiple fibers of multiplicity 2 and 3,
/// and the sextuple section `E` with `E² = -3`.
pub fn build_config_y() -> SurfaceConfig {
    let mut curves = Vec::new();
    let mut intersections = Vec::new();
    let mut fibers = Vec::new();
    for i in 1..=4 {
        let names: Vec<String> = (1..=3).map(|j| format!("A{i}{j}")).collect();
        for n in &names {
            curves.push(curve(n, -2, CurveRole::FiberComponent));
        }
        intersections.push(pair(&names[0], &names[1], 1));
        intersections.push(pair(&names[0], &names[2], 1));
        intersections.push(pair(&names[1], &names[2], 1));
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        fibers.push(fiber(FiberKind::I(3), &refs, 1));
    }
    curves.push(curve("E", -3, CurveRole::Multisection));
    curves.push(curve("F", 0, CurveRole::FiberClass));
    for (c, v) in [("A13", 6), ("A23", 6), ("A33", 6), ("A41", 1), ("A43", 5), ("F", 6)] {
        intersections.push(pair(c, "E", v));
    }
    fibers.extend(multiple_fibers());
    let canonical = curves
        .iter()
        .map(|c| (c.name.clone(), i64::from(c.name == "E")))
        .collect();
    SurfaceConfig::from_file(ConfigFile {
        name: "Y".into(),
        curves,
        intersections,
        fibers,
        canonical,
        case_params: None,
    })
    .expect("embedded Y configuration is well-formed")
}

/// The surface `X` for an arbitrary triple `(α, β, γ) = E1·(A3, B3, C3)`.
///
/// The order-3 rotation `A → B → C`, `E1 → E2 → E3` is built in, so
/// `E2·(A3, B3, C3) = (γ, α, β)` and `E3·(A3, B3, C3) = (β, γ, α)`.
/// Distinct sections are disjoint.
pub fn build_config_x_params(name: &str, params: CaseParams) -> SurfaceConfig {
    let (a, b, g) = params.as_tuple();
    let mut curves: Vec<CurveClass> = I9_COMPONENTS
        .iter()
        .map(|n| curve(n, -2, CurveRole::FiberComponent))
        .collect();
    curves.extend(SECTIONS.iter().map(|n| curve(n, -3, CurveRole::Multisection)));
    curves.push(curve("F", 0, CurveRole::FiberClass));

    let mut intersections: Vec<(String, String, i64)> = (0..9)
        .map(|k| pair(I9_COMPONENTS[k], I9_COMPONENTS[(k + 1) % 9], 1))
        .collect();
    let rows = [
        ("E1", "A2", [a, b, g]),
        ("E2", "B2", [g, a, b]),
        ("E3", "C2", [b, g, a]),
    ];
    for (e, transverse, values) in rows {
        intersections.push(pair(e, transverse, 1));
        for (c, v) in ["A3", "B3", "C3"].into_iter().zip(values) {
            if v != 0 {
                intersections.push(pair(e, c, v));
            }
        }
        intersections.push(pair(e, "F", 6));
    }

    let mut fibers = vec![fiber(FiberKind::I(9), &I9_COMPONENTS, 1)];
    fibers.extend((0..3).map(|_| fiber(FiberKind::I(1), &[], 1)));
    fibers.extend(multiple_fibers());

    let canonical = curves
        .iter()
        .map(|c| (c.name.clone(), i64::from(c.role == CurveRole::Multisection)))
        .collect();
    SurfaceConfig::from_file(ConfigFile {
        name: name.into(),
        curves,
        intersections,
        fibers,
        canonical,
        case_params: Some(params),
    })
    .expect("embedded X configuration is well-formed")
}

pub fn build_config_x(case: Case) -> SurfaceConfig {
    build_config_x_params(case.config_name(), case.params())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_examples() {
        let y = build_config_y();
        assert_eq!(y.curves().len(), 14);
        assert_eq!(y.pairing("E", "E").unwrap(), -3);
        assert_eq!(y.pairing("E", "A43").unwrap(), 5);
        assert_eq!(y.pairing("E", "A42").unwrap(), 0);
        assert_eq!(y.pairing("A11", "A21").unwrap(), 0);
        assert_eq!(y.pairing("A11", "A13").unwrap(), 1);
    }

    #[test]
    fn x_examples() {
        let x1 = build_config_x(Case::I);
        assert_eq!(x1.pairing("E1", "A3").unwrap(), 2);
        assert_eq!(x1.pairing("E1", "F").unwrap(), 6);
        assert_eq!(x1.pairing("C3", "A1").unwrap(), 1);
        assert_eq!(x1.pairing("A1", "A3").unwrap(), 0);
        let x2 = build_config_x(Case::II);
        assert_eq!(x2.pairing("E2", "B3").unwrap(), 1);
        assert_eq!(x2.pairing("E3", "C3").unwrap(), 1);
        assert_eq!(x2.pairing("E1", "E2").unwrap(), 0);
        assert!(x1.intersection_matrix().is_symmetric());
    }
}
