use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use super::builders::I9_COMPONENTS;
use super::config::CurveRole;
use super::divisor::{intersect, Divisor};
use super::{CalcError, Case, SurfaceConfig};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjunctionEntry {
    pub curve: String,
    pub self_intersection: i64,
    pub canonical_degree: i64,
    /// `2g - 2`: -2 for the rational curves, 0 for the fiber class.
    pub expected: i64,
    pub pass: bool,
}

/// `C² + K·C = 2g - 2` for every curve of the configuration.
pub fn adjunction_check(config: &SurfaceConfig) -> Vec<AdjunctionEntry> {
    config
        .curves()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let expected = if c.role == CurveRole::FiberClass { 0 } else { -2 };
            let k = config.canonical_by_index(i);
            AdjunctionEntry {
                curve: c.name.clone(),
                self_intersection: c.self_intersection,
                canonical_degree: k,
                expected,
                pass: c.self_intersection + k == expected,
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberIssue {
    pub fiber: usize,
    pub against: String,
    pub formal: i64,
    pub component_sum: i64,
}

/// For each reduced listed fiber, the component sum must pair with every
/// curve (and with `K`) exactly as the formal fiber class does, and an `I_n`
/// fiber must list `n` components.
pub fn fiber_consistency(config: &SurfaceConfig) -> Vec<FiberIssue> {
    let f = config
        .index_of(&config.fiber_class().name)
        .expect("fiber class present");
    let n = config.curves().len();
    let mut issues = Vec::new();
    for (fi, fiber) in config.fibers().iter().enumerate() {
        if !fiber.is_reducible_listed() {
            continue;
        }
        if let super::FiberKind::I(count) = fiber.kind {
            if fiber.components.len() != count as usize {
                issues.push(FiberIssue {
                    fiber: fi,
                    against: "component count".into(),
                    formal: i64::from(count),
                    component_sum: fiber.components.len() as i64,
                });
            }
        }
        let idx: Vec<usize> = fiber.components.iter().filter_map(|c| config.index_of(c)).collect();
        for j in 0..n {
            let sum: i64 = idx.iter().map(|&i| config.pairing_by_index(i, j)).sum();
            let formal = config.pairing_by_index(f, j);
            if sum != formal {
                issues.push(FiberIssue {
                    fiber: fi,
                    against: config.curves()[j].name.clone(),
                    formal,
                    component_sum: sum,
                });
            }
        }
        let k_sum: i64 = idx.iter().map(|&i| config.canonical_by_index(i)).sum();
        if k_sum != config.canonical_by_index(f) {
            issues.push(FiberIssue {
                fiber: fi,
                against: "K".into(),
                formal: config.canonical_by_index(f),
                component_sum: k_sum,
            });
        }
    }
    issues
}

/// `(section, E·F)` for every multisection.
pub fn multisection_degrees(config: &SurfaceConfig) -> Vec<(String, i64)> {
    let f = &config.fiber_class().name;
    config
        .curves()
        .iter()
        .filter(|c| c.role == CurveRole::Multisection)
        .map(|c| (c.name.clone(), config.pairing(&c.name, f).expect("known curves")))
        .collect()
}

/// The order-3 relabeling `A → B → C → A`, `E1 → E2 → E3 → E1`.
pub fn rotate_label(name: &str) -> String {
    let mut chars = name.chars();
    match (chars.next(), chars.as_str()) {
        (Some('A'), rest) => format!("B{rest}"),
        (Some('B'), rest) => format!("C{rest}"),
        (Some('C'), rest) => format!("A{rest}"),
        (Some('E'), "1") => "E2".into(),
        (Some('E'), "2") => "E3".into(),
        (Some('E'), "3") => "E1".into(),
        _ => name.to_owned(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationMismatch {
    pub pair: (String, String),
    pub value: i64,
    pub rotated_value: i64,
}

/// Entries of the table (and canonical pairing) not preserved by the
/// rotation. Empty means the table is invariant.
pub fn rotation_symmetry_check(config: &SurfaceConfig) -> Result<Vec<RotationMismatch>, CalcError> {
    let names: Vec<&str> = config.curves().iter().map(|c| c.name.as_str()).collect();
    let mut out = Vec::new();
    for (i, a) in names.iter().enumerate() {
        let ra = rotate_label(a);
        if config.canonical_degree(a)? != config.canonical_degree(&ra)? {
            out.push(RotationMismatch {
                pair: ((*a).to_owned(), "K".into()),
                value: config.canonical_degree(a)?,
                rotated_value: config.canonical_degree(&ra)?,
            });
        }
        for b in &names[i..] {
            let v = config.pairing(a, b)?;
            let rv = config.pairing(&ra, &rotate_label(b))?;
            if v != rv {
                out.push(RotationMismatch {
                    pair: ((*a).to_owned(), (*b).to_owned()),
                    value: v,
                    rotated_value: rv,
                });
            }
        }
    }
    Ok(out)
}

/// Sum of the Euler numbers of the singular fibers.
pub fn surface_euler_number(config: &SurfaceConfig) -> i64 {
    config.fibers().iter().map(|f| f.kind.euler_number()).sum()
}

/// Euler number of a union of smooth rational curves meeting transversally:
/// `2·(curves) - (intersection points)`.
pub fn rational_curve_union_euler<S: AsRef<str>>(config: &SurfaceConfig, names: &[S]) -> Result<i64, CalcError> {
    let mut points = 0;
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            points += config.pairing(a.as_ref(), b.as_ref())?;
        }
    }
    Ok(2 * names.len() as i64 - points)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerNumbers {
    pub y: i64,
    pub x: i64,
    /// Euler number of `X` minus the contracted curves.
    pub x_open: i64,
}

/// Euler numbers of `Y`, `X`, and of the complement in `X` of the curves in
/// `contracted`.
pub fn euler_numbers<S: AsRef<str>>(
    y: &SurfaceConfig,
    x: &SurfaceConfig,
    contracted: &[S],
) -> Result<EulerNumbers, CalcError> {
    let ex = surface_euler_number(x);
    Ok(EulerNumbers {
        y: surface_euler_number(y),
        x: ex,
        x_open: ex - rational_curve_union_euler(x, contracted)?,
    })
}

/// The branch divisor `B`; `B ≡ 7L`.
pub fn branch_divisor(case: Case) -> [(&'static str, i64); 9] {
    match case {
        Case::I => [
            ("A1", 1),
            ("A2", 2),
            ("E1", 3),
            ("B1", 4),
            ("B2", 1),
            ("E2", 5),
            ("C1", 2),
            ("C2", 4),
            ("E3", 6),
        ],
        Case::II => [
            ("A1", 1),
            ("A2", 2),
            ("E1", 3),
            ("B1", 2),
            ("B2", 4),
            ("E2", 6),
            ("C1", 4),
            ("C2", 1),
            ("E3", 5),
        ],
    }
}

pub const BRANCH_DEGREE: i64 = 7;

/// `config` with `L = B/7` attached.
pub fn with_branch_l(config: &SurfaceConfig, case: Case) -> Result<SurfaceConfig, CalcError> {
    config.with_l_class(&branch_divisor(case), BRANCH_DEGREE)
}

/// Expected pairings `L·(A1..C3, E1..E3, K, F)`.
pub fn expected_l_table(case: Case) -> [(&'static str, i64); 14] {
    let (b, c) = match case {
        Case::I => ([-1, 1, 4], [0, 0, 4]),
        Case::II => ([0, 0, 4], [-1, 1, 4]),
    };
    [
        ("A1", 0),
        ("A2", 0),
        ("A3", 4),
        ("B1", b[0]),
        ("B2", b[1]),
        ("B3", b[2]),
        ("C1", c[0]),
        ("C2", c[1]),
        ("C3", c[2]),
        ("E1", -1),
        ("E2", -2),
        ("E3", -2),
        ("K", 2),
        ("F", 12),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LTableEntry {
    pub target: String,
    pub expected: i64,
    pub computed: String,
    /// `B · target`, which must be `7 ×` the expected entry.
    pub branch_pairing: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LTable {
    pub entries: Vec<LTableEntry>,
    /// Curves `C` whose `L·C` is not an integer.
    pub non_integral: Vec<String>,
}

impl LTable {
    pub fn all_pass(&self) -> bool {
        self.non_integral.is_empty() && self.entries.iter().all(|e| e.pass)
    }
}

/// Computes `L = B/7` against every tabulated target and checks the values,
/// plus integrality of `L·C` for every curve of the configuration.
pub fn verify_l_table(config: &SurfaceConfig, case: Case) -> Result<LTable, CalcError> {
    let cfg = with_branch_l(config, case)?;
    let l = Divisor::l_class(&cfg);
    let mut b = Divisor::zero(&cfg);
    for (n, v) in branch_divisor(case) {
        b = b.plus(n, v);
    }
    let target = |name: &str| -> Result<Divisor, CalcError> {
        match name {
            "K" => Ok(Divisor::canonical(&cfg)),
            _ => Divisor::curve(&cfg, name),
        }
    };
    let mut entries = Vec::new();
    for (name, expected) in expected_l_table(case) {
        let t = target(name)?;
        let computed = intersect(&cfg, &l, &t)?;
        let via_b = intersect(&cfg, &b, &t)?;
        let seven = BigRational::from_integer(BigInt::from(BRANCH_DEGREE));
        let pass = computed == BigRational::from_integer(expected.into()) && via_b == &computed * &seven;
        entries.push(LTableEntry {
            target: name.to_owned(),
            expected,
            computed: computed.to_string(),
            branch_pairing: via_b.to_string(),
            pass,
        });
    }
    let mut non_integral = Vec::new();
    for c in cfg.curves() {
        if !intersect(&cfg, &l, &Divisor::curve(&cfg, &c.name)?)?.is_integer() {
            non_integral.push(c.name.clone());
        }
    }
    Ok(LTable { entries, non_integral })
}

/// Whether a curve lies in the `I9` fiber.
pub fn is_i9_component(name: &str) -> bool {
    I9_COMPONENTS.contains(&name)
}
