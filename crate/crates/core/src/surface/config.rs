use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::exact::IntMatrix;
use crate::lattice::{Lattice, LatticeError};

/// Role of a curve class in the elliptic fibration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveRole {
    FiberComponent,
    Multisection,
    FiberClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveClass {
    pub name: String,
    pub self_intersection: i64,
    pub role: CurveRole,
}

/// Kodaira type of a fiber, as far as the Euler number is concerned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FiberKind {
    /// Cycle of `n` rational curves (a nodal rational curve for `n = 1`).
    I(u32),
    /// Multiple fiber with smooth elliptic support.
    Multiple,
}

impl FiberKind {
    /// Topological Euler number of the fiber.
    pub fn euler_number(self) -> i64 {
        match self {
            FiberKind::I(n) => i64::from(n),
            FiberKind::Multiple => 0,
        }
    }
}

impl FromStr for FiberKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "multiple" {
            return Ok(FiberKind::Multiple);
        }
        s.strip_prefix('I')
            .and_then(|n| n.parse::<u32>().ok())
            .filter(|&n| n > 0)
            .map(FiberKind::I)
            .ok_or_else(|| format!("unknown fiber type {s:?} (expected I<n> or multiple)"))
    }
}

impl TryFrom<String> for FiberKind {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<FiberKind> for String {
    fn from(k: FiberKind) -> String {
        k.to_string()
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberKind::I(n) => write!(f, "I{n}"),
            FiberKind::Multiple => f.write_str("multiple"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberSpec {
    #[serde(rename = "type")]
    pub kind: FiberKind,
    #[serde(default)]
    pub components: Vec<String>,
    pub multiplicity: u32,
}

impl FiberSpec {
    /// Reduced fibers whose components are listed; their component sum is `F`.
    pub fn is_reducible_listed(&self) -> bool {
        self.multiplicity == 1 && !self.components.is_empty()
    }
}

/// Intersection numbers of the sextuple section `E1` with `A3, B3, C3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseParams {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl CaseParams {
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Self {
        Self { alpha, beta, gamma }
    }

    pub fn as_tuple(self) -> (i64, i64, i64) {
        (self.alpha, self.beta, self.gamma)
    }
}

impl fmt::Display for CaseParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.alpha, self.beta, self.gamma)
    }
}

/// On-disk representation of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub name: String,
    pub curves: Vec<CurveClass>,
    #[serde(default)]
    pub intersections: Vec<(String, String, i64)>,
    #[serde(default)]
    pub fibers: Vec<FiberSpec>,
    #[serde(default)]
    pub canonical: Vec<(String, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case_params: Option<CaseParams>,
}

/// `L = numerators / denominator`, a rational combination of curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LClass {
    pub numerators: BTreeMap<String, i64>,
    pub denominator: i64,
}

/// A curve configuration on a minimal elliptic surface together with its
/// intersection table and canonical pairing. Immutable once built.
///
/// `K² = 0` for every configuration handled here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceConfig {
    name: String,
    curves: Vec<CurveClass>,
    index: BTreeMap<String, usize>,
    pairing: Vec<Vec<i64>>,
    fibers: Vec<FiberSpec>,
    canonical: Vec<i64>,
    case_params: Option<CaseParams>,
    fiber_class: usize,
    l_class: Option<LClass>,
}

impl SurfaceConfig {
    pub const CANONICAL_SQUARE: i64 = 0;

    pub fn from_file(file: ConfigFile) -> Result<Self, ConfigError> {
        if file.curves.is_empty() {
            return Err(ConfigError::Invalid("no curves listed".into()));
        }
        let mut index = BTreeMap::new();
        for (i, c) in file.curves.iter().enumerate() {
            if index.insert(c.name.clone(), i).is_some() {
                return Err(ConfigError::Invalid(format!("duplicate curve {:?}", c.name)));
            }
        }
        let lookup = |name: &str, context: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ConfigError::Invalid(format!("unknown curve {name:?} in {context}")))
        };

        let n = file.curves.len();
        let mut pairing = vec![vec![0i64; n]; n];
        for (i, c) in file.curves.iter().enumerate() {
            pairing[i][i] = c.self_intersection;
        }
        let mut seen = vec![vec![false; n]; n];
        for (a, b, v) in &file.intersections {
            let (i, j) = (lookup(a, "intersections")?, lookup(b, "intersections")?);
            if i == j {
                return Err(ConfigError::Invalid(format!(
                    "self-pairing of {a:?} belongs in self_intersection"
                )));
            }
            if seen[i][j] {
                return Err(ConfigError::Invalid(format!("pair ({a}, {b}) listed twice")));
            }
            seen[i][j] = true;
            seen[j][i] = true;
            pairing[i][j] = *v;
            pairing[j][i] = *v;
        }

        let mut canonical = vec![0i64; n];
        let mut canon_seen = vec![false; n];
        for (name, v) in &file.canonical {
            let i = lookup(name, "canonical")?;
            if canon_seen[i] {
                return Err(ConfigError::Invalid(format!(
                    "canonical value for {name:?} listed twice"
                )));
            }
            canon_seen[i] = true;
            canonical[i] = *v;
        }

        for fiber in &file.fibers {
            if fiber.multiplicity == 0 {
                return Err(ConfigError::Invalid("fiber multiplicity must be positive".into()));
            }
            for c in &fiber.components {
                let i = lookup(c, "fibers")?;
                if file.curves[i].role != CurveRole::FiberComponent {
                    return Err(ConfigError::Invalid(format!(
                        "fiber component {c:?} must have role fiber-component"
                    )));
                }
            }
        }

        let classes: Vec<usize> = file
            .curves
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == CurveRole::FiberClass)
            .map(|(i, _)| i)
            .collect();
        let [fiber_class] = classes[..] else {
            return Err(ConfigError::Invalid(format!(
                "exactly one fiber-class curve required, found {}",
                classes.len()
            )));
        };

        Ok(Self {
            name: file.name,
            curves: file.curves,
            index,
            pairing,
            fibers: file.fibers,
            canonical,
            case_params: file.case_params,
            fiber_class,
            l_class: None,
        })
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConfigError> {
        let file: ConfigFile = serde_json::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    /// Canonical on-disk form: nonzero off-diagonal pairs in declaration order
    /// and one canonical entry per curve.
    pub fn to_file(&self) -> ConfigFile {
        let n = self.curves.len();
        let mut intersections = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.pairing[i][j] != 0 {
                    intersections.push((
                        self.curves[i].name.clone(),
                        self.curves[j].name.clone(),
                        self.pairing[i][j],
                    ));
                }
            }
        }
        ConfigFile {
            name: self.name.clone(),
            curves: self.curves.clone(),
            intersections,
            fibers: self.fibers.clone(),
            canonical: self
                .curves
                .iter()
                .zip(&self.canonical)
                .map(|(c, &v)| (c.name.clone(), v))
                .collect(),
            case_params: self.case_params,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("config serializes")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn fibers(&self) -> &[FiberSpec] {
        &self.fibers
    }

    pub fn case_params(&self) -> Option<CaseParams> {
        self.case_params
    }

    pub fn fiber_class(&self) -> &CurveClass {
        &self.curves[self.fiber_class]
    }

    pub fn l_class(&self) -> Option<&LClass> {
        self.l_class.as_ref()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn curve(&self, name: &str) -> Option<&CurveClass> {
        self.index_of(name).map(|i| &self.curves[i])
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize, super::CalcError> {
        self.index_of(name)
            .ok_or_else(|| super::CalcError::UnknownCurve(name.to_owned()))
    }

    /// Table entry `a · b`.
    pub fn pairing(&self, a: &str, b: &str) -> Result<i64, super::CalcError> {
        Ok(self.pairing[self.require(a)?][self.require(b)?])
    }

    pub(crate) fn pairing_by_index(&self, i: usize, j: usize) -> i64 {
        self.pairing[i][j]
    }

    /// `K · c`.
    pub fn canonical_degree(&self, name: &str) -> Result<i64, super::CalcError> {
        Ok(self.canonical[self.require(name)?])
    }

    pub(crate) fn canonical_by_index(&self, i: usize) -> i64 {
        self.canonical[i]
    }

    /// First reduced fiber with listed components; `F` expands to its sum.
    pub fn reference_fiber(&self) -> Option<&FiberSpec> {
        self.fibers.iter().find(|f| f.is_reducible_listed())
    }

    /// Full intersection matrix over all curves, in declaration order.
    pub fn intersection_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.pairing.clone();
        IntMatrix::from_rows(&rows).expect("square table")
    }

    /// Lattice spanned by the named classes.
    pub fn lattice<S: AsRef<str>>(&self, names: &[S]) -> Result<Lattice, LatticeError> {
        let labels: Vec<String> = self.curves.iter().map(|c| c.name.clone()).collect();
        Lattice::new(labels, self.intersection_matrix())?.sublattice(names)
    }

    /// Returns a copy with `L = numerators / denominator` attached.
    pub fn with_l_class(&self, numerators: &[(&str, i64)], denominator: i64) -> Result<Self, super::CalcError> {
        for (name, _) in numerators {
            self.require(name)?;
        }
        let mut out = self.clone();
        out.l_class = Some(LClass {
            numerators: numerators.iter().map(|(n, v)| ((*n).to_owned(), *v)).collect(),
            denominator,
        });
        Ok(out)
    }

    /// Copy with a single table entry replaced (both orders). Used for
    /// what-if runs and fault injection.
    pub fn with_pairing(&self, a: &str, b: &str, value: i64) -> Result<Self, super::CalcError> {
        let (i, j) = (self.require(a)?, self.require(b)?);
        let mut out = self.clone();
        out.pairing[i][j] = value;
        out.pairing[j][i] = value;
        if i == j {
            out.curves[i].self_intersection = value;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn minimal(extra: &str) -> String {
        format!(
            r#"{{"name":"t","curves":[
                {{"name":"A","self_intersection":-2,"role":"fiber-component"}},
                {{"name":"F","self_intersection":0,"role":"fiber-class"}}]{extra}}}"#
        )
    }

    #[test]
    fn fiber_kind_parsing() {
        assert_eq!("I9".parse::<FiberKind>().unwrap(), FiberKind::I(9));
        assert_eq!("multiple".parse::<FiberKind>().unwrap(), FiberKind::Multiple);
        assert!("I0".parse::<FiberKind>().is_err());
        assert!("II".parse::<FiberKind>().is_err());
        assert_eq!(FiberKind::I(3).to_string(), "I3");
    }

    #[test]
    fn parses_minimal_config() {
        let c = SurfaceConfig::from_json_str(&minimal("")).unwrap();
        assert_eq!(c.pairing("A", "A").unwrap(), -2);
        assert_eq!(c.pairing("A", "F").unwrap(), 0);
        assert_eq!(c.fiber_class().name, "F");
    }

    #[test]
    fn rejects_malformed_configs() {
        assert!(matches!(SurfaceConfig::from_json_str(""), Err(ConfigError::Parse(_))));
        assert!(matches!(SurfaceConfig::from_json_str("{}"), Err(ConfigError::Parse(_))));
        let cases = [
            r#","intersections":[["A","Q",1]]"#,
            r#","intersections":[["A","A",1]]"#,
            r#","intersections":[["A","F",1],["F","A",1]]"#,
            r#","canonical":[["Z",0]]"#,
            r#","fibers":[{"type":"I1","components":["F"],"multiplicity":1}]"#,
            r#","fibers":[{"type":"I1","components":[],"multiplicity":0}]"#,
        ];
        for extra in cases {
            let r = SurfaceConfig::from_json_str(&minimal(extra));
            assert!(matches!(r, Err(ConfigError::Invalid(_))), "{extra}: {r:?}");
        }
        let unknown_key = minimal(r#","bogus":1"#);
        assert!(matches!(
            SurfaceConfig::from_json_str(&unknown_key),
            Err(ConfigError::Parse(_))
        ));
    }

    #[test]
    fn requires_exactly_one_fiber_class() {
        let s = r#"{"name":"t","curves":[{"name":"A","self_intersection":-2,"role":"fiber-component"}]}"#;
        assert!(matches!(SurfaceConfig::from_json_str(s), Err(ConfigError::Invalid(_))));
    }

    #[test]
    fn with_pairing_is_symmetric() {
        let c = SurfaceConfig::from_json_str(&minimal("")).unwrap();
        let d = c.with_pairing("A", "F", 3).unwrap();
        assert_eq!(d.pairing("F", "A").unwrap(), 3);
        assert!(d.intersection_matrix().is_symmetric());
    }
}
