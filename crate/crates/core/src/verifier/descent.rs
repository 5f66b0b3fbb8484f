use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::{intersect, is_i9_component, CalcError, Case, Divisor, SurfaceConfig, SECTIONS};

pub const MIN_LEVEL: u32 = 1;
pub const MAX_LEVEL: u32 = 6;
pub const STEP_CAP: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentRejection {
    #[error("level {0} outside 1..=6")]
    InvalidLevel(u32),
    #[error("empty script")]
    EmptyScript,
    #[error("step {step}: unknown curve {curve:?}")]
    UnknownCurve { step: usize, curve: String },
    #[error("step {step}: {curve}² = {self_intersection} is not negative")]
    NonNegativeCurve {
        step: usize,
        curve: String,
        self_intersection: i64,
    },
    #[error("step {step}: D·{curve} = {pairing} is not negative")]
    NonNegativePairing {
        step: usize,
        curve: String,
        pairing: String,
    },
    #[error("final D·F = {0} is not negative")]
    FiberDegreeNonNegative(String),
    #[error("section multiplicities sum to {found}, expected {expected}")]
    SectionSumMismatch { expected: i64, found: i64 },
    #[error("subtracted curve {0:?} is neither a section nor an I9 component")]
    SupportOutsideFiber(String),
    #[error(transparent)]
    Calc(#[from] CalcError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescentFailure {
    #[error("no curve C with C² < 0 and D·C < 0 after {steps} steps while D·F = {fiber_degree}")]
    Stuck { steps: usize, fiber_degree: String },
    #[error("step cap of {0} exhausted")]
    CapExhausted(usize),
    #[error("search result rejected by replay: {0}")]
    Rejected(#[from] DescentRejection),
    #[error("pairing value does not fit in i64")]
    Overflow,
}

impl From<CalcError> for DescentFailure {
    fn from(e: CalcError) -> Self {
        DescentFailure::Rejected(DescentRejection::Calc(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentStep {
    pub curve: String,
    /// `D·C` before the subtraction.
    pub pairing: String,
    /// Running divisor after the subtraction.
    pub divisor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentTrace {
    pub config: String,
    pub level: u32,
    pub steps: Vec<DescentStep>,
    /// Total multiplicity of each subtracted curve.
    pub subtracted: BTreeMap<String, i64>,
    /// Multiplicities `(i1, i2, i3)` of `E1, E2, E3`.
    pub section_multiplicities: [i64; 3],
    pub final_divisor: String,
    pub final_fiber_degree: String,
}

impl DescentTrace {
    pub fn script(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.curve.clone()).collect()
    }
}

fn start_divisor(config: &SurfaceConfig, level: u32) -> Divisor {
    Divisor::canonical(config).with_l(i64::from(level))
}

fn check_level(level: u32) -> Result<(), DescentRejection> {
    if (MIN_LEVEL..=MAX_LEVEL).contains(&level) {
        Ok(())
    } else {
        Err(DescentRejection::InvalidLevel(level))
    }
}

/// Replays `script` from `K + iL`, checking `C² < 0` and `D·C < 0` before
/// every subtraction and `D·F < 0`, `i1 + i2 + i3 = 2i + 1` and fiber support
/// at the end. `config` must carry `L`.
pub fn descent_replay<S: AsRef<str>>(
    config: &SurfaceConfig,
    level: u32,
    script: &[S],
) -> Result<DescentTrace, DescentRejection> {
    check_level(level)?;
    if script.is_empty() {
        return Err(DescentRejection::EmptyScript);
    }
    let mut d = start_divisor(config, level);
    let mut steps = Vec::with_capacity(script.len());
    let mut subtracted: BTreeMap<String, i64> = BTreeMap::new();
    for (idx, name) in script.iter().enumerate() {
        let name = name.as_ref();
        let step = idx + 1;
        let curve = config.curve(name).ok_or_else(|| DescentRejection::UnknownCurve {
            step,
            curve: name.to_owned(),
        })?;
        if curve.self_intersection >= 0 {
            return Err(DescentRejection::NonNegativeCurve {
                step,
                curve: name.to_owned(),
                self_intersection: curve.self_intersection,
            });
        }
        let c = Divisor::curve(config, name)?;
        let pairing = intersect(config, &d, &c)?;
        if !pairing.is_negative() {
            return Err(DescentRejection::NonNegativePairing {
                step,
                curve: name.to_owned(),
                pairing: pairing.to_string(),
            });
        }
        d = d.try_sub(&c)?;
        *subtracted.entry(name.to_owned()).or_default() += 1;
        steps.push(DescentStep {
            curve: name.to_owned(),
            pairing: pairing.to_string(),
            divisor: d.to_string(),
        });
    }

    let f = Divisor::curve(config, &config.fiber_class().name)?;
    let fiber_degree = intersect(config, &d, &f)?;
    if !fiber_degree.is_negative() {
        return Err(DescentRejection::FiberDegreeNonNegative(fiber_degree.to_string()));
    }
    let section_multiplicities = SECTIONS.map(|e| subtracted.get(e).copied().unwrap_or(0));
    let found: i64 = section_multiplicities.iter().sum();
    let expected = 2 * i64::from(level) + 1;
    if found != expected {
        return Err(DescentRejection::SectionSumMismatch { expected, found });
    }
    if let Some(bad) = subtracted
        .keys()
        .find(|n| !SECTIONS.contains(&n.as_str()) && !is_i9_component(n))
    {
        return Err(DescentRejection::SupportOutsideFiber(bad.clone()));
    }
    Ok(DescentTrace {
        config: config.name().to_owned(),
        level,
        steps,
        subtracted,
        section_multiplicities,
        final_divisor: d.to_string(),
        final_fiber_degree: fiber_degree.to_string(),
    })
}

/// Integer model of the pairings used during search: every value is scaled
/// by the common denominator of `(K + iL)·C`.
struct DescentSpace {
    names: Vec<String>,
    base: Vec<i64>,
    matrix: Vec<Vec<i64>>,
    fiber_base: i64,
    fiber_row: Vec<i64>,
    scale: i64,
}

impl DescentSpace {
    fn new(config: &SurfaceConfig, level: u32) -> Result<Self, DescentFailure> {
        let start = start_divisor(config, level);
        let names: Vec<String> = config
            .curves()
            .iter()
            .filter(|c| c.self_intersection < 0)
            .map(|c| c.name.clone())
            .collect();
        let f_name = config.fiber_class().name.clone();
        let mut raw = Vec::with_capacity(names.len() + 1);
        for n in names.iter().chain(std::iter::once(&f_name)) {
            raw.push(intersect(config, &start, &Divisor::curve(config, n)?)?);
        }
        let scale = raw.iter().fold(BigInt::from(1), |acc, v| acc.lcm(v.denom()));
        let to_i64 = |v: &BigRational| -> Result<i64, DescentFailure> {
            (v * BigRational::from_integer(scale.clone()))
                .to_integer()
                .to_i64()
                .ok_or(DescentFailure::Overflow)
        };
        let mut base = raw.iter().map(to_i64).collect::<Result<Vec<_>, _>>()?;
        let fiber_base = base.pop().expect("fiber entry present");
        let matrix = names
            .iter()
            .map(|a| {
                names
                    .iter()
                    .map(|b| config.pairing(a, b))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let fiber_row = names
            .iter()
            .map(|a| config.pairing(a, &f_name))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            names,
            base,
            matrix,
            fiber_base,
            fiber_row,
            scale: scale.to_i64().ok_or(DescentFailure::Overflow)?,
        })
    }

    fn pairing(&self, state: &[i64], k: usize) -> i64 {
        let sub: i64 = state.iter().zip(&self.matrix).map(|(m, row)| m * row[k]).sum();
        self.base[k] - self.scale * sub
    }

    fn fiber_degree(&self, state: &[i64]) -> i64 {
        let sub: i64 = state.iter().zip(&self.fiber_row).map(|(m, f)| m * f).sum();
        self.fiber_base - self.scale * sub
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn multiplicities(&self, state: &[i64]) -> BTreeMap<String, i64> {
        self.names
            .iter()
            .zip(state)
            .filter(|(_, &m)| m != 0)
            .map(|(n, &m)| (n.clone(), m))
            .collect()
    }

    fn fraction(&self, scaled: i64) -> BigRational {
        BigRational::new(BigInt::from(scaled), BigInt::from(self.scale))
    }
}

/// Greedy descent: repeatedly subtracts the negative curve with the most
/// negative `D·C` (first in declaration order on ties) until `D·F < 0`.
/// The result is re-validated by [`descent_replay`].
pub fn descent_search(config: &SurfaceConfig, level: u32) -> Result<DescentTrace, DescentFailure> {
    check_level(level)?;
    let space = DescentSpace::new(config, level)?;
    let mut state = vec![0i64; space.names.len()];
    let mut script = Vec::new();
    while space.fiber_degree(&state) >= 0 {
        if script.len() == STEP_CAP {
            return Err(DescentFailure::CapExhausted(STEP_CAP));
        }
        let best = (0..space.names.len())
            .map(|k| (space.pairing(&state, k), k))
            .filter(|&(p, _)| p < 0)
            .min();
        let Some((_, k)) = best else {
            return Err(DescentFailure::Stuck {
                steps: script.len(),
                fiber_degree: space.fraction(space.fiber_degree(&state)).to_string(),
            });
        };
        state[k] += 1;
        script.push(space.names[k].clone());
    }
    log::debug!("greedy descent {} i={level}: {} steps", config.name(), script.len());
    Ok(descent_replay(config, level, &script)?)
}

/// Depth-first search for a valid script whose subtracted multiplicities stay
/// below `upper` and end in a state satisfying `accept` with `D·F < 0`.
/// The script starts with `prefix`; returns `None` if no such script exists.
pub fn search_descent_within<S, F>(
    config: &SurfaceConfig,
    level: u32,
    prefix: &[S],
    upper: &BTreeMap<String, i64>,
    accept: F,
) -> Result<Option<Vec<String>>, DescentFailure>
where
    S: AsRef<str>,
    F: Fn(&BTreeMap<String, i64>) -> bool,
{
    check_level(level)?;
    let space = DescentSpace::new(config, level)?;
    let bound: Vec<i64> = space.names.iter().map(|n| upper.get(n).copied().unwrap_or(0)).collect();
    let mut state = vec![0i64; space.names.len()];
    let mut path = Vec::new();
    for name in prefix {
        let Some(k) = space.index(name.as_ref()) else {
            return Ok(None);
        };
        if space.pairing(&state, k) >= 0 || state[k] >= bound[k] {
            return Ok(None);
        }
        state[k] += 1;
        path.push(k);
    }

    struct Search<'a, F> {
        space: &'a DescentSpace,
        bound: &'a [i64],
        accept: F,
        dead: HashSet<Vec<i64>>,
    }

    impl<F: Fn(&BTreeMap<String, i64>) -> bool> Search<'_, F> {
        fn visit(&mut self, state: &mut Vec<i64>, path: &mut Vec<usize>) -> bool {
            if self.space.fiber_degree(state) < 0 && (self.accept)(&self.space.multiplicities(state)) {
                return true;
            }
            if self.dead.contains(state) {
                return false;
            }
            let mut moves: Vec<(i64, usize)> = (0..state.len())
                .filter(|&k| state[k] < self.bound[k])
                .map(|k| (self.space.pairing(state, k), k))
                .filter(|&(p, _)| p < 0)
                .collect();
            moves.sort();
            for (_, k) in moves {
                state[k] += 1;
                path.push(k);
                if self.visit(state, path) {
                    return true;
                }
                path.pop();
                state[k] -= 1;
            }
            self.dead.insert(state.clone());
            false
        }
    }

    let mut search = Search {
        space: &space,
        bound: &bound,
        accept,
        dead: HashSet::new(),
    };
    if search.visit(&mut state, &mut path) {
        Ok(Some(path.into_iter().map(|k| space.names[k].clone()).collect()))
    } else {
        Ok(None)
    }
}

/// A reference descent target `K + iL - Σ i_j E_j - G_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceDivisor {
    pub level: u32,
    pub sections: [i64; 3],
    pub fiber_part: &'static [(&'static str, i64)],
}

impl ReferenceDivisor {
    pub fn multiplicities(&self) -> BTreeMap<String, i64> {
        let mut m: BTreeMap<String, i64> = self.fiber_part.iter().map(|(n, c)| ((*n).to_owned(), *c)).collect();
        for (e, c) in SECTIONS.iter().zip(self.sections) {
            if c != 0 {
                m.insert((*e).to_owned(), c);
            }
        }
        m
    }

    pub fn to_divisor(&self, config: &SurfaceConfig) -> Divisor {
        self.multiplicities()
            .iter()
            .fold(start_divisor(config, self.level), |d, (n, c)| d.plus(n, -c))
    }
}

/// Reference Case I targets `D_1 .. D_6`.
pub const CASE_I_REFERENCE: [ReferenceDivisor; 6] = [
    ReferenceDivisor {
        level: 1,
        sections: [1, 1, 1],
        fiber_part: &[("B1", 1), ("B2", 1), ("B3", 1), ("C1", 1), ("C2", 1)],
    },
    ReferenceDivisor {
        level: 2,
        sections: [1, 1, 3],
        fiber_part: &[("A1", 1), ("A2", 1), ("B1", 1), ("C1", 1), ("C2", 2), ("C3", 1)],
    },
    ReferenceDivisor {
        level: 3,
        sections: [1, 3, 3],
        fiber_part: &[
            ("A1", 1),
            ("A2", 1),
            ("B1", 2),
            ("B2", 1),
            ("B3", 1),
            ("C1", 1),
            ("C2", 2),
        ],
    },
    ReferenceDivisor {
        level: 4,
        sections: [2, 3, 4],
        fiber_part: &[("A1", 1), ("A2", 1), ("B1", 2), ("B2", 1), ("C1", 1), ("C2", 2)],
    },
    ReferenceDivisor {
        level: 5,
        sections: [3, 4, 4],
        fiber_part: &[
            ("A1", 1),
            ("A2", 2),
            ("A3", 1),
            ("B1", 3),
            ("B2", 1),
            ("C1", 1),
            ("C2", 2),
        ],
    },
    ReferenceDivisor {
        level: 6,
        sections: [3, 5, 5],
        fiber_part: &[
            ("A1", 1),
            ("A2", 2),
            ("A3", 1),
            ("B1", 4),
            ("B2", 1),
            ("C1", 1),
            ("C2", 3),
        ],
    },
];

pub fn reference_divisor(case: Case, level: u32) -> Option<&'static ReferenceDivisor> {
    match case {
        Case::I => CASE_I_REFERENCE.iter().find(|r| r.level == level),
        Case::II => None,
    }
}

/// Opening of the reference `i = 6` iteration: `D_1' = K + 6L - E1 - E2 - E3`,
/// then `D_1' - E3`.
pub const CASE_I_LEVEL6_OPENING: [&str; 4] = ["E1", "E2", "E3", "E3"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ReferenceMatch {
    Exact,
    /// The trace ends at `D'` with `D = D' + excess`, `excess` effective, so
    /// `D` is effective as well.
    Dominated {
        excess: BTreeMap<String, i64>,
    },
    Differs {
        missing: BTreeMap<String, i64>,
        excess: BTreeMap<String, i64>,
    },
}

pub fn compare_to_reference(trace: &DescentTrace, reference: &ReferenceDivisor) -> ReferenceMatch {
    let target = reference.multiplicities();
    let mut missing = BTreeMap::new();
    let mut excess = BTreeMap::new();
    let names: std::collections::BTreeSet<&String> = target.keys().chain(trace.subtracted.keys()).collect();
    for n in names {
        let t = target.get(n).copied().unwrap_or(0);
        let s = trace.subtracted.get(n).copied().unwrap_or(0);
        if s > t {
            excess.insert(n.clone(), s - t);
        } else if s < t {
            missing.insert(n.clone(), t - s);
        }
    }
    match (missing.is_empty(), excess.is_empty()) {
        (true, true) => ReferenceMatch::Exact,
        (true, false) => ReferenceMatch::Dominated { excess },
        _ => ReferenceMatch::Differs { missing, excess },
    }
}

/// Script used as the stored certificate for `(case, level)`.
///
/// Case I: a script reaching the reference target exactly when one exists
/// (opening with `D_1'` at `i = 6`), otherwise one ending at a divisor the
/// reference target dominates. Case II: the greedy script.
pub fn derive_certificate_script(
    config: &SurfaceConfig,
    case: Case,
    level: u32,
) -> Result<Vec<String>, DescentFailure> {
    let Some(reference) = reference_divisor(case, level) else {
        return Ok(descent_search(config, level)?.script());
    };
    let target = reference.multiplicities();
    let prefix: &[&str] = if level == 6 { &CASE_I_LEVEL6_OPENING } else { &[] };
    if let Some(s) = search_descent_within(config, level, prefix, &target, |m| m == &target)? {
        return Ok(s);
    }
    if let Some(s) = search_descent_within(config, level, &[] as &[&str], &target, |m| m == &target)? {
        return Ok(s);
    }
    let sections: BTreeMap<&str, i64> = SECTIONS.iter().copied().zip(reference.sections).collect();
    let upper: BTreeMap<String, i64> = config
        .curves()
        .iter()
        .filter(|c| c.self_intersection < 0)
        .map(|c| {
            let t = target.get(&c.name).copied().unwrap_or(0);
            let slack = if sections.contains_key(c.name.as_str()) { 0 } else { 1 };
            (c.name.clone(), t + slack)
        })
        .collect();
    // Smallest total excess first, so the certificate stays close to the target.
    let excess = |m: &BTreeMap<String, i64>| -> Option<i64> {
        let mut total = 0;
        for (n, c) in m {
            let t = target.get(n).copied().unwrap_or(0);
            if *c < t {
                return None;
            }
            total += c - t;
        }
        target.keys().all(|n| m.contains_key(n)).then_some(total)
    };
    let slack_total: i64 = upper.values().sum::<i64>() - target.values().sum::<i64>();
    for k in 1..=slack_total {
        if let Some(s) = search_descent_within(config, level, &[] as &[&str], &upper, |m| excess(m) == Some(k))? {
            return Ok(s);
        }
    }
    Ok(descent_search(config, level)?.script())
}

/// Stored certificate scripts for one case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScriptFile {
    pub case: Case,
    pub scripts: Vec<LevelScript>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelScript {
    pub level: u32,
    pub script: Vec<String>,
}

impl ScriptFile {
    pub fn script(&self, level: u32) -> Option<&[String]> {
        self.scripts
            .iter()
            .find(|s| s.level == level)
            .map(|s| s.script.as_slice())
    }
}

pub fn derive_script_file(config: &SurfaceConfig, case: Case) -> Result<ScriptFile, DescentFailure> {
    let scripts = (MIN_LEVEL..=MAX_LEVEL)
        .map(|level| {
            Ok(LevelScript {
                level,
                script: derive_certificate_script(config, case, level)?,
            })
        })
        .collect::<Result<_, DescentFailure>>()?;
    Ok(ScriptFile { case, scripts })
}

/// `D·F` expected for every accepted trace: `12i - 6(2i + 1)`.
pub fn expected_fiber_degree(level: u32) -> BigRational {
    let i = i64::from(level);
    BigRational::from_integer(BigInt::from(12 * i - 6 * (2 * i + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{build_config_x, with_branch_l};

    fn prepared(case: Case) -> SurfaceConfig {
        with_branch_l(&build_config_x(case), case).unwrap()
    }

    #[test]
    fn greedy_succeeds_everywhere() {
        for case in Case::ALL {
            let x = prepared(case);
            for i in MIN_LEVEL..=MAX_LEVEL {
                let t = descent_search(&x, i).unwrap();
                assert_eq!(t.final_fiber_degree, "-6", "{case} {i}");
                assert_eq!(t.section_multiplicities.iter().sum::<i64>(), 2 * i as i64 + 1);
            }
        }
    }

    #[test]
    fn greedy_level_one_script() {
        let t = descent_search(&prepared(Case::I), 1).unwrap();
        assert_eq!(t.script(), ["B1", "E2", "B2", "E3", "B3", "C1", "C2", "E1"]);
    }

    #[test]
    fn rejections() {
        let x = prepared(Case::I);
        assert_eq!(
            descent_replay(&x, 6, &["A1"]),
            Err(DescentRejection::NonNegativePairing {
                step: 1,
                curve: "A1".into(),
                pairing: "0".into()
            })
        );
        assert_eq!(descent_replay(&x, 0, &["E1"]), Err(DescentRejection::InvalidLevel(0)));
        assert_eq!(descent_replay::<&str>(&x, 1, &[]), Err(DescentRejection::EmptyScript));
        assert!(matches!(
            descent_replay(&x, 1, &["F"]),
            Err(DescentRejection::NonNegativeCurve { step: 1, .. })
        ));
        assert!(matches!(
            descent_replay(&x, 1, &["Q"]),
            Err(DescentRejection::UnknownCurve { step: 1, .. })
        ));
        assert!(matches!(
            descent_replay(&x, 1, &["E1"]),
            Err(DescentRejection::NonNegativePairing { step: 1, .. })
        ));
        assert!(matches!(
            descent_replay(&x, 1, &["B1"]),
            Err(DescentRejection::FiberDegreeNonNegative(_))
        ));
    }

    #[test]
    fn opening_values_at_level_six() {
        let x = prepared(Case::I);
        let t = descent_replay(&x, 6, &["E1", "E2", "E3"]);
        // D_1' alone is not a complete certificate.
        assert!(matches!(t, Err(DescentRejection::FiberDegreeNonNegative(_))));
        let d = start_divisor(&x, 6);
        let values: Vec<String> = ["E1", "E2", "E3"]
            .iter()
            .map(|e| intersect(&x, &d, &Divisor::curve(&x, e).unwrap()).unwrap().to_string())
            .collect();
        assert_eq!(values, ["-5", "-11", "-11"]);
    }

    #[test]
    fn reference_level_four_is_not_reached_exactly() {
        let x = prepared(Case::I);
        let target = CASE_I_REFERENCE[3].multiplicities();
        let exact = search_descent_within(&x, 4, &[] as &[&str], &target, |m| m == &target).unwrap();
        assert_eq!(exact, None);
        let script = derive_certificate_script(&x, Case::I, 4).unwrap();
        let trace = descent_replay(&x, 4, &script).unwrap();
        match compare_to_reference(&trace, &CASE_I_REFERENCE[3]) {
            ReferenceMatch::Dominated { excess } => {
                assert_eq!(excess.values().sum::<i64>(), 2, "{excess:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reference_targets_reached_elsewhere() {
        let x = prepared(Case::I);
        for r in CASE_I_REFERENCE.iter().filter(|r| r.level != 4) {
            let script = derive_certificate_script(&x, Case::I, r.level).unwrap();
            let trace = descent_replay(&x, r.level, &script).unwrap();
            assert_eq!(
                compare_to_reference(&trace, r),
                ReferenceMatch::Exact,
                "level {}",
                r.level
            );
        }
        let six = derive_certificate_script(&x, Case::I, 6).unwrap();
        assert_eq!(six[..4], CASE_I_LEVEL6_OPENING);
    }
}
