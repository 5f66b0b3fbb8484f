use serde::{Deserialize, Serialize};

use crate::surface::Case;

static EMBEDDED: &str = include_str!("../../../../data/claim_registry.json");

/// Which computation decides a claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    Asserted,
    YAdjunction,
    YEuler,
    YFibers,
    YOrder7Cyclic,
    YOrder7Det,
    YOrder7Orthogonal,
    YRElementary,
    YROverlattice,
    YRSmith,
    YRankPerp,
    FeasibilityScan,
    XAdjunction,
    XBranch,
    XDescent,
    XDiscriminant,
    XEuler,
    XFeasibility,
    XFiberTypes,
    XFibers,
    XGlue,
    XGlueIsotropy,
    XLTable,
    XRotation,
    ZBmy,
    ZC1Squared,
    ZC2,
    ZChi,
    ZFakePlane,
    ZFixedPoints,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClaimSpec {
    pub id: String,
    pub topic: String,
    pub statement: String,
    pub check: Check,
    pub expected: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<Case>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
}

impl ClaimSpec {
    /// Group shown as a markdown section: the id prefix before the first dot.
    pub fn group(&self) -> &str {
        claim_group(&self.id)
    }
}

pub fn claim_group(id: &str) -> &str {
    id.split('.').next().unwrap_or(id)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registry {
    pub registry_version: String,
    pub claims: Vec<ClaimSpec>,
}

impl Registry {
    pub fn embedded() -> Self {
        serde_json::from_str(EMBEDDED).expect("embedded claim registry is well-formed")
    }

    /// Claims applicable when only `cases` are selected.
    pub fn select(&self, cases: &[Case]) -> Vec<&ClaimSpec> {
        self.claims
            .iter()
            .filter(|c| c.case.is_none_or(|k| cases.contains(&k)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn embedded_registry_is_sorted_and_unique() {
        let r = Registry::embedded();
        let ids: Vec<&str> = r.claims.iter().map(|c| c.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        assert_eq!(ids, sorted);
        assert_eq!(ids.iter().collect::<HashSet<_>>().len(), ids.len());
        assert!(ids.len() >= 40);
    }

    #[test]
    fn descent_claims_carry_levels() {
        let r = Registry::embedded();
        for c in r.claims.iter().filter(|c| c.check == Check::XDescent) {
            assert!(c.case.is_some() && c.level.is_some(), "{}", c.id);
        }
        assert_eq!(r.claims.iter().filter(|c| c.check == Check::XDescent).count(), 12);
    }

    #[test]
    fn selection_by_case() {
        let r = Registry::embedded();
        let only_one = r.select(&[Case::I]);
        assert!(only_one.iter().all(|c| c.case != Some(Case::II)));
        assert_eq!(r.select(&Case::ALL).len(), r.claims.len());
    }
}
