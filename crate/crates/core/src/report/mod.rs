//! Claim registry, its evaluation against a set of configurations, and the
//! JSON / markdown certificate report.

mod pipeline;
mod registry;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use pipeline::{run_claims, ConfigSet, LoadError};
pub use registry::{claim_group, Check, ClaimSpec, Registry};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClaimStatus {
    Verified,
    AssertedUnverified,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub topic: String,
    pub statement: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim_id: String,
    pub anchor: Anchor,
    pub status: ClaimStatus,
    pub expected: String,
    pub computed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<serde_json::Value>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub verified: usize,
    pub asserted_unverified: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub generated_at: String,
    pub selection: String,
    pub summary: Summary,
    pub claims: Vec<ClaimReport>,
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown report format {0:?}: expected json or md")]
    UnknownFormat(String),
    #[error("malformed report: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, ReportError> {
        match s {
            "json" => Ok(Format::Json),
            "md" | "markdown" => Ok(Format::Markdown),
            other => Err(ReportError::UnknownFormat(other.to_owned())),
        }
    }
}

impl Report {
    /// Sorts `claims` by id and tallies the summary.
    pub fn new(selection: &str, mut claims: Vec<ClaimReport>, generated_at: String) -> Self {
        claims.sort_by(|a, b| a.claim_id.cmp(&b.claim_id));
        let mut summary = Summary {
            total: claims.len(),
            ..Summary::default()
        };
        for c in &claims {
            match c.status {
                ClaimStatus::Verified => summary.verified += 1,
                ClaimStatus::AssertedUnverified => summary.asserted_unverified += 1,
                ClaimStatus::Failed => summary.failed += 1,
            }
        }
        Self {
            schema_version: SCHEMA_VERSION.to_owned(),
            generated_at,
            selection: selection.to_owned(),
            summary,
            claims,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.claim_id == id)
    }

    pub fn from_json(s: &str) -> Result<Self, ReportError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(out, "# Verification report\n");
        let _ = writeln!(out, "- schema version: {}", self.schema_version);
        let _ = writeln!(out, "- generated at: {}", self.generated_at);
        let _ = writeln!(out, "- selection: {}", self.selection);
        let _ = writeln!(
            out,
            "- claims: {} total, {} verified, {} asserted-unverified, {} failed",
            s.total, s.verified, s.asserted_unverified, s.failed
        );
        let mut group: Option<&str> = None;
        for c in &self.claims {
            let g = claim_group(&c.claim_id);
            if group != Some(g) {
                group = Some(g);
                let _ = writeln!(out, "\n## {}\n", group_title(g));
                let _ = writeln!(out, "| Claim | Status | Expected | Computed | Statement |");
                let _ = writeln!(out, "|---|---|---|---|---|");
            }
            let status = match c.status {
                ClaimStatus::Verified => "verified",
                ClaimStatus::AssertedUnverified => "asserted-unverified",
                ClaimStatus::Failed => "**failed**",
            };
            let _ = writeln!(
                out,
                "| `{}` | {} | {} | {} | {} |",
                c.claim_id,
                status,
                cell(&c.expected),
                cell(&c.computed),
                cell(&c.anchor.statement)
            );
        }
        out
    }
}

fn group_title(group: &str) -> String {
    match group {
        "Y" => "Y: the Dolgachev surface".to_owned(),
        "X" => "X: the elliptic surface with an I9 fiber".to_owned(),
        "Z" => "Z: the degree-7 cyclic cover".to_owned(),
        other => other.to_owned(),
    }
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => report.to_json().into_bytes(),
        Format::Markdown => report.to_markdown().into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn claim(id: &str, status: ClaimStatus) -> ClaimReport {
        ClaimReport {
            claim_id: id.into(),
            anchor: Anchor {
                topic: "t".into(),
                statement: "a | b".into(),
            },
            status,
            expected: "1".into(),
            computed: "1".into(),
            trace: None,
        }
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("all", vec![], "now".into());
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.summary.total, 0);
        assert!(r.to_markdown().contains("0 total"));
    }

    #[test]
    fn sorting_summary_and_markdown() {
        let r = Report::new(
            "I",
            vec![claim("Z.c2", ClaimStatus::Verified), claim("X.a", ClaimStatus::Failed)],
            "now".into(),
        );
        assert_eq!(r.claims[0].claim_id, "X.a");
        assert!(r.has_failures());
        let md = r.to_markdown();
        assert!(md.find("## X").unwrap() < md.find("## Z").unwrap());
        assert!(md.contains("a \\| b"));
    }

    #[test]
    fn format_parsing() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!(matches!("xml".parse::<Format>(), Err(ReportError::UnknownFormat(_))));
    }
}
