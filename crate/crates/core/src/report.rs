//! Certification reports and the JSON-lines record they serialize to.

use serde::Serialize;

use crate::config::Config;
use crate::error::Result;
use crate::scalar::Ball;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    CertifiedTrue,
    Inconclusive,
}

/// Outcome of checking one claim instance.
#[derive(Clone, Debug, PartialEq)]
pub struct GapReport {
    pub claim_id: String,
    pub params: Vec<(String, i64)>,
    pub status: Status,
    /// Attaining pair, named by lineage descriptors.
    pub witness: Option<(String, String)>,
    /// Slack of the strict inequality; positive when certified.
    pub margin: Ball,
    pub precision_bits: u32,
    pub notes: Vec<String>,
}

impl GapReport {
    /// A report whose status follows from `checks` and the sign of `margin`.
    pub fn from_checks(
        claim_id: &str,
        params: &[(&str, i64)],
        margin: Ball,
        checks: &[(bool, &str)],
    ) -> Self {
        let mut notes = Vec::new();
        let mut ok = margin.is_positive();
        if !ok {
            notes.push("margin not certified positive".to_string());
        }
        for (passed, what) in checks {
            if !passed {
                ok = false;
                notes.push(format!("failed: {what}"));
            }
        }
        Self {
            claim_id: claim_id.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            status: if ok {
                Status::CertifiedTrue
            } else {
                Status::Inconclusive
            },
            witness: None,
            precision_bits: margin.precision(),
            margin,
            notes,
        }
    }

    pub fn with_witness(mut self, lo: impl ToString, hi: impl ToString) -> Self {
        self.witness = Some((lo.to_string(), hi.to_string()));
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn is_certified(&self) -> bool {
        self.status == Status::CertifiedTrue
    }

    pub fn param(&self, key: &str) -> Option<i64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    pub fn to_record(&self) -> ReportRecord {
        ReportRecord {
            claim_id: self.claim_id.clone(),
            params: self
                .params
                .iter()
                .map(|(k, v)| (k.clone(), serde_json::Value::from(*v)))
                .collect(),
            status: self.status,
            witness: self.witness.clone().map(|(a, b)| [a, b]),
            margin_midpoint: self.margin.mid().to_scientific(25),
            margin_radius: self.margin.rad_decimal(),
            precision_bits: self.precision_bits,
            notes: self.notes.clone(),
        }
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("report serializes")
    }
}

/// Serialized form of a [`GapReport`].
#[derive(Clone, Debug, Serialize)]
pub struct ReportRecord {
    pub claim_id: String,
    pub params: serde_json::Map<String, serde_json::Value>,
    pub status: Status,
    pub witness: Option<[String; 2]>,
    pub margin_midpoint: String,
    pub margin_radius: String,
    pub precision_bits: u32,
    pub notes: Vec<String>,
}

/// Runs `check` at increasing precision until it certifies or the cap is
/// reached; returns the last report.
pub fn escalate<F>(cfg: &Config, mut check: F) -> Result<GapReport>
where
    F: FnMut(&Config) -> Result<GapReport>,
{
    let mut last = None;
    for bits in cfg.precision_ladder() {
        let c = Config {
            precision_bits: bits,
            ..*cfg
        };
        let report = check(&c)?.with_precision(bits);
        if report.is_certified() {
            return Ok(report);
        }
        last = Some(report);
    }
    Ok(last.expect("precision ladder is never empty"))
}
