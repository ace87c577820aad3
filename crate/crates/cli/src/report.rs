//! Versioned JSON reports. Every report carries a certification level so
//! truncation experiments can never be mistaken for exact statements.

use serde::Serialize;
use stb_core::topology::homology::HomologyReport;

pub const REPORT_SCHEMA: &str = "stb.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certification {
    Exact,
    Homological,
    ExperimentalTruncation,
}

impl Certification {
    pub fn label(&self) -> &'static str {
        match self {
            Certification::Exact => "exact",
            Certification::Homological => "homological",
            Certification::ExperimentalTruncation => "experimental-truncation",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub params: serde_json::Value,
    pub results: serde_json::Value,
    pub certification_level: Certification,
    pub passed: bool,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(
        command: &str,
        params: serde_json::Value,
        results: serde_json::Value,
        certification_level: Certification,
        passed: bool,
    ) -> Report {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            params,
            results,
            certification_level,
            passed,
            timing_ms: 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Canonical form with the timing field redacted: this is the payload
    /// the determinism and cache-transparency guarantees apply to.
    pub fn canonical_without_timing(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        if let Some(obj) = value.as_object_mut() {
            obj.remove("timing_ms");
        }
        serde_json::to_string(&value).expect("value serializes")
    }
}

/// Homology tables as JSON: betti per degree, torsion coefficients as
/// decimal strings.
pub fn homology_json(h: &HomologyReport) -> serde_json::Value {
    let betti: serde_json::Map<String, serde_json::Value> = h
        .betti
        .iter()
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    let torsion: serde_json::Map<String, serde_json::Value> = h
        .torsion
        .iter()
        .map(|(k, t)| {
            (
                k.to_string(),
                serde_json::json!(t.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            )
        })
        .collect();
    serde_json::json!({ "betti": betti, "torsion": torsion })
}
