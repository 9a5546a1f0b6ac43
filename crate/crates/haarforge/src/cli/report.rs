use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, Format};
use crate::statlab::MomentRow;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Artifact version, `v<crate version>` with an optional build revision suffix.
pub fn artifact_version() -> String {
    match option_env!("HAARFORGE_BUILD_REV") {
        Some(rev) => format!("v{}-g{rev}", env!("CARGO_PKG_VERSION")),
        None => format!("v{}", env!("CARGO_PKG_VERSION")),
    }
}

/// Where a pass/fail threshold comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Stated by the underlying theory.
    Paper,
    /// Frozen from a recorded pilot run.
    Pilot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub provenance: Provenance,
}

impl Check {
    /// Passes when `value <= threshold`.
    pub fn at_most(
        name: impl Into<String>,
        value: f64,
        threshold: f64,
        provenance: Provenance,
    ) -> Self {
        Self {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
            provenance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub version: String,
    pub config: ExperimentConfig,
    pub results: Value,
    pub checks: Vec<Check>,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Per-`p` rows of the primary moment table, if the command produced one.
    pub fn moment_rows(&self) -> Option<Vec<MomentRow>> {
        let rows = self.results.get("moments")?.get("rows")?;
        serde_json::from_value(rows.clone()).ok()
    }
}

/// Structural validation of a serialized report; every check must carry a
/// threshold and a `paper` or `pilot` provenance tag.
pub fn validate_report(doc: &Value) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidConfig(format!("report schema: {m}")));
    let Some(obj) = doc.as_object() else {
        return bad("not an object");
    };
    match obj.get("schema_version").and_then(Value::as_u64) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => return bad(&format!("unsupported schema_version {v}")),
        None => return bad("missing schema_version"),
    }
    for key in [
        "version",
        "config",
        "results",
        "checks",
        "wall_clock_seconds",
    ] {
        if !obj.contains_key(key) {
            return bad(&format!("missing {key}"));
        }
    }
    if !obj["results"].is_object() {
        return bad("results must be an object");
    }
    let Some(checks) = obj["checks"].as_array() else {
        return bad("checks must be an array");
    };
    for (i, c) in checks.iter().enumerate() {
        if c.get("name").and_then(Value::as_str).is_none()
            || c.get("passed").and_then(Value::as_bool).is_none()
        {
            return bad(&format!("check {i} lacks name or passed"));
        }
        if c.get("threshold").and_then(Value::as_f64).is_none() {
            return bad(&format!("check {i} has no threshold"));
        }
        match c.get("provenance").and_then(Value::as_str) {
            Some("paper" | "pilot") => {}
            _ => return bad(&format!("check {i} has an untagged threshold")),
        }
    }
    Ok(())
}

/// CSV with columns `p, mean_re, mean_im, stderr, reference`.
pub fn to_csv(rows: &[MomentRow]) -> String {
    let mut s = String::from("p,mean_re,mean_im,stderr,reference\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.p, r.mean_re, r.mean_im, r.stderr, r.reference
        ));
    }
    s
}

/// Serialize `report` in `format` to `out`.
pub fn emit(report: &ExperimentReport, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let rows = report.moment_rows().ok_or_else(|| {
                Error::Unsupported("csv output needs a per-p moment table".into())
            })?;
            out.write_all(to_csv(&rows).as_bytes())?;
        }
    }
    Ok(())
}
