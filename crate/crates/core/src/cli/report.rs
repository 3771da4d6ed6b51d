//! JSON report envelope shared by all subcommands.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::BRACKET_PREFACTOR;
use crate::field::ASYMPTOTIC_WINDOW;
use crate::phases::{PM_Q_MIN_ASPECT, PM_Q_RATIO_COEFFICIENT, PM_Q_SUPERPOSITION_FACTOR};
use crate::units::CONSTANTS_VERSION;

pub const SCHEMA_VERSION: u32 = 1;

const TOP_LEVEL: [&str; 6] = [
    "schema_version",
    "constants_version",
    "conventions",
    "inputs",
    "results",
    "diagnostics",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub pm_q_superposition_factor: f64,
    pub pm_q_ratio_coefficient: f64,
    pub bracket_prefactor: f64,
    pub asymptotic_window: f64,
    pub pm_q_min_aspect: f64,
    pub threshold: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            pm_q_superposition_factor: PM_Q_SUPERPOSITION_FACTOR,
            pm_q_ratio_coefficient: PM_Q_RATIO_COEFFICIENT,
            bracket_prefactor: BRACKET_PREFACTOR,
            asymptotic_window: ASYMPTOTIC_WINDOW,
            pm_q_min_aspect: PM_Q_MIN_ASPECT,
            threshold: "|delta_phi| = 2 pi epsilon".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub constants_version: String,
    pub conventions: Conventions,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Value,
}

impl Report {
    pub fn new(inputs: Value, results: Value, diagnostics: Value) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            constants_version: CONSTANTS_VERSION.into(),
            conventions: Conventions::default(),
            inputs,
            results,
            diagnostics,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are finite JSON")
    }
}

/// Parses a report and checks it against the schema version it declares.
pub fn parse_report(text: &str) -> Result<Report, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("not JSON: {e}"))?;
    validate(&v)?;
    serde_json::from_value(v).map_err(|e| format!("schema mismatch: {e}"))
}

pub fn validate(v: &Value) -> Result<(), String> {
    let obj = v.as_object().ok_or("report must be a JSON object")?;
    for key in TOP_LEVEL {
        if !obj.contains_key(key) {
            return Err(format!("missing top-level key `{key}`"));
        }
    }
    if let Some(extra) = obj.keys().find(|k| !TOP_LEVEL.contains(&k.as_str())) {
        return Err(format!("unexpected top-level key `{extra}`"));
    }
    match obj["schema_version"].as_u64() {
        Some(n) if n == u64::from(SCHEMA_VERSION) => {}
        other => return Err(format!("unsupported schema_version {other:?}")),
    }
    match obj["constants_version"].as_str() {
        Some(CONSTANTS_VERSION) => {}
        other => return Err(format!("constants_version {other:?} does not match {CONSTANTS_VERSION}")),
    }
    if !obj["results"].is_object() && !obj["results"].is_array() {
        return Err("`results` must be an object or array".into());
    }
    Ok(())
}

/// Replaces non-finite numbers, which JSON cannot carry, with `null`.
pub fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        Value::from(x)
    } else {
        Value::Null
    }
}
