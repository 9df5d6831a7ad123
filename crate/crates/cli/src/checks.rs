//! Pass/fail checks: each carries the measured value and the tolerance it
//! was compared against, so a stored report can be re-verified.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::report::{FORMAT, SECTIONS};
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Non-finite values serialize as `null` and read back as NaN, which fails.
    #[serde(deserialize_with = "nullable")]
    pub measured: f64,
    pub relation: Relation,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(id: impl Into<String>, measured: f64, relation: Relation, tolerance: f64) -> Self {
        let mut c = Self {
            id: id.into(),
            measured,
            relation,
            tolerance,
            passed: false,
        };
        c.passed = c.evaluate();
        c
    }

    pub fn at_most(id: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(id, measured, Relation::AtMost, tolerance)
    }

    pub fn at_least(id: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self::new(id, measured, Relation::AtLeast, tolerance)
    }

    /// NaN never passes.
    pub fn evaluate(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.tolerance,
            Relation::AtLeast => self.measured >= self.tolerance,
        }
    }

    pub fn line(&self) -> String {
        let op = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
        };
        format!(
            "{} {}: {:e} {op} {:e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.measured,
            self.tolerance
        )
    }
}

fn nullable<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

/// Re-evaluates every check of a stored report from its measured values and
/// tolerances; a report missing a section is incomplete.
pub fn verify_report(report: &Value) -> Result<Vec<Check>, CliError> {
    let object = report
        .as_object()
        .ok_or_else(|| CliError::Incomplete("not a JSON object".into()))?;
    let missing: Vec<&str> = SECTIONS.iter().copied().filter(|k| !object.contains_key(*k)).collect();
    if !missing.is_empty() {
        return Err(CliError::Incomplete(format!("missing sections: {}", missing.join(", "))));
    }
    if object["format"] != FORMAT {
        return Err(CliError::Incomplete(format!("unknown format {}", object["format"])));
    }
    let checks: Vec<Check> = serde_json::from_value(object["checks"].clone())
        .map_err(|e| CliError::Incomplete(format!("checks: {e}")))?;
    if checks.is_empty() {
        return Err(CliError::Incomplete("no checks".into()));
    }
    Ok(checks
        .into_iter()
        .map(|mut c| {
            c.passed = c.evaluate();
            c
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::at_most("a", 1.5, 1.0).passed);
        assert!(Check::at_least("a", 2.0, 1.8).passed);
        assert!(!Check::at_least("a", f64::NAN, 1.8).passed);
        assert!(Check::at_most("a", 0.5, 1.0).line().starts_with("PASS a:"));
    }

    #[test]
    fn incomplete_reports_are_rejected() {
        let v: Value = serde_json::json!({"format": FORMAT, "checks": []});
        assert!(matches!(verify_report(&v), Err(CliError::Incomplete(_))));
    }
}
