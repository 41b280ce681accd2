//! Relation reports and their line format.

use std::fmt;

/// One checked identity: name, the label tuple it was evaluated at, and the
/// max-norm residual of LHS − RHS.
#[derive(Clone, Debug, PartialEq)]
pub struct RelationReport {
    pub relation: String,
    pub labels: Vec<String>,
    pub residual: f64,
    pub pass: bool,
}

impl RelationReport {
    pub fn new(relation: impl Into<String>, labels: Vec<String>, residual: f64, tol: f64) -> Self {
        // NaN never passes.
        let pass = residual < tol;
        RelationReport {
            relation: relation.into(),
            labels,
            residual,
            pass,
        }
    }

    /// A pass/fail assertion without a numeric residual (0 or 1).
    pub fn flag(relation: impl Into<String>, labels: Vec<String>, ok: bool) -> Self {
        RelationReport {
            relation: relation.into(),
            labels,
            residual: if ok { 0.0 } else { 1.0 },
            pass: ok,
        }
    }
}

/// Residual in scientific notation with three significant digits.
pub fn sci3(x: f64) -> String {
    format!("{:.2e}", x)
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}\t{}\t{}\t{}",
            self.relation,
            self.labels.join(","),
            sci3(self.residual),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

pub fn all_pass(reports: &[RelationReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let r = RelationReport::new("ess", vec!["0".into(), "t".into()], 1.234567e-12, 1e-9);
        assert_eq!(r.to_string(), "ess\t0,t\t1.23e-12\tPASS");
        let r = RelationReport::new("ess", vec![], f64::NAN, 1e-9);
        assert!(!r.pass);
    }

    #[test]
    fn pass_iff_below_tol() {
        assert!(!RelationReport::new("x", vec![], 1e-9, 1e-9).pass);
        assert!(RelationReport::new("x", vec![], 0.0, 1e-9).pass);
    }
}
