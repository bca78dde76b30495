//! Serializable verification reports.
//!
//! Every field except those ending in `_ms` is a deterministic function of
//! the run configuration and seed.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ncalg::Family;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Verified,
    Failed,
    Indeterminate,
}

/// What a check asserts about its residuals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    /// Every residual vanishes.
    Zero,
    /// The (single) tested element is not zero; `residual_terms` is its size.
    Nonzero,
    /// At least one of several alternatives vanishes.
    AnyZero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Truncation degree of the polynomial basis.
    pub degree: usize,
    pub basis_size: usize,
    /// Specialization points (`v0`) used; empty outside the q-family.
    pub points: Vec<String>,
    /// Oracle zero verdict per residual.
    pub zero: Vec<bool>,
    pub agrees: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub statement: String,
    pub status: Status,
    pub expect: Expect,
    pub residual_terms: usize,
    pub informative: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Leading terms of the first nonvanishing residual of a failed check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub elapsed_ms: f64,
}

impl CheckReport {
    pub fn is_gating(&self) -> bool {
        !self.informative
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Context {
    pub family: Family,
    pub modes: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_cap: Option<u32>,
    pub oracle: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_degree: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub verified: usize,
    pub failed: usize,
    pub indeterminate: usize,
    pub gating_failed: usize,
    pub oracle_checked: usize,
    pub oracle_disagreements: usize,
    /// All gating checks verified.
    pub pass: bool,
}

impl Summary {
    pub fn of(checks: &[CheckReport]) -> Self {
        let count = |s: Status| checks.iter().filter(|c| c.status == s).count();
        let gating_failed = checks.iter().filter(|c| c.is_gating() && c.status != Status::Verified).count();
        let oracle: Vec<&OracleReport> = checks.iter().filter_map(|c| c.oracle.as_ref()).collect();
        Summary {
            checks: checks.len(),
            verified: count(Status::Verified),
            failed: count(Status::Failed),
            indeterminate: count(Status::Indeterminate),
            gating_failed,
            oracle_checked: oracle.len(),
            oracle_disagreements: oracle.iter().filter(|o| !o.agrees).count(),
            pass: gating_failed == 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub context: Context,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    /// Construction of the shared operators and fits.
    pub setup_ms: f64,
}

impl SuiteReport {
    /// Checks keep their definition order.
    pub fn new(suite: &str, context: Context, checks: Vec<CheckReport>, setup_ms: f64) -> Self {
        let summary = Summary::of(&checks);
        SuiteReport { suite: suite.into(), context, checks, summary, setup_ms }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    pub fn check(&self, id: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.id == id)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Engine {
    pub name: String,
    pub version: String,
}

impl Default for Engine {
    fn default() -> Self {
        Engine { name: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Top-level document: header plus one report per suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub engine: Engine,
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(seed: u64, suites: Vec<SuiteReport>) -> Self {
        let pass = suites.iter().all(SuiteReport::passed);
        RunReport { schema_version: SCHEMA_VERSION, engine: Engine::default(), seed, suites, pass }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let c = &s.context;
            let _ = writeln!(out, "suite {} ({:?}, {} modes, seed {})", s.suite, c.family, c.modes, c.seed);
            for ch in &s.checks {
                let tag = if ch.informative { " [informative]" } else { "" };
                let status = match ch.status {
                    Status::Verified => "ok",
                    Status::Failed => "FAIL",
                    Status::Indeterminate => "??",
                };
                let _ = write!(out, "  {status:<4} {:<28} {:>8.1} ms  residual {:>6}{tag}", ch.id, ch.elapsed_ms, ch.residual_terms);
                if let Some(o) = &ch.oracle {
                    let verdict = if o.agrees { "agrees" } else { "DISAGREES" };
                    let _ = write!(out, "  oracle {verdict} (D = {}, {} states)", o.degree, o.basis_size);
                }
                let _ = writeln!(out);
                let _ = writeln!(out, "       {}", ch.statement);
                if let Some(d) = &ch.detail {
                    let _ = writeln!(out, "       {d}");
                }
            }
            let m = &s.summary;
            let _ = writeln!(
                out,
                "  {} checks: {} verified, {} failed, {} indeterminate; gating failures {}; {}",
                m.checks,
                m.verified,
                m.failed,
                m.indeterminate,
                m.gating_failed,
                if m.pass { "PASS" } else { "FAIL" }
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(id: &str, status: Status, informative: bool) -> CheckReport {
        CheckReport {
            id: id.into(),
            statement: "x = 0".into(),
            status,
            expect: Expect::Zero,
            residual_terms: usize::from(status != Status::Verified),
            informative,
            detail: None,
            residual: None,
            oracle: None,
            elapsed_ms: 1.5,
        }
    }

    #[test]
    fn informative_failures_do_not_gate() {
        let ctx = Context { family: Family::Weyl, modes: 4, seed: 7, fit_cap: None, oracle: false, oracle_degree: None };
        let s = SuiteReport::new(
            "t",
            ctx,
            vec![check("b", Status::Verified, false), check("a", Status::Failed, true)],
            0.0,
        );
        assert_eq!(s.checks[0].id, "b");
        assert!(s.passed());
        let r = RunReport::new(7, vec![s]);
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(r.to_text().contains("[informative]"));
    }
}
