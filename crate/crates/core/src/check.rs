//! Check definitions shared by all suites.
//!
//! A check builds its residuals through an [`OpBuilder`], so one definition
//! runs symbolically on the [`Engine`] and, as an expression tree, on the
//! Fock oracle.

use std::marker::PhantomData;
use std::time::Instant;

use rayon::prelude::*;

use crate::coefficients::Scalar;
use crate::fock_oracle::{tree_is_zero, Model, OracleBuilder, TreeVerdict};
use crate::ncalg::{Element, Engine, OpBuilder};
use crate::report::{CheckReport, Expect, OracleReport, Status};
use crate::Error;

/// Terms of a failed residual kept in the report.
const RESIDUAL_PREVIEW: usize = 24;

type BuildFn<S, B, D> = dyn Fn(&B, &D) -> Result<Vec<<B as OpBuilder<S>>::Op>, Error> + Send + Sync;

pub struct CheckDef<S: Scalar, B: OpBuilder<S>, D> {
    pub id: String,
    pub statement: String,
    pub informative: bool,
    pub expect: Expect,
    /// Names of the alternatives of an [`Expect::AnyZero`] check.
    pub labels: Vec<String>,
    build: Box<BuildFn<S, B, D>>,
    _scalar: PhantomData<fn() -> S>,
}

impl<S: Scalar, B: OpBuilder<S>, D> CheckDef<S, B, D> {
    fn new(id: String, statement: String, expect: Expect, build: Box<BuildFn<S, B, D>>) -> Self {
        CheckDef { id, statement, informative: false, expect, labels: Vec::new(), build, _scalar: PhantomData }
    }

    /// `build` returns a residual that must vanish.
    pub fn zero(
        id: impl Into<String>,
        statement: impl Into<String>,
        build: impl Fn(&B, &D) -> Result<B::Op, Error> + Send + Sync + 'static,
    ) -> Self {
        Self::new(id.into(), statement.into(), Expect::Zero, Box::new(move |b, d| Ok(vec![build(b, d)?])))
    }

    /// `build` returns an element that must not vanish.
    pub fn nonzero(
        id: impl Into<String>,
        statement: impl Into<String>,
        build: impl Fn(&B, &D) -> Result<B::Op, Error> + Send + Sync + 'static,
    ) -> Self {
        Self::new(id.into(), statement.into(), Expect::Nonzero, Box::new(move |b, d| Ok(vec![build(b, d)?])))
    }

    /// At least one of the labelled alternatives must vanish.
    pub fn any_zero(
        id: impl Into<String>,
        statement: impl Into<String>,
        labels: &[&str],
        build: impl Fn(&B, &D) -> Result<Vec<B::Op>, Error> + Send + Sync + 'static,
    ) -> Self {
        let mut c = Self::new(id.into(), statement.into(), Expect::AnyZero, Box::new(build));
        c.labels = labels.iter().map(|s| s.to_string()).collect();
        c
    }

    /// Reported but never gating.
    pub fn informative(mut self) -> Self {
        self.informative = true;
        self
    }

    pub fn build(&self, b: &B, d: &D) -> Result<Vec<B::Op>, Error> {
        (self.build)(b, d)
    }
}

fn verdict(expect: Expect, zero: &[bool]) -> bool {
    match expect {
        Expect::Zero => zero.iter().all(|&z| z),
        Expect::Nonzero => zero.iter().all(|&z| !z),
        Expect::AnyZero => zero.iter().any(|&z| z),
    }
}

fn ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e4).round() / 10.0
}

fn preview<S: Scalar>(e: &Element<S>) -> String {
    let terms = e.terms();
    let shown: Vec<String> = terms
        .iter()
        .take(RESIDUAL_PREVIEW)
        .map(|(w, c)| if w.is_identity() { format!("({c})") } else { format!("({c})*{w}") })
        .collect();
    let mut s = shown.join(" + ");
    if terms.len() > RESIDUAL_PREVIEW {
        s.push_str(&format!(" + ... ({} more terms)", terms.len() - RESIDUAL_PREVIEW));
    }
    s
}

/// Evaluate one check on the engine.
pub fn run_engine_check<S: Scalar, D>(engine: &Engine<S>, data: &D, def: &CheckDef<S, Engine<S>, D>) -> CheckReport {
    let t = Instant::now();
    let mut report = CheckReport {
        id: def.id.clone(),
        statement: def.statement.clone(),
        status: Status::Indeterminate,
        expect: def.expect,
        residual_terms: 0,
        informative: def.informative,
        detail: None,
        residual: None,
        oracle: None,
        elapsed_ms: 0.0,
    };
    match def.build(engine, data) {
        Ok(ops) => {
            let ops: Vec<Element<S>> = ops.iter().map(Element::normalize).collect();
            let zero: Vec<bool> = ops.iter().map(Element::is_zero).collect();
            let ok = verdict(def.expect, &zero);
            report.status = if ok { Status::Verified } else { Status::Failed };
            report.residual_terms = match def.expect {
                Expect::Zero => ops.iter().map(Element::len).sum(),
                Expect::Nonzero => ops.iter().map(Element::len).min().unwrap_or(0),
                Expect::AnyZero => ops.iter().map(Element::len).min().unwrap_or(0),
            };
            match def.expect {
                Expect::AnyZero => {
                    let sizes: Vec<String> =
                        def.labels.iter().zip(&ops).map(|(l, e)| format!("{l}: {} terms", e.len())).collect();
                    let hit: Vec<&str> = def.labels.iter().zip(&zero).filter(|(_, &z)| z).map(|(l, _)| l.as_str()).collect();
                    report.detail = Some(if hit.is_empty() {
                        format!("no alternative vanishes ({})", sizes.join(", "))
                    } else {
                        format!("holds for {} ({})", hit.join(", "), sizes.join(", "))
                    });
                }
                Expect::Nonzero => report.detail = Some(format!("nonzero with {} terms", report.residual_terms)),
                Expect::Zero => {}
            }
            if !ok && def.expect != Expect::Nonzero {
                report.residual = ops.iter().find(|e| !e.is_zero()).map(preview);
            }
        }
        // A missing fit is a failed identity, anything else an internal problem.
        Err(Error::NonCentral(msg)) => {
            report.status = Status::Failed;
            report.residual_terms = 1;
            report.detail = Some(msg);
        }
        Err(Error::Unfitted { residual_terms, reason }) => {
            report.status = Status::Failed;
            report.residual_terms = residual_terms.max(1);
            report.detail = Some(reason);
        }
        Err(e) => report.detail = Some(e.to_string()),
    }
    report.elapsed_ms = ms(t);
    report
}

/// Run `defs` on the engine, in parallel, keeping their order.
pub fn run_engine<S: Scalar, D: Sync>(engine: &Engine<S>, data: &D, defs: &[CheckDef<S, Engine<S>, D>]) -> Vec<CheckReport> {
    defs.par_iter().map(|d| run_engine_check(engine, data, d)).collect()
}

/// Oracle verdicts of one check at one model.
pub fn run_oracle_check<T: Scalar, D>(
    model: &Model<T>,
    builder: &OracleBuilder<T>,
    data: &D,
    def: &CheckDef<T, OracleBuilder<T>, D>,
    degree: Option<usize>,
) -> Result<Vec<TreeVerdict>, Error> {
    def.build(builder, data)?.iter().map(|n| tree_is_zero(n, model, degree)).collect()
}

/// Combined oracle evidence for one check across specialization points.
#[derive(Clone, Debug, Default)]
pub struct OracleEvidence {
    pub points: Vec<String>,
    pub verdicts: Vec<Vec<TreeVerdict>>,
    pub error: Option<String>,
    pub elapsed_ms: f64,
}

impl OracleEvidence {
    pub fn push(&mut self, point: Option<String>, result: Result<Vec<TreeVerdict>, Error>, started: Instant) {
        self.points.extend(point);
        match result {
            Ok(v) => self.verdicts.push(v),
            Err(e) => self.error = Some(e.to_string()),
        }
        self.elapsed_ms += ms(started);
    }

    pub fn extend(&mut self, other: OracleEvidence) {
        self.points.extend(other.points);
        self.verdicts.extend(other.verdicts);
        self.error = self.error.take().or(other.error);
        self.elapsed_ms += other.elapsed_ms;
    }

    /// Attach to the engine report, recording agreement with its verdict.
    pub fn attach(self, report: &mut CheckReport) {
        let n = self.verdicts.first().map_or(0, Vec::len);
        // A residual is zero for the oracle iff it vanishes at every point.
        let zero: Vec<bool> = (0..n).map(|i| self.verdicts.iter().all(|v| v[i].is_zero)).collect();
        let degree = self.verdicts.iter().flatten().map(|v| v.degree).max().unwrap_or(0);
        let basis_size = self.verdicts.iter().flatten().map(|v| v.basis_size).max().unwrap_or(0);
        let engine_ok = report.status == Status::Verified;
        let agrees = self.error.is_none()
            && report.status != Status::Indeterminate
            && !zero.is_empty()
            && verdict(report.expect, &zero) == engine_ok;
        report.oracle = Some(OracleReport {
            degree,
            basis_size,
            points: self.points,
            zero,
            agrees,
            error: self.error,
            elapsed_ms: self.elapsed_ms,
        });
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Seeds the sampling point of fits and the oracle specializations.
    pub seed: u64,
    pub oracle: bool,
    /// Oracle truncation degree; `None` applies the margin rule per check.
    pub oracle_degree: Option<usize>,
    /// Degree cap of central coefficients in closure fits.
    pub fit_cap: u32,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { seed: 0, oracle: false, oracle_degree: None, fit_cap: 2 }
    }
}

/// One oracle realization with the suite data built on it.
pub struct OraclePoint<T, D> {
    pub label: Option<String>,
    pub model: Model<T>,
    pub data: D,
}

/// Oracle evidence for every gating check at each point, `None` for
/// informative checks.
pub fn oracle_evidence<T: Scalar, D: Sync>(
    points: &[OraclePoint<T, D>],
    defs: &[CheckDef<T, OracleBuilder<T>, D>],
    degree: Option<usize>,
) -> Vec<Option<OracleEvidence>> {
    defs.par_iter()
        .map(|def| {
            if def.informative {
                return None;
            }
            let mut ev = OracleEvidence::default();
            for p in points {
                let t = Instant::now();
                let builder = OracleBuilder::new(&p.model);
                ev.push(p.label.clone(), run_oracle_check(&p.model, &builder, &p.data, def, degree), t);
                if ev.error.is_some() {
                    break;
                }
            }
            log::debug!("oracle {}: {:.1} ms", def.id, ev.elapsed_ms);
            Some(ev)
        })
        .collect()
}

/// Append the evidence of `more` check by check.
pub fn merge_evidence(into: &mut [Option<OracleEvidence>], more: Vec<Option<OracleEvidence>>) {
    for (a, b) in into.iter_mut().zip(more) {
        if let (Some(a), Some(b)) = (a, b) {
            a.extend(b);
        }
    }
}

pub fn attach_evidence(reports: &mut [CheckReport], evidence: Vec<Option<OracleEvidence>>) {
    debug_assert_eq!(reports.len(), evidence.len());
    for (r, e) in reports.iter_mut().zip(evidence) {
        if let Some(e) = e {
            e.attach(r);
        }
    }
}

/// Re-evaluate every gating check on the oracle at each point and attach
/// the evidence to the matching engine report.
pub fn cross_check<T: Scalar, D: Sync>(
    points: &[OraclePoint<T, D>],
    defs: &[CheckDef<T, OracleBuilder<T>, D>],
    reports: &mut [CheckReport],
    degree: Option<usize>,
) {
    attach_evidence(reports, oracle_evidence(points, defs, degree));
}

pub(crate) fn elapsed_ms(t: Instant) -> f64 {
    ms(t)
}
