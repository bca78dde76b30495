//! Acceptance harness: one pass/fail line per criterion.
//!
//! Criteria whose failure is known and analysed are listed in
//! [`EXPECTED_FAIL`]; the harness exits nonzero only when an outcome differs
//! from its expectation. `NCVERIFY_CRITERIA=1,6` restricts the run.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use ncverify::check::{run_engine_check, SuiteOptions};
use ncverify::cli::{self, Format, RunConfig, SuiteName};
use ncverify::ncalg::{Algebra, Engine, Family};
use ncverify::report::{CheckReport, Expect, Status, SuiteReport};
use ncverify::suites_bi_q::{run_aw_suite, run_bannai_ito_suite, run_qhahn_suite};
use ncverify::suites_classical::{racah_checks, racah_data, run_hahn_suite};
use serde_json::Value;

/// Criteria that fail on the printed identities, with the failing checks.
const EXPECTED_FAIL: [(u8, &str); 3] = [
    (2, "hahn.e.delta2"),
    (3, "bi.rel.{1,2,3}, bi.pair.{1234,3456,1256}, bi.comm.K{1,2,3}.Gamma123"),
    (4, "aw.serre.{2..5}.{1,2}"),
];

const FAMILIES: [(Family, usize); 3] = [(Family::Weyl, 3), (Family::CliffDiff, 4), (Family::QOsc, 3)];

type Criterion = (u8, &'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn exact(c: &CheckReport) -> bool {
    c.status == Status::Verified && (c.expect != Expect::Zero || c.residual_terms == 0)
}

fn failing<'a>(checks: impl IntoIterator<Item = &'a CheckReport>) -> Vec<&'a str> {
    checks.into_iter().filter(|c| !exact(c)).map(|c| c.id.as_str()).collect()
}

fn gating<'a>(s: &'a SuiteReport, prefixes: &[&str]) -> Vec<&'a CheckReport> {
    s.checks.iter().filter(|c| c.is_gating() && prefixes.iter().any(|p| c.id.starts_with(p))).collect()
}

fn summary(ids: &[&str]) -> String {
    if ids.is_empty() {
        "none".into()
    } else {
        ids.join(", ")
    }
}

fn racah() -> Outcome {
    let t = Instant::now();
    let engine = Engine::new(Algebra::weyl(6));
    let data = racah_data(&engine).expect("racah operators");
    let mut reports = Vec::new();
    let mut heaviest = (0u64, String::new());
    for def in racah_checks() {
        let before = engine.algebra().monomial_products();
        let r = run_engine_check(&engine, &data, &def);
        let n = engine.algebra().monomial_products() - before;
        if n > heaviest.0 {
            heaviest = (n, r.id.clone());
        }
        reports.push(r);
    }
    let secs = t.elapsed().as_secs_f64();
    let bad = failing(&reports);
    Outcome {
        pass: bad.is_empty() && secs < 60.0 && heaviest.0 < 1_000_000,
        detail: format!(
            "{}/{} exact in {secs:.1} s; heaviest {} with {} monomial products; failing: {}",
            reports.len() - bad.len(),
            reports.len(),
            heaviest.1,
            heaviest.0,
            summary(&bad)
        ),
    }
}

fn timed(run: impl FnOnce() -> SuiteReport) -> (SuiteReport, f64) {
    let t = Instant::now();
    let s = run();
    (s, t.elapsed().as_secs_f64())
}

fn hahn() -> Outcome {
    let (s, secs) = timed(|| run_hahn_suite(&SuiteOptions::default()).expect("hahn suite"));
    let checks = gating(&s, &["hahn."]);
    let bad = failing(checks.iter().copied());
    Outcome {
        pass: bad.is_empty() && secs < 10.0,
        detail: format!("{}/{} exact in {secs:.1} s; failing: {}", checks.len() - bad.len(), checks.len(), summary(&bad)),
    }
}

fn bannai_ito() -> Outcome {
    let (s, secs) = timed(|| run_bannai_ito_suite(&SuiteOptions::default()).expect("bannai-ito suite"));
    let checks = gating(&s, &["bi.rel.", "bi.grade.", "bi.pair.", "bi.comm."]);
    let bad = failing(checks.iter().copied());
    let signs: Vec<&CheckReport> = s.checks.iter().filter(|c| c.id.ends_with(".sign")).collect();
    let signs_ok = !signs.is_empty() && signs.iter().all(|c| c.status == Status::Verified);
    let sign = signs.first().and_then(|c| c.detail.clone()).unwrap_or_default();
    Outcome {
        pass: bad.is_empty() && signs_ok && secs < 120.0,
        detail: format!(
            "{}/{} exact in {secs:.1} s; osp sign on {} subsets: {sign}; failing: {}",
            checks.len() - bad.len(),
            checks.len(),
            signs.len(),
            summary(&bad)
        ),
    }
}

fn askey_wilson() -> Outcome {
    let (s, secs) = timed(|| run_aw_suite(&SuiteOptions { fit_cap: 2, ..SuiteOptions::default() }).expect("aw suite"));
    let checks = gating(&s, &["aw.uq.", "aw.serre.", "aw.howe.", "aw.comm.", "aw.closure."]);
    let bad = failing(checks.iter().copied());
    let closures: Vec<&CheckReport> = s.checks.iter().filter(|c| c.id.starts_with("aw.closure.")).collect();
    let fitted = closures.len() == 3 && closures.iter().all(|c| exact(c) && c.detail.as_deref().is_some_and(|d| d.contains("(degree ")));
    Outcome {
        pass: bad.is_empty() && fitted && secs < 600.0,
        detail: format!(
            "{}/{} exact in {secs:.1} s; closure fit at degree <= 2: {}; failing: {}",
            checks.len() - bad.len(),
            checks.len(),
            if fitted { "exact" } else { "not found" },
            summary(&bad)
        ),
    }
}

fn q_hahn() -> Outcome {
    let (s, secs) = timed(|| run_qhahn_suite(&SuiteOptions::default()).expect("qhahn suite"));
    let comm = gating(&s, &["qhahn.comm."]);
    let bad = failing(comm.iter().copied());
    let closure: Vec<String> = s
        .checks
        .iter()
        .filter(|c| c.id.starts_with("qhahn.closure."))
        .map(|c| format!("{} {:?} ({} residual terms)", c.id, c.status, c.residual_terms))
        .collect();
    let reported = closure.len() == 2 && s.checks.iter().filter(|c| c.id.starts_with("qhahn.closure.")).all(|c| c.informative);
    Outcome {
        pass: comm.len() == 4 && bad.is_empty() && reported,
        detail: format!(
            "{}/4 commutants exact in {secs:.1} s; informative closure: {}",
            comm.len() - bad.len(),
            if closure.is_empty() { "missing".into() } else { closure.join(", ") }
        ),
    }
}

fn properties() -> Outcome {
    let mut errors = Vec::new();
    for (f, modes) in FAMILIES {
        if let Err(e) = common::run_confluence(f, modes, 1000) {
            errors.push(format!("confluence {f:?}: {e}"));
        }
        if let Err(e) = common::run_associativity(f, modes, 500) {
            errors.push(format!("associativity {f:?}: {e}"));
        }
    }
    if let Err(e) = common::run_specialization(3, 200, 3) {
        errors.push(format!("specialization: {e}"));
    }
    Outcome {
        pass: errors.is_empty(),
        detail: if errors.is_empty() {
            "confluence 1000 words and associativity 500 triples per family, specialization 200 pairs at 3 points".into()
        } else {
            errors.join("; ")
        },
    }
}

fn oracle() -> Outcome {
    let opts = SuiteOptions { oracle: true, ..SuiteOptions::default() };
    let mut parts = Vec::new();
    let mut pass = true;
    for suite in SuiteName::EACH {
        let s = cli::run(&RunConfig {
            suites: vec![suite],
            options: opts.clone(),
            format: Format::Json,
            out: None,
            jobs: None,
        })
        .expect("suite runs")
        .suites
        .remove(0);
        let gating: Vec<&CheckReport> = s.checks.iter().filter(|c| c.is_gating()).collect();
        let agree = gating.iter().filter(|c| c.oracle.as_ref().is_some_and(|o| o.agrees)).count();
        pass &= agree == gating.len();
        parts.push(format!("{} {agree}/{}", s.suite, gating.len()));
    }
    let mut errors = Vec::new();
    for (f, modes) in FAMILIES {
        if let Err(e) = common::run_homomorphism(f, modes, 200) {
            errors.push(format!("homomorphism {f:?}: {e}"));
        }
    }
    pass &= errors.is_empty();
    Outcome {
        pass,
        detail: format!(
            "oracle agrees on gating checks: {}; homomorphism on 200 pairs per family: {}",
            parts.join(", "),
            if errors.is_empty() { "holds".into() } else { errors.join("; ") }
        ),
    }
}

/// Drop every `*_ms` field.
fn strip_timing(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.retain(|k, _| !k.ends_with("_ms"));
            m.values_mut().for_each(strip_timing);
        }
        Value::Array(xs) => xs.iter_mut().for_each(strip_timing),
        _ => {}
    }
}

fn determinism() -> Outcome {
    let config = RunConfig {
        suites: SuiteName::EACH.to_vec(),
        options: SuiteOptions { seed: 11, ..SuiteOptions::default() },
        format: Format::Json,
        out: None,
        jobs: None,
    };
    let render = || {
        let json = cli::render(&cli::run(&config).expect("suites run"), Format::Json);
        let mut v: Value = serde_json::from_str(&json).expect("valid json");
        strip_timing(&mut v);
        serde_json::to_string_pretty(&v).expect("serializes")
    };
    let (a, b) = (render(), render());
    Outcome { pass: a == b, detail: format!("two runs with seed 11: {} bytes each after removing timings", a.len()) }
}

fn main() -> ExitCode {
    let only: Option<Vec<u8>> =
        std::env::var("NCVERIFY_CRITERIA").ok().map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [Criterion; 8] = [
        (1, "racah", racah),
        (2, "hahn", hahn),
        (3, "bannai-ito", bannai_ito),
        (4, "askey-wilson", askey_wilson),
        (5, "q-hahn", q_hahn),
        (6, "engine properties", properties),
        (7, "oracle cross-validation", oracle),
        (8, "determinism", determinism),
    ];
    let mut unexpected = 0;
    for (n, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let t = Instant::now();
        let o = run();
        let known = EXPECTED_FAIL.iter().find(|(k, _)| *k == n);
        let note = match (o.pass, known) {
            (true, None) | (false, Some(_)) => "",
            (true, Some(_)) => " (expected FAIL)",
            (false, None) => " (expected PASS)",
        };
        if !note.is_empty() {
            unexpected += 1;
        }
        let known = match known {
            Some((_, ids)) if !o.pass => format!(" [known failure: {ids}]"),
            _ => String::new(),
        };
        println!(
            "criterion {n} {name}: {}{note} ({:.1} s) {}{known}",
            if o.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria differ from their expected outcome");
        ExitCode::FAILURE
    }
}
