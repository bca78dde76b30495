//! Command-line front end: flag parsing, suite dispatch and report output.
//!
//! Every flag can also be set through an environment variable with the
//! `NCVERIFY_` prefix, e.g. `NCVERIFY_SUITE=aw` or `NCVERIFY_FIT_CAP=1`.
//! Flags take precedence over the environment.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::check::SuiteOptions;
use crate::report::{RunReport, SuiteReport};
use crate::{suites_bi_q, suites_classical, Error};

/// Process exit status.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const INTERNAL: i32 = 3;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    Racah,
    Hahn,
    BannaiIto,
    Aw,
    #[value(name = "qhahn")]
    QHahn,
    All,
}

impl SuiteName {
    /// Concrete suites in run order.
    pub const EACH: [SuiteName; 5] = [SuiteName::Racah, SuiteName::Hahn, SuiteName::BannaiIto, SuiteName::Aw, SuiteName::QHahn];

    /// Mode count (dimension for Bannai–Ito) the suite is defined on.
    pub fn modes(self) -> Option<usize> {
        match self {
            SuiteName::Racah | SuiteName::BannaiIto | SuiteName::Aw => Some(6),
            SuiteName::Hahn | SuiteName::QHahn => Some(4),
            SuiteName::All => None,
        }
    }

    fn run(self, opts: &SuiteOptions) -> Result<SuiteReport, Error> {
        match self {
            SuiteName::Racah => suites_classical::run_racah_suite(opts),
            SuiteName::Hahn => suites_classical::run_hahn_suite(opts),
            SuiteName::BannaiIto => suites_bi_q::run_bannai_ito_suite(opts),
            SuiteName::Aw => suites_bi_q::run_aw_suite(opts),
            SuiteName::QHahn => suites_bi_q::run_qhahn_suite(opts),
            SuiteName::All => unreachable!("expanded by the caller"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "ncverify", version, about = "Exact verification of Racah, Hahn, Bannai-Ito, Askey-Wilson and q-Hahn identities")]
pub struct Args {
    /// Suite to run.
    #[arg(long, value_enum, default_value = "all", env = "NCVERIFY_SUITE")]
    pub suite: SuiteName,
    /// Mode count; must match the suite (6 for racah, bannai-ito, aw; 4 for hahn, qhahn).
    #[arg(long, env = "NCVERIFY_MODES")]
    pub modes: Option<usize>,
    /// Cross-check every gating identity on the Fock-space oracle.
    #[arg(long, env = "NCVERIFY_ORACLE")]
    pub oracle: bool,
    /// Oracle truncation degree; by default the per-check margin rule.
    #[arg(long, env = "NCVERIFY_ORACLE_DEGREE")]
    pub oracle_degree: Option<usize>,
    /// Degree cap of central coefficients in closure fits.
    #[arg(long, default_value_t = 2, env = "NCVERIFY_FIT_CAP")]
    pub fit_cap: u32,
    #[arg(long, value_enum, default_value = "text", env = "NCVERIFY_FORMAT")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, env = "NCVERIFY_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, env = "NCVERIFY_JOBS")]
    pub jobs: Option<usize>,
    /// Seeds the fit sample point and the oracle specializations.
    #[arg(long, default_value_t = 0, env = "NCVERIFY_SEED")]
    pub seed: u64,
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub suites: Vec<SuiteName>,
    pub options: SuiteOptions,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
}

impl RunConfig {
    pub fn from_args(a: Args) -> Result<Self, String> {
        let suites = if a.suite == SuiteName::All { SuiteName::EACH.to_vec() } else { vec![a.suite] };
        if let Some(m) = a.modes {
            match a.suite.modes() {
                None => return Err("--modes needs a single suite".into()),
                Some(k) if k != m => {
                    return Err(format!("suite {:?} is defined on {k} modes, got --modes {m}", a.suite));
                }
                Some(_) => {}
            }
        }
        if a.jobs == Some(0) {
            return Err("--jobs must be positive".into());
        }
        Ok(RunConfig {
            suites,
            options: SuiteOptions { seed: a.seed, oracle: a.oracle, oracle_degree: a.oracle_degree, fit_cap: a.fit_cap },
            format: a.format,
            out: a.out,
            jobs: a.jobs,
        })
    }
}

/// Run the configured suites on a pool of the configured width.
pub fn run(config: &RunConfig) -> Result<RunReport, Error> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.jobs {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::InvalidContext(e.to_string()))?;
    pool.install(|| {
        let mut reports = Vec::new();
        for s in &config.suites {
            log::info!("running suite {s:?}");
            reports.push(s.run(&config.options)?);
        }
        Ok(RunReport::new(config.options.seed, reports))
    })
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    }
}

/// Parse, run and report; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::PASS };
        }
    };
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return exit::USAGE;
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("internal error: {e}");
            return exit::INTERNAL;
        }
    };
    let text = render(&report, config.format);
    let written = match &config.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("internal error: cannot write report: {e}");
        return exit::INTERNAL;
    }
    if report.pass {
        exit::PASS
    } else {
        exit::CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, String> {
        let a = Args::try_parse_from(std::iter::once("ncverify").chain(args.iter().copied())).map_err(|e| e.to_string())?;
        RunConfig::from_args(a)
    }

    #[test]
    fn suite_names() {
        assert_eq!(parse(&["--suite", "qhahn"]).unwrap().suites, vec![SuiteName::QHahn]);
        assert_eq!(parse(&["--suite", "bannai-ito"]).unwrap().suites, vec![SuiteName::BannaiIto]);
        assert_eq!(parse(&[]).unwrap().suites.len(), 5);
        assert!(parse(&["--suite", "wilson"]).is_err());
    }

    #[test]
    fn modes_must_match() {
        assert!(parse(&["--suite", "hahn", "--modes", "4"]).is_ok());
        assert!(parse(&["--suite", "hahn", "--modes", "6"]).is_err());
        assert!(parse(&["--modes", "6"]).is_err());
        assert!(parse(&["--jobs", "0"]).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(main_with_args(["ncverify", "--suite", "nope"]), exit::USAGE);
        assert_eq!(main_with_args(["ncverify", "--suite", "aw", "--modes", "4"]), exit::USAGE);
        assert_eq!(main_with_args(["ncverify", "--help"]), exit::PASS);
    }
}
