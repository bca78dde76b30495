//! Askey-Wilson closure on six q-oscillators: K_A, K_B from intermediate
//! Casimirs, K_C and the central coefficients found by exact fitting.
//!
//! ```bash
//! cargo run --release --example askey_wilson [fit_cap]
//! ```

use ncverify::check::SuiteOptions;
use ncverify::suites_bi_q::run_aw_suite;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let fit_cap = std::env::args().nth(1).map_or(2, |s| s.parse().expect("degree cap"));
    let suite = run_aw_suite(&SuiteOptions { fit_cap, ..SuiteOptions::default() })?;
    for c in suite.checks.iter().filter(|c| c.id.starts_with("aw.closure.")) {
        println!("{} {:?}", c.id, c.status);
        println!("  {}", c.statement);
        println!("  {}", c.detail.as_deref().unwrap_or("-"));
    }
    let m = &suite.summary;
    println!("{} checks, {} verified, gating failures {}", m.checks, m.verified, m.gating_failed);
    Ok(())
}
