//! q-Hahn pair on four q-oscillators: commutants and an informative closure fit.
//!
//! ```bash
//! cargo run --release --example q_hahn
//! ```

use ncverify::check::SuiteOptions;
use ncverify::report::RunReport;
use ncverify::suites_bi_q::run_qhahn_suite;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let suite = run_qhahn_suite(&SuiteOptions::default())?;
    print!("{}", RunReport::new(0, vec![suite]).to_text());
    Ok(())
}
