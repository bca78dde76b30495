//! The Racah suite on six oscillator modes.
//!
//! ```bash
//! cargo run --release --example racah
//! ```

use ncverify::check::SuiteOptions;
use ncverify::report::RunReport;
use ncverify::suites_classical::run_racah_suite;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let suite = run_racah_suite(&SuiteOptions::default())?;
    print!("{}", RunReport::new(0, vec![suite]).to_text());
    Ok(())
}
