//! The Hahn suite on four oscillator modes. One relation fails as stated;
//! the report shows its residual.
//!
//! ```bash
//! cargo run --release --example hahn
//! ```

use ncverify::check::SuiteOptions;
use ncverify::report::{RunReport, Status};
use ncverify::suites_classical::run_hahn_suite;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let suite = run_hahn_suite(&SuiteOptions::default())?;
    for c in suite.checks.iter().filter(|c| c.status == Status::Failed) {
        println!("{}: {}", c.id, c.residual.as_deref().unwrap_or("-"));
    }
    print!("{}", RunReport::new(0, vec![suite]).to_text());
    Ok(())
}
