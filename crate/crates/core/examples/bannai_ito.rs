//! Bannai-Ito structure in the Clifford ⊗ differential algebra of dimension 6.
//!
//! ```bash
//! cargo run --release --example bannai_ito
//! ```

use ncverify::check::SuiteOptions;
use ncverify::suites_bi_q::run_bannai_ito_suite;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let suite = run_bannai_ito_suite(&SuiteOptions::default())?;
    let groups = ["bi.osp.", "bi.grade.", "bi.casimir.", "bi.rel.", "bi.pair.", "bi.comm."];
    for g in groups {
        let checks: Vec<_> = suite.checks.iter().filter(|c| c.id.starts_with(g)).collect();
        let ok = checks.iter().filter(|c| c.status == ncverify::report::Status::Verified).count();
        println!("{g:<12} {ok:>3}/{:<3} verified", checks.len());
    }
    if let Some(sign) = suite.check("bi.osp.123456.sign") {
        println!("osp sign on 123456: {}", sign.detail.as_deref().unwrap_or("-"));
    }
    for c in suite.checks.iter().filter(|c| c.is_gating() && c.status != ncverify::report::Status::Verified) {
        println!("gating failure {} ({} residual terms)", c.id, c.residual_terms);
    }
    Ok(())
}
