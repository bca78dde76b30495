//! Exact fitting over central coefficients: recover an element written in
//! terms of Casimirs of q-deformed su(1,1).
//!
//! ```bash
//! cargo run --release --example fit_central
//! ```

use ncverify::coefficients::{RatFunc, Scalar, Zp};
use ncverify::ncalg::{Algebra, Engine, OpBuilder};
use ncverify::qosc::{fit_central_combination, q_casimir, q_metaplectic, FitOutcome};
use ncverify::suites_bi_q::render_polynomial;
use ncverify::Error;

fn main() -> Result<(), Error> {
    let b = Engine::new(Algebra::qosc(4, RatFunc::v())?);
    let c12 = q_casimir(&b, &q_metaplectic(&b, 1..=2)?)?;
    let c34 = q_casimir(&b, &q_metaplectic(&b, 3..=4)?)?;
    let all = q_metaplectic(&b, 1..=4)?;
    let c = q_casimir(&b, &all)?;
    // target = (v^2 + 1) C12 C34 J0 - 3 J0
    let coeff = RatFunc::v().field_pow(2)?.field_add(&RatFunc::one());
    let target = b.sub(&b.scale(&(&(&c12 * &c34) * &all.j0), &coeff), &b.scale(&all.j0, &RatFunc::from_i64(3)));
    let basis = [b.one(), all.j0.clone()];
    let central = [c12, c34, c];
    for cap in [1, 2] {
        match fit_central_combination(&target, &basis, &central, cap, Zp::new(1_000_003))? {
            FitOutcome::Solved { terms } => {
                let on_j0: Vec<_> = terms.into_iter().filter(|t| t.basis_index == 1).collect();
                println!("cap {cap}: target = ({}) J0", render_polynomial(&on_j0, &["C12", "C34", "C"]));
            }
            FitOutcome::Failed { residual_terms, reason } => println!("cap {cap}: {reason} ({residual_terms} residual terms)"),
        }
    }
    Ok(())
}
