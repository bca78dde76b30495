//! The polynomial-space oracle: matrices of normal forms and expression trees
//! evaluated without normal ordering.
//!
//! ```bash
//! cargo run --release --example fock_oracle
//! ```

use ncverify::coefficients::Rat;
use ncverify::fock_oracle::{matrix_of, required_degree, tree_is_zero, GradedBasis, Model, OracleBuilder};
use ncverify::ncalg::{Algebra, Kind, OpBuilder};
use ncverify::weyl::{metaplectic, rotation};
use ncverify::Error;

fn main() -> Result<(), Error> {
    let alg = Algebra::<Rat>::weyl(2);
    let model = Model::weyl(2);
    let n = &alg.gen(Kind::Create, 1) * &alg.gen(Kind::Annihilate, 1);
    let basis = GradedBasis::new(&model, required_degree(&n));
    let m = matrix_of(&n, &model, &basis)?;
    for (s, col) in basis.states().iter().zip(&m.columns) {
        let image: Vec<String> = col.iter().map(|(t, c)| format!("{c}*{t}")).collect();
        println!("N1 {s} = {}", image.join(" + "));
    }

    // [J0, L12] = 0 as an expression tree on four modes.
    let model = Model::weyl(4);
    let b = OracleBuilder::new(&model);
    let j = metaplectic(&b, &[1, 2, 3, 4])?;
    let l = rotation(&b, 1, 2)?;
    let v = tree_is_zero(&b.comm(&j.j0, &l), &model, None)?;
    println!("[J0, L12]: zero = {} at degree {} on {} states", v.is_zero, v.degree, v.basis_size);
    let v = tree_is_zero(&b.comm(&j.jplus, &b.gen(Kind::Create, 1)?), &model, None)?;
    println!("[J+, a1+]: zero = {} at degree {} on {} states", v.is_zero, v.degree, v.basis_size);
    Ok(())
}
