//! Normal forms in the three generator families.
//!
//! ```bash
//! cargo run --release --example normal_ordering
//! ```

use ncverify::coefficients::{GaussRat, Rat, RatFunc, Scalar};
use ncverify::ncalg::{Algebra, GeneratorId, Kind, Letter, Strategy, Word};
use ncverify::Error;

fn main() -> Result<(), Error> {
    // Oscillators: a a† = a† a + 1
    let w = Algebra::<Rat>::weyl(2);
    let (a, ad) = (w.gen(Kind::Annihilate, 1), w.gen(Kind::Create, 1));
    println!("a1 a1+        = {}", &a * &ad);
    println!("(a1 a1+)^2    = {}", (&a * &ad).pow(2));
    println!("[a1, a1+^3]   = {}", a.commutator(&ad.pow(3))?);

    // Positions, derivatives and Clifford generators
    let c = Algebra::<GaussRat>::cliffdiff(3);
    let (g1, g2) = (c.gen(Kind::Gamma, 1), c.gen(Kind::Gamma, 2));
    let (x1, d1) = (c.gen(Kind::Position, 1), c.gen(Kind::Derivative, 1));
    println!("g2 g1         = {}", &g2 * &g1);
    println!("{{g1, g2}}      = {}", g1.anticommutator(&g2)?);
    println!("d1 x1         = {}", &d1 * &x1);

    // q-oscillators over Q(v), q = v^4
    let q = Algebra::qosc(1, RatFunc::v())?;
    let (b, bd) = (q.gen(Kind::Lower, 1), q.gen(Kind::Raise, 1));
    let prod = &b * &bd;
    println!("b1 b1+        = {prod}");

    // Rewriting order does not change the result.
    let w3 = Word::from_letters([Kind::Lower, Kind::Raise, Kind::Raise].map(|k| Letter::new(GeneratorId::new(k, 1), 1)));
    let raw = q.word_element(&w3, RatFunc::one());
    println!("b1 b1+ b1+    = {}", raw.normalize());
    assert_eq!(raw.normalize_with(Strategy::Leftmost), raw.normalize_with(Strategy::Rightmost));
    println!("interned words: weyl {}, cliffdiff {}, qosc {}", w.interned_words(), c.interned_words(), q.interned_words());
    Ok(())
}
