//! Engine invariants as property tests. The acceptance harness runs the same
//! properties at the larger case counts.

mod common;

use common::*;
use ncverify::coefficients::{GaussRat, Rat, RatFunc, Scalar};
use ncverify::fock_oracle::Model;
use ncverify::ncalg::{Algebra, Family, Kind};
use ncverify::qosc::{extended_rotation, q_metaplectic, Bracket, QContext};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn weyl_rewriting_is_confluent(w in word(Family::Weyl, 3, 6)) {
        confluent(&Algebra::<Rat>::weyl(3), &w)?;
    }

    #[test]
    fn cliffdiff_rewriting_is_confluent(w in word(Family::CliffDiff, 4, 6)) {
        confluent(&Algebra::<GaussRat>::cliffdiff(4), &w)?;
    }

    #[test]
    fn qosc_rewriting_is_confluent(w in word(Family::QOsc, 3, 5)) {
        confluent(&Algebra::qosc(3, RatFunc::v()).unwrap(), &w)?;
    }

    #[test]
    fn qosc_product_is_associative(a in raw_terms(Family::QOsc, 2, 3, 3), b in raw_terms(Family::QOsc, 2, 3, 3), c in raw_terms(Family::QOsc, 2, 3, 3)) {
        let alg = Algebra::qosc(2, RatFunc::v()).unwrap();
        associative(&element(&alg, &a), &element(&alg, &b), &element(&alg, &c))?;
    }

    #[test]
    fn cliffdiff_product_is_associative(a in raw_terms(Family::CliffDiff, 4, 3, 3), b in raw_terms(Family::CliffDiff, 4, 3, 3), c in raw_terms(Family::CliffDiff, 4, 3, 3)) {
        let alg = Algebra::<GaussRat>::cliffdiff(4);
        associative(&element(&alg, &a), &element(&alg, &b), &element(&alg, &c))?;
    }

    #[test]
    fn specialization_is_a_homomorphism(a in raw_terms(Family::QOsc, 2, 3, 3), b in raw_terms(Family::QOsc, 2, 3, 3), v0 in non_pole_point()) {
        let alg = Algebra::qosc(2, RatFunc::v()).unwrap();
        specialization_commutes(&element(&alg, &a), &element(&alg, &b), &v0)?;
    }

    #[test]
    fn weyl_representation_is_a_homomorphism(a in raw_terms(Family::Weyl, 2, 3, 2), b in raw_terms(Family::Weyl, 2, 3, 2)) {
        let alg = Algebra::<Rat>::weyl(2);
        homomorphic(&Model::weyl(2), &element(&alg, &a), &element(&alg, &b))?;
    }

    #[test]
    fn normal_forms_are_idempotent(t in raw_terms(Family::CliffDiff, 4, 4, 3)) {
        let e = element(&Algebra::<GaussRat>::cliffdiff(4), &t).normalize();
        prop_assert_eq!(e.normalize(), e.clone());
        // Clifford reduction leaves at most one γ per index.
        for (w, _) in e.terms() {
            for l in w.letters() {
                prop_assert!(l.gen.kind != Kind::Gamma || l.exp == 1, "{}", w);
            }
        }
    }
}

#[test]
fn uq_relations_on_every_contiguous_range() {
    for n in [4, 6] {
        let ctx = QContext::new(n).unwrap();
        for i in 1..=n {
            for k in i..=n {
                ctx.build_q_su11(i..=k).unwrap_or_else(|e| panic!("{i}..{k} on {n} modes: {e}"));
            }
        }
    }
}

#[test]
fn coproduct_is_coassociative() {
    // J±(1..4) = J±(1..2) q^{2J₀(3..4)} + J±(3..4)
    let ctx = QContext::new(4).unwrap();
    let b = ctx.engine();
    let (j, left, right) =
        (q_metaplectic(b, 1..=4).unwrap(), q_metaplectic(b, 1..=2).unwrap(), q_metaplectic(b, 3..=4).unwrap());
    assert_eq!(j.jplus, &(&left.jplus * &right.q2j0) + &right.jplus);
    assert_eq!(j.jminus, &(&left.jminus * &right.q2j0) + &right.jminus);
    assert_eq!(j.j0, &left.j0 + &right.j0);
    assert_eq!(j.q2j0, &left.q2j0 * &right.q2j0);
}

#[test]
fn extended_rotation_through_any_chain() {
    let ctx = QContext::new(4).unwrap();
    let b = ctx.engine();
    for sign in [Bracket::Plus, Bracket::Minus] {
        let via2 = extended_rotation(b, 1, 4, sign, Some(2)).unwrap();
        let via3 = extended_rotation(b, 1, 4, sign, Some(3)).unwrap();
        assert!(!via3.is_zero());
        assert_eq!(via2, via3, "{sign:?}");
    }
}

#[test]
fn disjoint_extended_rotation_commutes() {
    let ctx = QContext::new(6).unwrap();
    let l13 = ctx.build_extended_l(1, 3, Bracket::Plus).unwrap();
    assert!(!l13.is_zero());
    assert!(l13.commutator(&ctx.build_q_l(4).unwrap()).unwrap().is_zero());
}

#[test]
fn q_one_is_a_pole() {
    let alg = Algebra::qosc(2, RatFunc::v()).unwrap();
    assert!(alg.specialized(&Rat::one()).is_err());
}
