//! Random words and elements, and the engine properties checked on them.
#![allow(dead_code)]

use std::sync::Arc;

use ncverify::coefficients::{GaussRat, Rat, RatFunc, Scalar};
use ncverify::fock_oracle::{required_degree, GradedBasis, Model, Vector};
use ncverify::ncalg::{Algebra, Element, Family, GeneratorId, Kind, Letter, Strategy as Rewrite, Word};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub fn kinds(f: Family) -> &'static [Kind] {
    match f {
        Family::Weyl => &[Kind::Create, Kind::Annihilate],
        Family::CliffDiff => &[Kind::Position, Kind::Derivative, Kind::Gamma],
        Family::QOsc => &[Kind::Raise, Kind::Lower, Kind::Number, Kind::ExpHalf, Kind::ExpHalfInv],
    }
}

/// Raw words of up to `max_len` letters with exponents 1 or 2.
pub fn word(f: Family, modes: usize, max_len: usize) -> impl Strategy<Value = Word> {
    let k = kinds(f);
    prop::collection::vec((0..k.len(), 1..=modes, 1..=2i32), 0..=max_len).prop_map(move |ls| {
        Word::from_letters(ls.into_iter().map(|(i, m, e)| Letter::new(GeneratorId::new(k[i], m), e)))
    })
}

/// Up to `terms` raw words with small nonzero integer coefficients.
pub fn raw_terms(f: Family, modes: usize, max_len: usize, terms: usize) -> impl Strategy<Value = Vec<(Word, i64)>> {
    let c = prop_oneof![-3i64..=-1, 1i64..=3];
    prop::collection::vec((word(f, modes, max_len), c), 1..=terms)
}

pub fn element<S: Scalar>(alg: &Arc<Algebra<S>>, terms: &[(Word, i64)]) -> Element<S> {
    alg.from_terms(terms.iter().map(|(w, c)| (w.clone(), S::from_i64(*c))))
}

/// Deterministic runner with `cases` cases.
pub fn runner(cases: u32) -> TestRunner {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

/// Leftmost and rightmost rewriting reach the same normal form.
pub fn confluent<S: Scalar>(alg: &Arc<Algebra<S>>, w: &Word) -> Result<(), TestCaseError> {
    let e = alg.word_element(w, S::one());
    let (l, r) = (e.normalize_with(Rewrite::Leftmost), e.normalize_with(Rewrite::Rightmost));
    ensure(l == r, || format!("{w}: leftmost {l} != rightmost {r}"))
}

pub fn associative<S: Scalar>(a: &Element<S>, b: &Element<S>, c: &Element<S>) -> Result<(), TestCaseError> {
    let lhs = &(a * b) * c;
    let rhs = a * &(b * c);
    ensure(lhs == rhs, || format!("(ab)c != a(bc) for a = {a}, b = {b}, c = {c}"))
}

/// Evaluation at `v = v0` is a ring homomorphism on products and sums.
pub fn specialization_commutes(a: &Element<RatFunc>, b: &Element<RatFunc>, v0: &Rat) -> Result<(), TestCaseError> {
    let target = a.algebra().specialized(v0).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let s = |e: &Element<RatFunc>| e.specialize(&target, v0).map_err(|e| TestCaseError::fail(e.to_string()));
    let (sa, sb) = (s(a)?, s(b)?);
    ensure(s(&(a * b))? == &sa * &sb, || format!("product does not specialize at v0 = {v0}: a = {a}, b = {b}"))?;
    ensure(s(&(a + b))? == &sa + &sb, || format!("sum does not specialize at v0 = {v0}"))
}

/// `ρ(ab) = ρ(a)ρ(b)` column by column on the margin-rule basis of `ab`.
pub fn homomorphic<T: Scalar>(model: &Model<T>, a: &Element<T>, b: &Element<T>) -> Result<(), TestCaseError> {
    let (a, b) = (a.normalize(), b.normalize());
    let ab = &a * &b;
    let degree = required_degree(&ab).max(required_degree(&b));
    let basis = GradedBasis::new(model, degree);
    for s in basis.states() {
        let mut v = Vector::default();
        v.insert(s.clone(), T::one());
        let lhs = model.apply_element(&ab, &v);
        let rhs = model.apply_element(&a, &model.apply_element(&b, &v));
        ensure(lhs == rhs, || format!("action on {s} differs for a = {a}, b = {b}"))?;
    }
    Ok(())
}

/// Confluence on `cases` random words of one family.
pub fn run_confluence(f: Family, modes: usize, cases: u32) -> Result<(), String> {
    let mut r = runner(cases);
    match f {
        Family::Weyl => {
            let alg = Algebra::<Rat>::weyl(modes);
            r.run(&word(f, modes, 6), |w| confluent(&alg, &w))
        }
        Family::CliffDiff => {
            let alg = Algebra::<GaussRat>::cliffdiff(modes);
            r.run(&word(f, modes, 6), |w| confluent(&alg, &w))
        }
        Family::QOsc => {
            let alg = Algebra::qosc(modes, RatFunc::v()).expect("symbolic v");
            r.run(&word(f, modes, 5), |w| confluent(&alg, &w))
        }
    }
    .map_err(|e| e.to_string())
}

pub fn run_associativity(f: Family, modes: usize, cases: u32) -> Result<(), String> {
    let mut r = runner(cases);
    let t = || raw_terms(f, modes, 3, 3);
    let triples = (t(), t(), t());
    match f {
        Family::Weyl => {
            let alg = Algebra::<Rat>::weyl(modes);
            r.run(&triples, |(a, b, c)| associative(&element(&alg, &a), &element(&alg, &b), &element(&alg, &c)))
        }
        Family::CliffDiff => {
            let alg = Algebra::<GaussRat>::cliffdiff(modes);
            r.run(&triples, |(a, b, c)| associative(&element(&alg, &a), &element(&alg, &b), &element(&alg, &c)))
        }
        Family::QOsc => {
            let alg = Algebra::qosc(modes, RatFunc::v()).expect("symbolic v");
            r.run(&triples, |(a, b, c)| associative(&element(&alg, &a), &element(&alg, &b), &element(&alg, &c)))
        }
    }
    .map_err(|e| e.to_string())
}

/// Rational `v0` away from `0` and `±1`.
pub fn non_pole_point() -> impl Strategy<Value = Rat> {
    (prop_oneof![-6i64..=-2, 2i64..=6], 1i64..=5)
        .prop_map(|(n, d)| Rat::new(n, d).expect("nonzero denominator"))
        .prop_filter("v0 = ±1 is a pole", |v| !v.abs().is_one())
}

/// Specialization on `cases` random pairs, each at `points` random `v0`.
pub fn run_specialization(modes: usize, cases: u32, points: usize) -> Result<(), String> {
    let alg = Algebra::qosc(modes, RatFunc::v()).expect("symbolic v");
    let t = || raw_terms(Family::QOsc, modes, 3, 3);
    let pts = prop::collection::vec(non_pole_point(), points..=points);
    runner(cases)
        .run(&(t(), t(), pts), |(a, b, pts)| {
            let (a, b) = (element(&alg, &a), element(&alg, &b));
            pts.iter().try_for_each(|v0| specialization_commutes(&a, &b, v0))
        })
        .map_err(|e| e.to_string())
}

/// Homomorphism of the oracle representation on `cases` random pairs.
pub fn run_homomorphism(f: Family, modes: usize, cases: u32) -> Result<(), String> {
    let mut r = runner(cases);
    let pair = (raw_terms(f, modes, 3, 2), raw_terms(f, modes, 3, 2));
    match f {
        Family::Weyl => {
            let (alg, model) = (Algebra::<Rat>::weyl(modes), Model::weyl(modes));
            r.run(&pair, |(a, b)| homomorphic(&model, &element(&alg, &a), &element(&alg, &b)))
        }
        Family::CliffDiff => {
            let (alg, model) = (Algebra::<GaussRat>::cliffdiff(modes), Model::cliffdiff(modes));
            r.run(&pair, |(a, b)| homomorphic(&model, &element(&alg, &a), &element(&alg, &b)))
        }
        Family::QOsc => {
            let v0 = Rat::new(3, 2).expect("nonzero denominator");
            let alg = Algebra::qosc(modes, v0.clone()).expect("v0 is not a pole");
            let model = Model::qosc(modes, v0).expect("v0 is not a pole");
            r.run(&pair, |(a, b)| homomorphic(&model, &element(&alg, &a), &element(&alg, &b)))
        }
    }
    .map_err(|e| e.to_string())
}
