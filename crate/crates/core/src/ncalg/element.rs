use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::algebra::{Algebra, WordId};
use super::generator::{Family, GeneratorId, Kind, Word};
use super::rewrite::Strategy;
use crate::coefficients::{Rat, Scalar, Specialize, Zp};
use crate::Error;

/// Term-pair count above which products are split across threads.
const PARALLEL_PRODUCT_THRESHOLD: usize = 1 << 14;

/// A finite linear combination of words with scalar coefficients.
///
/// Elements produced by arithmetic are always normalized: every word is
/// canonical and no coefficient is zero, so two normalized elements are equal
/// exactly when their term maps are equal.
#[derive(Clone)]
pub struct Element<S: Scalar> {
    alg: Arc<Algebra<S>>,
    terms: FxHashMap<WordId, S>,
    normalized: bool,
}

impl<S: Scalar> Algebra<S> {
    pub fn zero(self: &Arc<Self>) -> Element<S> {
        Element { alg: self.clone(), terms: FxHashMap::default(), normalized: true }
    }

    pub fn constant(self: &Arc<Self>, c: S) -> Element<S> {
        let mut e = self.zero();
        if !c.is_zero() {
            e.terms.insert(self.intern(&Word::identity()), c);
        }
        e
    }

    pub fn one(self: &Arc<Self>) -> Element<S> {
        self.constant(S::one())
    }

    /// A single generator; panics on a generator foreign to this algebra.
    pub fn gen(self: &Arc<Self>, kind: Kind, mode: usize) -> Element<S> {
        self.try_gen(GeneratorId::new(kind, mode)).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn try_gen(self: &Arc<Self>, g: GeneratorId) -> Result<Element<S>, Error> {
        self.check_generator(g)?;
        Ok(self.word_element(&Word::single(g, 1), S::one()).normalize())
    }

    /// `c · w` with `w` left exactly as given (not normalized).
    pub fn word_element(self: &Arc<Self>, w: &Word, c: S) -> Element<S> {
        let mut e = self.zero();
        if !c.is_zero() {
            e.terms.insert(self.intern(w), c);
        }
        e.normalized = self.relations().is_canonical(w);
        e
    }

    /// Collect raw terms into an unnormalized element.
    pub fn from_terms(self: &Arc<Self>, terms: impl IntoIterator<Item = (Word, S)>) -> Element<S> {
        let mut acc: FxHashMap<Word, S> = FxHashMap::default();
        for (w, c) in terms {
            acc.entry(w).or_insert_with(S::zero).field_add_assign(&c);
        }
        let normalized = acc.keys().all(|w| self.relations().is_canonical(w));
        let mut e = self.from_word_map(acc);
        e.normalized = normalized;
        e
    }

    fn from_word_map(self: &Arc<Self>, acc: FxHashMap<Word, S>) -> Element<S> {
        let (words, coeffs): (Vec<Word>, Vec<S>) = acc.into_iter().filter(|(_, c)| !c.is_zero()).unzip();
        let ids = self.intern_all(words);
        Element { alg: self.clone(), terms: ids.into_iter().zip(coeffs).collect(), normalized: true }
    }
}

impl<S: Scalar> Element<S> {
    pub fn algebra(&self) -> &Arc<Algebra<S>> {
        &self.alg
    }

    pub fn family(&self) -> Family {
        self.alg.family()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_algebra(&self, other: &Self) -> Result<(), Error> {
        if Arc::ptr_eq(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch(format!(
                "{:?}({} modes) vs {:?}({} modes)",
                self.alg.family(),
                self.alg.modes(),
                other.alg.family(),
                other.alg.modes()
            )))
        }
    }

    /// Rewrite every word to canonical form (leftmost strategy).
    pub fn normalize(&self) -> Element<S> {
        self.normalize_with(Strategy::Leftmost)
    }

    /// Rewrite every word to canonical form with an explicit strategy. Unlike
    /// [`normalize`](Self::normalize) this always re-reduces, which the
    /// confluence checks rely on.
    pub fn normalize_with(&self, strategy: Strategy) -> Element<S> {
        if self.normalized && strategy == Strategy::Leftmost {
            return self.clone();
        }
        let words = self.alg.words_of(self.terms.keys());
        let mut acc: FxHashMap<Word, S> = FxHashMap::default();
        for (w, c) in words.iter().zip(self.terms.values()) {
            for (nw, nc) in self.alg.normal_form(w, strategy) {
                acc.entry(nw).or_insert_with(S::zero).field_add_assign(&c.field_mul(&nc));
            }
        }
        self.alg.from_word_map(acc)
    }

    /// True iff the normal form has no terms.
    pub fn is_zero(&self) -> bool {
        if self.normalized {
            self.terms.is_empty()
        } else {
            self.normalize().terms.is_empty()
        }
    }

    /// The scalar value, if the element is a multiple of the identity.
    pub fn as_scalar(&self) -> Option<S> {
        let e = self.normalize();
        match e.terms.len() {
            0 => Some(S::zero()),
            1 => {
                let (id, c) = e.terms.iter().next().unwrap();
                self.alg.word(*id).is_identity().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Terms sorted by word, the deterministic order used for printing.
    pub fn terms(&self) -> Vec<(Word, S)> {
        let words = self.alg.words_of(self.terms.keys());
        let mut out: Vec<(Word, S)> = words.into_iter().zip(self.terms.values().cloned()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    pub fn coefficient(&self, w: &Word) -> S {
        let id = self.alg.intern(w);
        self.terms.get(&id).cloned().unwrap_or_else(S::zero)
    }

    /// Largest number of lowering letters in any term.
    pub fn lowering_degree(&self) -> u32 {
        self.alg.words_of(self.terms.keys()).iter().map(Word::lowering_degree).max().unwrap_or(0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, Error> {
        self.same_algebra(other)?;
        let (a, b) = (self.normalize(), other.normalize());
        let (mut big, small) = if a.terms.len() >= b.terms.len() { (a, b) } else { (b, a) };
        for (id, c) in small.terms {
            match big.terms.get_mut(&id) {
                Some(slot) => {
                    slot.field_add_assign(&c);
                    if slot.is_zero() {
                        big.terms.remove(&id);
                    }
                }
                None => {
                    big.terms.insert(id, c);
                }
            }
        }
        Ok(big)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, Error> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, Error> {
        self.same_algebra(other)?;
        let (a, b) = (self.normalize(), other.normalize());
        if a.terms.is_empty() || b.terms.is_empty() {
            return Ok(self.alg.zero());
        }
        let wa: Vec<(Word, S)> = a.alg.words_of(a.terms.keys()).into_iter().zip(a.terms.values().cloned()).collect();
        let wb: Vec<(Word, S)> = b.alg.words_of(b.terms.keys()).into_iter().zip(b.terms.values().cloned()).collect();
        let alg = &self.alg;
        alg.count_products(wa.len() * wb.len());
        let expand = |chunk: &[(Word, S)]| {
            let mut acc: FxHashMap<Word, S> = FxHashMap::default();
            for (w1, c1) in chunk {
                for (w2, c2) in &wb {
                    let c12 = c1.field_mul(c2);
                    for (w, c) in alg.mul_canonical(w1, w2) {
                        let add = if c.is_one() { c12.clone() } else { c12.field_mul(&c) };
                        match acc.get_mut(&w) {
                            Some(slot) => slot.field_add_assign(&add),
                            None => {
                                acc.insert(w, add);
                            }
                        }
                    }
                }
            }
            acc
        };
        let acc = if wa.len() * wb.len() >= PARALLEL_PRODUCT_THRESHOLD && wa.len() > 1 {
            let chunk = wa.len().div_ceil(rayon::current_num_threads().max(1) * 4).max(1);
            // Chunks are merged in index order, so the sum is deterministic.
            let parts: Vec<_> = wa.par_chunks(chunk).map(expand).collect();
            let mut parts = parts.into_iter();
            let mut x = parts.next().unwrap_or_default();
            for y in parts {
                merge_into(&mut x, y);
            }
            x
        } else {
            expand(&wa)
        };
        Ok(self.alg.from_word_map(acc))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return self.alg.zero();
        }
        let mut e = self.normalize();
        for v in e.terms.values_mut() {
            *v = v.field_mul(c);
        }
        e
    }

    fn neg_ref(&self) -> Self {
        let mut e = self.clone();
        for v in e.terms.values_mut() {
            *v = v.field_neg();
        }
        e
    }

    /// `ab - ba`
    pub fn commutator(&self, other: &Self) -> Result<Self, Error> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// `ab + ba`
    pub fn anticommutator(&self, other: &Self) -> Result<Self, Error> {
        self.checked_mul(other)?.checked_add(&other.checked_mul(self)?)
    }

    /// `λ ab - λ⁻¹ ba`; fails for `λ = 0`.
    pub fn q_commutator(&self, other: &Self, lambda: &S) -> Result<Self, Error> {
        let inv = lambda.field_inv()?;
        self.checked_mul(other)?.scale(lambda).checked_sub(&other.checked_mul(self)?.scale(&inv))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = self.alg.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Rebuild in another algebra of the same family, mapping coefficients.
    /// The result is left unnormalized when words need re-reduction.
    pub fn map_into<T: Scalar>(
        &self,
        target: &Arc<Algebra<T>>,
        mut f: impl FnMut(&S) -> Result<T, Error>,
    ) -> Result<Element<T>, Error> {
        if target.family() != self.family() {
            return Err(Error::AlgebraMismatch(format!("{:?} vs {:?}", self.family(), target.family())));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (w, c) in self.terms() {
            terms.push((w, f(&c)?));
        }
        let mut e = target.from_terms(terms);
        e.normalized = e.normalized && self.normalized;
        Ok(e)
    }
}

impl<S: Specialize> Element<S> {
    /// Evaluate every coefficient at `v = v0` inside `target`, which must be
    /// [`Algebra::specialized`] at the same point.
    pub fn specialize(&self, target: &Arc<Algebra<Rat>>, v0: &Rat) -> Result<Element<Rat>, Error> {
        self.map_into(target, |c| Ok(c.specialize(v0)?))
    }

    /// Reduce modulo the sampling prime inside [`Algebra::sampled`] at `v0`.
    pub fn sample(&self, target: &Arc<Algebra<Zp>>, v0: Zp) -> Result<Element<Zp>, Error> {
        self.map_into(target, |c| Ok(c.sample(v0)?))
    }
}

fn merge_into<S: Scalar>(x: &mut FxHashMap<Word, S>, y: FxHashMap<Word, S>) {
    for (w, c) in y {
        match x.get_mut(&w) {
            Some(slot) => slot.field_add_assign(&c),
            None => {
                x.insert(w, c);
            }
        }
    }
}

impl<S: Scalar> PartialEq for Element<S> {
    fn eq(&self, other: &Self) -> bool {
        if !Arc::ptr_eq(&self.alg, &other.alg) {
            return false;
        }
        let (a, b) = (self.normalize(), other.normalize());
        a.terms == b.terms
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    /// Deterministic text: terms sorted by word, `coeff*word` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match (w.is_identity(), c.is_one()) {
                (true, _) => write!(f, "({c})")?,
                (false, true) => write!(f, "{w}")?,
                (false, false) => write!(f, "({c})*{w}")?,
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{:?}]({self})", self.family())
    }
}

macro_rules! element_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<S: Scalar> $tr<&Element<S>> for &Element<S> {
            type Output = Element<S>;
            fn $m(self, rhs: &Element<S>) -> Element<S> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<S: Scalar> $tr<Element<S>> for Element<S> {
            type Output = Element<S>;
            fn $m(self, rhs: Element<S>) -> Element<S> {
                self.$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

element_binop!(Add, add, checked_add);
element_binop!(Sub, sub, checked_sub);
element_binop!(Mul, mul, checked_mul);

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        self.normalize().neg_ref()
    }
}

impl<S: Scalar> Neg for Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        self.normalize().neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{GaussRat, Rat, RatFunc};

    fn word_of(alg: &Arc<Algebra<RatFunc>>, gens: &[(Kind, usize)]) -> Element<RatFunc> {
        let w = Word::from_letters(gens.iter().map(|&(k, m)| super::super::Letter::new(GeneratorId::new(k, m), 1)));
        alg.word_element(&w, RatFunc::one())
    }

    #[test]
    fn weyl_ccr() {
        let alg = Algebra::<Rat>::weyl(2);
        let (ad, a) = (alg.gen(Kind::Create, 1), alg.gen(Kind::Annihilate, 1));
        assert_eq!(a.commutator(&ad).unwrap(), alg.one());
        let b = alg.gen(Kind::Annihilate, 2);
        assert!(a.commutator(&b).unwrap().is_zero());
        // a a†² = a†² a + 2 a†
        let lhs = &a * &ad.pow(2);
        let rhs = &ad.pow(2) * &a + ad.scale(&Rat::integer(2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn clifford_relations() {
        let alg = Algebra::<GaussRat>::cliffdiff(3);
        let g: Vec<_> = (1..=3).map(|m| alg.gen(Kind::Gamma, m)).collect();
        let minus_two = alg.constant(GaussRat::from_i64(-2));
        for i in 0..3 {
            for j in 0..3 {
                let ac = g[i].anticommutator(&g[j]).unwrap();
                if i == j {
                    assert_eq!(ac, minus_two);
                } else {
                    assert!(ac.is_zero());
                }
            }
        }
        let (x, d) = (alg.gen(Kind::Position, 2), alg.gen(Kind::Derivative, 2));
        assert_eq!(d.commutator(&x).unwrap(), alg.one());
        assert!(x.commutator(&g[0]).unwrap().is_zero());
    }

    #[test]
    fn qosc_relations() {
        let v = RatFunc::v();
        let alg = Algebra::qosc(1, v.clone()).unwrap();
        let (ap, az, e, am) = (
            alg.gen(Kind::Raise, 1),
            alg.gen(Kind::Number, 1),
            alg.gen(Kind::ExpHalf, 1),
            alg.gen(Kind::Lower, 1),
        );
        let ei = alg.gen(Kind::ExpHalfInv, 1);
        let q = v.field_pow(4).unwrap();
        assert_eq!(&e * &ei, alg.one());
        assert_eq!(az.commutator(&ap).unwrap(), ap);
        assert_eq!(az.commutator(&am).unwrap(), -&am);
        // A⁻A⁺ - q A⁺A⁻ = 1
        assert_eq!(&am * &ap - (&ap * &am).scale(&q), alg.one());
        // E A⁺ = q^{1/2} A⁺ E
        assert_eq!(&e * &ap, (&ap * &e).scale(&v.field_pow(2).unwrap()));
        // A⁺A⁻ = (E² - 1)/(q - 1) on the canonical side
        let e2m1 = &e * &e - alg.one();
        let inv = q.field_sub(&RatFunc::one()).field_inv().unwrap();
        assert_eq!(&ap * &am, e2m1.scale(&inv));
    }

    #[test]
    fn fast_product_matches_rewriting() {
        let alg = Algebra::qosc(2, RatFunc::v()).unwrap();
        let seq = [
            (Kind::Lower, 1),
            (Kind::Raise, 2),
            (Kind::Number, 1),
            (Kind::Raise, 1),
            (Kind::ExpHalfInv, 2),
            (Kind::Lower, 1),
            (Kind::Raise, 1),
            (Kind::Lower, 2),
        ];
        let raw = word_of(&alg, &seq);
        let by_product = seq.iter().fold(alg.one(), |acc, &(k, m)| &acc * &alg.gen(k, m));
        assert_eq!(raw.normalize_with(Strategy::Leftmost), by_product);
        assert_eq!(raw.normalize_with(Strategy::Rightmost), by_product);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = Algebra::<Rat>::weyl(1);
        let b = Algebra::<Rat>::weyl(1);
        assert!(matches!(a.one().checked_add(&b.one()), Err(Error::AlgebraMismatch(_))));
        assert!(a.try_gen(GeneratorId::new(Kind::Create, 2)).is_err());
        assert!(a.try_gen(GeneratorId::new(Kind::Gamma, 1)).is_err());
        assert!(a.one().q_commutator(&a.one(), &Rat::zero()).is_err());
    }

    #[test]
    fn display_is_sorted() {
        let alg = Algebra::<Rat>::weyl(1);
        let (ad, a) = (alg.gen(Kind::Create, 1), alg.gen(Kind::Annihilate, 1));
        assert_eq!((&a * &ad).to_string(), "(1) + ad1*a1");
    }
}
