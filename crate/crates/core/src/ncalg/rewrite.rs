//! Local rewrite systems defining the normal forms of each family.
//!
//! Words are rewritten by rules acting on one letter, two adjacent letters,
//! or (for q-oscillators) a raising letter separated from a lowering letter
//! of the same mode only by Cartan letters. Every rule strictly decreases
//! the measure (number of lowering letters, inversions, letter count) in
//! lexicographic order, so rewriting terminates; confluence is checked by
//! the property suite, which compares leftmost-first and rightmost-first
//! reduction on random words.

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::generator::{push_merge, Family, GeneratorId, Kind, Letter, Word};
use crate::coefficients::{CoeffError, Rat, Scalar};

pub(crate) type Terms<S> = SmallVec<[(Word, S); 4]>;

/// Which redex is contracted first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Redex {
    /// Zero exponent.
    Drop(usize),
    /// `E⁻¹^n → E^{-n}`.
    Laurent(usize),
    /// `γ^e` with `e ≥ 2`.
    GammaSquare(usize),
    /// Equal adjacent generators.
    Merge(usize),
    /// Adjacent letters out of canonical order.
    Swap(usize),
    /// `A⁺ h(A⁰, E) A⁻` within one mode.
    Collapse(usize, usize),
}

/// Precomputed powers of the deformation parameter `v = q^{1/4}`.
#[derive(Clone, Debug)]
pub(crate) struct QParams<S> {
    pub v: S,
    v2: S,
    v2_inv: S,
    pub q: S,
    /// `1/(q - 1)`
    collapse: S,
}

impl<S: Scalar> QParams<S> {
    pub(crate) fn new(v: S) -> Result<Self, CoeffError> {
        let v2 = v.field_mul(&v);
        let v2_inv = v2.field_inv()?;
        let q = v2.field_mul(&v2);
        let collapse = q.field_sub(&S::one()).field_inv()?;
        Ok(QParams { v, v2, v2_inv, q, collapse })
    }

    /// `v^{2k} = q^{k/2}`.
    pub(crate) fn v2_pow(&self, k: i64) -> S {
        let base = if k < 0 { &self.v2_inv } else { &self.v2 };
        let mut acc = S::one();
        for _ in 0..k.unsigned_abs() {
            acc = acc.field_mul(base);
        }
        acc
    }
}

/// The rule set of one family: the canonical letter order plus the local
/// rewrite rules. For q-oscillators it also carries `v`.
#[derive(Clone, Debug)]
pub struct RelationSet<S> {
    family: Family,
    pub(crate) q: Option<QParams<S>>,
}

fn lt(gen: GeneratorId, exp: i32) -> Letter {
    Letter::new(gen, exp)
}

fn with_kind(g: GeneratorId, kind: Kind) -> GeneratorId {
    GeneratorId { kind, mode: g.mode }
}

impl<S: Scalar> RelationSet<S> {
    pub(crate) fn new(family: Family, q: Option<QParams<S>>) -> Self {
        RelationSet { family, q }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn qp(&self) -> &QParams<S> {
        self.q.as_ref().expect("q-oscillator relations carry q")
    }

    /// Whether a word is in canonical normal form.
    pub fn is_canonical(&self, w: &Word) -> bool {
        let ls = w.letters();
        for (i, l) in ls.iter().enumerate() {
            let ok = match l.gen.kind {
                Kind::ExpHalfInv => false,
                Kind::ExpHalf => l.exp != 0,
                Kind::Gamma => l.exp == 1,
                _ => l.exp >= 1,
            };
            if !ok || (i > 0 && ls[i - 1].gen >= l.gen) {
                return false;
            }
        }
        if self.family == Family::QOsc {
            let mut raised: Option<u16> = None;
            for l in ls {
                match l.gen.kind {
                    Kind::Raise => raised = Some(l.gen.mode),
                    Kind::Lower if raised == Some(l.gen.mode) => return false,
                    _ => {}
                }
            }
        }
        true
    }

    fn single_redex(&self, ls: &[Letter], i: usize) -> Option<Redex> {
        let l = ls[i];
        if l.exp == 0 {
            return Some(Redex::Drop(i));
        }
        match l.gen.kind {
            Kind::ExpHalfInv => Some(Redex::Laurent(i)),
            Kind::Gamma if l.exp >= 2 => Some(Redex::GammaSquare(i)),
            _ => None,
        }
    }

    fn redex_at(&self, ls: &[Letter], i: usize) -> Option<Redex> {
        if let Some(r) = self.single_redex(ls, i) {
            return Some(r);
        }
        if i + 1 < ls.len() && self.single_redex(ls, i + 1).is_none() {
            let (x, y) = (ls[i], ls[i + 1]);
            if x.gen == y.gen {
                return Some(Redex::Merge(i));
            }
            if x.gen > y.gen {
                return Some(Redex::Swap(i));
            }
        }
        if ls[i].gen.kind == Kind::Raise {
            let mode = ls[i].gen.mode;
            for (j, l) in ls.iter().enumerate().skip(i + 1) {
                if l.gen.mode != mode {
                    break;
                }
                match l.gen.kind {
                    Kind::Number | Kind::ExpHalf => continue,
                    Kind::Lower => return Some(Redex::Collapse(i, j)),
                    _ => break,
                }
            }
        }
        None
    }

    pub(crate) fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<Redex> {
        let ls = w.letters();
        match strategy {
            Strategy::Leftmost => (0..ls.len()).find_map(|i| self.redex_at(ls, i)),
            Strategy::Rightmost => (0..ls.len()).rev().find_map(|i| self.redex_at(ls, i)),
        }
    }

    /// Contract one redex.
    pub(crate) fn apply(&self, w: &Word, redex: Redex) -> Terms<S> {
        let ls = w.letters();
        let mut out: Terms<S> = SmallVec::new();
        // Build `prefix ++ middle ++ suffix` for the letters in [lo, hi).
        let assemble = |lo: usize, hi: usize, middle: &[Letter]| -> Word {
            let mut v: SmallVec<[Letter; 8]> = SmallVec::new();
            for &l in &ls[..lo] {
                push_merge(&mut v, l);
            }
            for &l in middle {
                push_merge(&mut v, l);
            }
            for &l in &ls[hi..] {
                push_merge(&mut v, l);
            }
            Word(v)
        };
        match redex {
            Redex::Drop(i) => out.push((assemble(i, i + 1, &[]), S::one())),
            Redex::Laurent(i) => {
                let l = ls[i];
                out.push((assemble(i, i + 1, &[lt(with_kind(l.gen, Kind::ExpHalf), -l.exp)]), S::one()));
            }
            Redex::GammaSquare(i) => {
                let l = ls[i];
                let sign = if (l.exp / 2) % 2 == 0 { S::one() } else { S::from_i64(-1) };
                out.push((assemble(i, i + 1, &[lt(l.gen, l.exp % 2)]), sign));
            }
            Redex::Merge(i) => {
                let l = ls[i];
                out.push((assemble(i, i + 2, &[lt(l.gen, l.exp + ls[i + 1].exp)]), S::one()));
            }
            Redex::Swap(i) => self.apply_swap(ls[i], ls[i + 1], &mut |middle, c| {
                out.push((assemble(i, i + 2, middle), c));
            }),
            Redex::Collapse(i, j) => self.apply_collapse(&ls[i..=j], &mut |middle, c| {
                out.push((assemble(i, j + 1, middle), c));
            }),
        }
        out
    }

    fn apply_swap(&self, x: Letter, y: Letter, emit: &mut dyn FnMut(&[Letter], S)) {
        let (m, n) = (x.exp, y.exp);
        if x.gen.segment() != y.gen.segment() {
            return emit(&[y, x], S::one());
        }
        if x.gen.kind == Kind::Gamma {
            let sign = if (m * n) % 2 == 0 { S::one() } else { S::from_i64(-1) };
            return emit(&[y, x], sign);
        }
        let (xg, yg) = (x.gen, y.gen);
        match (xg.kind, yg.kind) {
            // a a† = a† a + 1, and ∂ x = x ∂ + 1
            (Kind::Annihilate, Kind::Create) | (Kind::Derivative, Kind::Position) => {
                emit(&[lt(xg, m - 1), lt(yg, 1), lt(xg, 1), lt(yg, n - 1)], S::one());
                emit(&[lt(xg, m - 1), lt(yg, n - 1)], S::one());
            }
            // A⁰ A⁺ = A⁺ A⁰ + A⁺
            (Kind::Number, Kind::Raise) => {
                emit(&[lt(xg, m - 1), lt(yg, 1), lt(xg, 1), lt(yg, n - 1)], S::one());
                emit(&[lt(xg, m - 1), lt(yg, n)], S::one());
            }
            // E^c A⁺^n = q^{cn/2} A⁺^n E^c
            (Kind::ExpHalf, Kind::Raise) => emit(&[y, x], self.qp().v2_pow(m as i64 * n as i64)),
            // A⁻ A⁺ = q A⁺ A⁻ + 1
            (Kind::Lower, Kind::Raise) => {
                emit(&[lt(xg, m - 1), lt(yg, 1), lt(xg, 1), lt(yg, n - 1)], self.qp().q.clone());
                emit(&[lt(xg, m - 1), lt(yg, n - 1)], S::one());
            }
            // A⁻ A⁰ = A⁰ A⁻ + A⁻
            (Kind::Lower, Kind::Number) => {
                emit(&[lt(xg, m - 1), lt(yg, 1), lt(xg, 1), lt(yg, n - 1)], S::one());
                emit(&[lt(xg, m), lt(yg, n - 1)], S::one());
            }
            // A⁻^m E^c = q^{cm/2} E^c A⁻^m
            (Kind::Lower, Kind::ExpHalf) => emit(&[y, x], self.qp().v2_pow(m as i64 * n as i64)),
            (Kind::ExpHalf, Kind::Number) => emit(&[y, x], S::one()),
            (a, b) => unreachable!("no ordering rule for {a:?} before {b:?}"),
        }
    }

    /// `A⁺^m h(A⁰, E) A⁻^n = A⁺^{m-1} h(A⁰ - 1, q^{-1/2} E) (E² - 1)/(q - 1) A⁻^{n-1}`.
    fn apply_collapse(&self, span: &[Letter], emit: &mut dyn FnMut(&[Letter], S)) {
        let qp = self.qp();
        let raise = span[0];
        let lower = span[span.len() - 1];
        let mut shifted: Vec<(SmallVec<[Letter; 8]>, S)> = vec![(SmallVec::new(), S::one())];
        for &l in &span[1..span.len() - 1] {
            match l.gen.kind {
                Kind::Number => {
                    let b = l.exp;
                    let mut next = Vec::with_capacity(shifted.len() * (b as usize + 1));
                    let mut binom = Rat::one();
                    for k in (0..=b).rev() {
                        // C(b, k) (-1)^{b-k} A⁰^k
                        let sign = if (b - k) % 2 == 0 { 1 } else { -1 };
                        let c = S::from_rat(&(&binom * &Rat::integer(sign)));
                        for (w, wc) in &shifted {
                            let mut w = w.clone();
                            push_merge(&mut w, lt(l.gen, k));
                            next.push((w, wc.field_mul(&c)));
                        }
                        binom = &(&binom * &Rat::integer(k as i64)) / &Rat::integer((b - k + 1) as i64);
                    }
                    shifted = next;
                }
                Kind::ExpHalf => {
                    let c = qp.v2_pow(-(l.exp as i64));
                    for (w, wc) in shifted.iter_mut() {
                        push_merge(w, l);
                        *wc = wc.field_mul(&c);
                    }
                }
                _ => unreachable!("collapse spans only Cartan letters"),
            }
        }
        let e = with_kind(raise.gen, Kind::ExpHalf);
        let minus = qp.collapse.field_neg();
        for (w, wc) in &shifted {
            let mut with_e2: SmallVec<[Letter; 12]> = SmallVec::new();
            with_e2.push(lt(raise.gen, raise.exp - 1));
            with_e2.extend(w.iter().copied());
            let base_len = with_e2.len();
            with_e2.push(lt(e, 2));
            with_e2.push(lt(lower.gen, lower.exp - 1));
            emit(&with_e2, wc.field_mul(&qp.collapse));
            with_e2.remove(base_len);
            emit(&with_e2, wc.field_mul(&minus));
        }
    }

    /// Fully reduce a word to a linear combination of canonical words.
    pub fn normal_form(&self, w: &Word, strategy: Strategy) -> Vec<(Word, S)> {
        let mut pending: FxHashMap<Word, S> = FxHashMap::default();
        let mut stack: Vec<Word> = vec![w.clone()];
        pending.insert(w.clone(), S::one());
        let mut done: FxHashMap<Word, S> = FxHashMap::default();
        while let Some(word) = stack.pop() {
            let Some(c) = pending.remove(&word) else { continue };
            if c.is_zero() {
                continue;
            }
            match self.find_redex(&word, strategy) {
                None => done.entry(word).or_insert_with(S::zero).field_add_assign(&c),
                Some(r) => {
                    for (nw, nc) in self.apply(&word, r) {
                        let add = c.field_mul(&nc);
                        match pending.get_mut(&nw) {
                            Some(slot) => slot.field_add_assign(&add),
                            None => {
                                pending.insert(nw.clone(), add);
                                stack.push(nw);
                            }
                        }
                    }
                }
            }
        }
        let mut out: Vec<(Word, S)> = done.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}
