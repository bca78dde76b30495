use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::generator::{Family, GeneratorId, Kind, Letter, Word};
use super::rewrite::{QParams, RelationSet, Strategy, Terms};
use crate::coefficients::{Rat, Scalar, Specialize, Zp};
use crate::Error;

/// Index of an interned word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordId(pub(crate) u32);

#[derive(Default)]
struct Interner {
    ids: FxHashMap<Word, WordId>,
    words: Vec<Word>,
}

type SegmentLetters = SmallVec<[Letter; 4]>;
type SegmentProduct<S> = Arc<[(SegmentLetters, S)]>;

/// An algebra context: family, number of modes, rewrite rules and the shared
/// word table. Elements hold an `Arc` to their algebra; operations between
/// elements of different contexts are rejected.
pub struct Algebra<S: Scalar> {
    family: Family,
    modes: usize,
    relations: RelationSet<S>,
    interner: RwLock<Interner>,
    qcache: RwLock<FxHashMap<(SegmentLetters, SegmentLetters), SegmentProduct<S>>>,
    products: AtomicU64,
}

impl<S: Scalar> std::fmt::Debug for Algebra<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Algebra").field("family", &self.family).field("modes", &self.modes).finish()
    }
}

impl<S: Specialize> Algebra<S> {
    /// The same algebra with every coefficient evaluated at `v = v0`.
    pub fn specialized(&self, v0: &Rat) -> Result<Arc<Algebra<Rat>>, Error> {
        Ok(match self.family {
            Family::Weyl => Algebra::weyl(self.modes),
            Family::CliffDiff => Algebra::cliffdiff(self.modes),
            Family::QOsc => {
                let v = self.v().expect("q-oscillator algebra carries v").specialize(v0)?;
                Algebra::qosc(self.modes, v)?
            }
        })
    }

    /// The same algebra reduced modulo the sampling prime at `v = v0`.
    pub fn sampled(&self, v0: Zp) -> Result<Arc<Algebra<Zp>>, Error> {
        Ok(match self.family {
            Family::Weyl => Algebra::weyl(self.modes),
            Family::CliffDiff => Algebra::cliffdiff(self.modes),
            Family::QOsc => {
                let v = self.v().expect("q-oscillator algebra carries v").sample(v0)?;
                Algebra::qosc(self.modes, v)?
            }
        })
    }
}

impl<S: Scalar> Algebra<S> {
    fn build(family: Family, modes: usize, q: Option<QParams<S>>) -> Arc<Self> {
        Arc::new(Algebra {
            family,
            modes,
            relations: RelationSet::new(family, q),
            interner: RwLock::new(Interner::default()),
            qcache: RwLock::new(FxHashMap::default()),
            products: AtomicU64::new(0),
        })
    }

    /// Oscillator algebra on `modes` modes.
    pub fn weyl(modes: usize) -> Arc<Self> {
        Self::build(Family::Weyl, modes, None)
    }

    /// Clifford ⊗ differential-operator algebra in `dim` dimensions.
    pub fn cliffdiff(dim: usize) -> Arc<Self> {
        Self::build(Family::CliffDiff, dim, None)
    }

    /// q-oscillator algebra on `modes` modes with deformation `v = q^{1/4}`.
    /// Fails when `v = 0` or `q = 1`.
    pub fn qosc(modes: usize, v: S) -> Result<Arc<Self>, Error> {
        Ok(Self::build(Family::QOsc, modes, Some(QParams::new(v)?)))
    }

    /// Monomial pairs multiplied in this algebra so far.
    pub fn monomial_products(&self) -> u64 {
        self.products.load(Ordering::Relaxed)
    }

    pub(crate) fn count_products(&self, n: usize) {
        self.products.fetch_add(n as u64, Ordering::Relaxed);
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn relations(&self) -> &RelationSet<S> {
        &self.relations
    }

    /// The deformation parameter `v = q^{1/4}` of a q-oscillator algebra.
    pub fn v(&self) -> Option<&S> {
        self.relations.q.as_ref().map(|q| &q.v)
    }

    /// Number of distinct words interned so far.
    pub fn interned_words(&self) -> usize {
        self.interner.read().words.len()
    }

    pub fn check_generator(&self, g: GeneratorId) -> Result<(), Error> {
        if g.family() != self.family {
            return Err(Error::InvalidIndex(format!("{g} is not a {:?} generator", self.family)));
        }
        if g.mode == 0 || g.mode as usize > self.modes {
            return Err(Error::InvalidIndex(format!("mode {} outside 1..={}", g.mode, self.modes)));
        }
        Ok(())
    }

    pub(crate) fn intern(&self, w: &Word) -> WordId {
        if let Some(&id) = self.interner.read().ids.get(w) {
            return id;
        }
        let mut g = self.interner.write();
        if let Some(&id) = g.ids.get(w) {
            return id;
        }
        let id = WordId(g.words.len() as u32);
        g.words.push(w.clone());
        g.ids.insert(w.clone(), id);
        id
    }

    /// Intern many words while taking the write lock at most once.
    pub(crate) fn intern_all(&self, words: Vec<Word>) -> Vec<WordId> {
        let mut out = Vec::with_capacity(words.len());
        let mut missing = Vec::new();
        {
            let g = self.interner.read();
            for (i, w) in words.iter().enumerate() {
                match g.ids.get(w) {
                    Some(&id) => out.push(id),
                    None => {
                        out.push(WordId(u32::MAX));
                        missing.push(i);
                    }
                }
            }
        }
        if !missing.is_empty() {
            let mut g = self.interner.write();
            for i in missing {
                let w = &words[i];
                let id = match g.ids.get(w) {
                    Some(&id) => id,
                    None => {
                        let id = WordId(g.words.len() as u32);
                        g.words.push(w.clone());
                        g.ids.insert(w.clone(), id);
                        id
                    }
                };
                out[i] = id;
            }
        }
        out
    }

    pub(crate) fn word(&self, id: WordId) -> Word {
        self.interner.read().words[id.0 as usize].clone()
    }

    pub(crate) fn words_of<'a>(&self, ids: impl Iterator<Item = &'a WordId>) -> Vec<Word> {
        let g = self.interner.read();
        ids.map(|id| g.words[id.0 as usize].clone()).collect()
    }

    /// Reduce an arbitrary word with the given strategy.
    pub fn normal_form(&self, w: &Word, strategy: Strategy) -> Vec<(Word, S)> {
        if self.relations.is_canonical(w) {
            return vec![(w.clone(), S::one())];
        }
        self.relations.normal_form(w, strategy)
    }

    /// Product of two canonical words, expanded into canonical words.
    ///
    /// Segments (one per mode, plus one shared by all gammas) are multiplied
    /// independently and the results tensored back together.
    pub fn mul_canonical(&self, a: &Word, b: &Word) -> Terms<S> {
        let (la, lb) = (a.letters(), b.letters());
        let mut acc: Terms<S> = SmallVec::new();
        acc.push((Word::identity(), S::one()));
        let (mut i, mut j) = (0, 0);
        while i < la.len() || j < lb.len() {
            let ka = la.get(i).map(|l| l.gen.segment());
            let kb = lb.get(j).map(|l| l.gen.segment());
            let take_a = match (ka, kb) {
                (Some(x), Some(y)) => x <= y,
                (Some(_), None) => true,
                _ => false,
            };
            let take_b = match (ka, kb) {
                (Some(x), Some(y)) => y <= x,
                (None, Some(_)) => true,
                _ => false,
            };
            let seg = if take_a { ka } else { kb }.unwrap();
            let i0 = i;
            if take_a {
                while i < la.len() && la[i].gen.segment() == seg {
                    i += 1;
                }
            }
            let j0 = j;
            if take_b {
                while j < lb.len() && lb[j].gen.segment() == seg {
                    j += 1;
                }
            }
            let (sa, sb) = (&la[i0..i], &lb[j0..j]);
            if sa.is_empty() || sb.is_empty() {
                let part = if sa.is_empty() { sb } else { sa };
                for (w, _) in acc.iter_mut() {
                    w.0.extend_from_slice(part);
                }
                continue;
            }
            let prod = self.mul_segment(sa, sb);
            match prod.len() {
                0 => return SmallVec::new(),
                1 => {
                    let (letters, c) = &prod[0];
                    for (w, wc) in acc.iter_mut() {
                        w.0.extend_from_slice(letters);
                        if !c.is_one() {
                            *wc = wc.field_mul(c);
                        }
                    }
                }
                _ => {
                    let mut next: Terms<S> = SmallVec::with_capacity(acc.len() * prod.len());
                    for (w, wc) in &acc {
                        for (letters, c) in prod.iter() {
                            let mut nw = w.clone();
                            nw.0.extend_from_slice(letters);
                            next.push((nw, wc.field_mul(c)));
                        }
                    }
                    acc = next;
                }
            }
        }
        acc
    }

    fn mul_segment(&self, a: &[Letter], b: &[Letter]) -> SegmentProduct<S> {
        match (self.family, a[0].gen.kind) {
            (_, Kind::Gamma) => gamma_product(a, b),
            (Family::Weyl, _) | (Family::CliffDiff, _) => {
                ladder_product(a, b).into_iter().map(|(l, c)| (l, S::from_rat(&c))).collect()
            }
            (Family::QOsc, _) => self.qosc_segment(a, b),
        }
    }

    fn qosc_segment(&self, a: &[Letter], b: &[Letter]) -> SegmentProduct<S> {
        let mode = a[0].gen.mode;
        let strip = |ls: &[Letter]| -> SegmentLetters {
            ls.iter().map(|l| Letter::new(GeneratorId { kind: l.gen.kind, mode: 1 }, l.exp)).collect()
        };
        let key = (strip(a), strip(b));
        let cached = self.qcache.read().get(&key).cloned();
        let base = match cached {
            Some(p) => p,
            None => {
                let w = Word::from_letters(key.0.iter().chain(key.1.iter()).copied());
                let p: SegmentProduct<S> = self
                    .relations
                    .normal_form(&w, Strategy::Leftmost)
                    .into_iter()
                    .map(|(w, c)| (w.letters().iter().copied().collect(), c))
                    .collect();
                self.qcache.write().insert(key, p.clone());
                p
            }
        };
        if mode == 1 {
            return base;
        }
        base.iter()
            .map(|(ls, c)| {
                (ls.iter().map(|l| Letter::new(GeneratorId { kind: l.gen.kind, mode }, l.exp)).collect(), c.clone())
            })
            .collect()
    }
}

/// `(c^m d^n)(c^p d^r) = Σ_k C(n,k) C(p,k) k! c^{m+p-k} d^{n+r-k}` for a
/// raising letter `c` and a lowering letter `d` with `[d, c] = 1`.
fn ladder_product(a: &[Letter], b: &[Letter]) -> Vec<(SegmentLetters, Rat)> {
    let split = |ls: &[Letter]| -> (Option<GeneratorId>, i32, Option<GeneratorId>, i32) {
        let (mut up, mut m, mut down, mut n) = (None, 0, None, 0);
        for l in ls {
            if l.gen.kind.weight() > 0 {
                up = Some(l.gen);
                m = l.exp;
            } else {
                down = Some(l.gen);
                n = l.exp;
            }
        }
        (up, m, down, n)
    };
    let (ua, m, da, n) = split(a);
    let (ub, p, db, r) = split(b);
    let up = ua.or(ub);
    let down = da.or(db);
    let mut out = Vec::new();
    let mut coeff = Rat::one();
    for k in 0..=n.min(p) {
        let mut ls = SegmentLetters::new();
        if m + p - k > 0 {
            ls.push(Letter::new(up.unwrap(), m + p - k));
        }
        if n + r - k > 0 {
            ls.push(Letter::new(down.unwrap(), n + r - k));
        }
        out.push((ls, coeff.clone()));
        coeff = &(&coeff * &Rat::integer(((n - k) * (p - k)) as i64)) / &Rat::integer((k + 1) as i64);
    }
    out
}

/// Product of two sorted gamma monomials with `γ_μ² = -1`.
fn gamma_product<S: Scalar>(a: &[Letter], b: &[Letter]) -> SegmentProduct<S> {
    let mut negative = false;
    let mut out = SegmentLetters::new();
    // Move each letter of `b` leftwards into place.
    let mut left: SegmentLetters = a.iter().copied().collect();
    for &g in b {
        let greater = left.iter().filter(|l| l.gen.mode > g.gen.mode).count();
        if greater % 2 == 1 {
            negative = !negative;
        }
        match left.iter().position(|l| l.gen.mode == g.gen.mode) {
            Some(pos) => {
                left.remove(pos);
                negative = !negative;
            }
            None => {
                let pos = left.iter().position(|l| l.gen.mode > g.gen.mode).unwrap_or(left.len());
                left.insert(pos, g);
            }
        }
    }
    out.extend(left);
    let c = if negative { S::from_i64(-1) } else { S::one() };
    Arc::from(vec![(out, c)])
}
