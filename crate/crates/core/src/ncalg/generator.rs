use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// The three operator families shipped with the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Bosonic oscillators `a_μ`, `a_μ†` with `[a_μ, a_ν†] = δ_μν`.
    Weyl,
    /// Coordinates `x_μ`, derivatives `∂_μ` and Clifford generators `γ_μ`
    /// with `{γ_μ, γ_ν} = -2δ_μν`.
    CliffDiff,
    /// q-oscillators `A_i^±`, `A_i^0` plus the group-like `E_i = q^{A_i^0/2}`.
    QOsc,
}

/// Symbol tag of a generator; each kind belongs to exactly one family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Kind {
    /// `a†`
    Create,
    /// `a`
    Annihilate,
    /// `x`
    Position,
    /// `∂`
    Derivative,
    /// `γ`
    Gamma,
    /// `A⁺`
    Raise,
    /// `A⁰`
    Number,
    /// `E = q^{A⁰/2}`
    ExpHalf,
    /// `E⁻¹`; only an input symbol, rewritten to `E^{-1}`.
    ExpHalfInv,
    /// `A⁻`
    Lower,
}

impl Kind {
    pub fn family(self) -> Family {
        match self {
            Kind::Create | Kind::Annihilate => Family::Weyl,
            Kind::Position | Kind::Derivative | Kind::Gamma => Family::CliffDiff,
            _ => Family::QOsc,
        }
    }

    /// Gammas sort after every commuting letter.
    fn class(self) -> u8 {
        u8::from(self == Kind::Gamma)
    }

    /// Canonical position within one mode.
    pub(crate) fn rank(self) -> u8 {
        match self {
            Kind::Create | Kind::Position | Kind::Raise | Kind::Gamma => 0,
            Kind::Annihilate | Kind::Derivative | Kind::Number => 1,
            Kind::ExpHalf => 2,
            Kind::Lower => 3,
            Kind::ExpHalfInv => 4,
        }
    }

    /// Contribution to the creation-minus-annihilation weight of a mode.
    pub fn weight(self) -> i32 {
        match self {
            Kind::Create | Kind::Position | Kind::Raise => 1,
            Kind::Annihilate | Kind::Derivative | Kind::Lower => -1,
            _ => 0,
        }
    }

    /// Whether the letter lowers the polynomial / Fock degree.
    pub fn is_lowering(self) -> bool {
        self.weight() < 0
    }

    fn symbol(self) -> &'static str {
        match self {
            Kind::Create => "ad",
            Kind::Annihilate => "a",
            Kind::Position => "x",
            Kind::Derivative => "d",
            Kind::Gamma => "g",
            Kind::Raise => "Ap",
            Kind::Number => "Az",
            Kind::ExpHalf => "E",
            Kind::ExpHalfInv => "Ei",
            Kind::Lower => "Am",
        }
    }
}

/// A generator: a kind attached to a 1-based mode index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorId {
    pub kind: Kind,
    pub mode: u16,
}

impl GeneratorId {
    pub fn new(kind: Kind, mode: usize) -> Self {
        GeneratorId { kind, mode: mode as u16 }
    }

    pub fn family(self) -> Family {
        self.kind.family()
    }

    fn sort_key(self) -> (u8, u16, u8) {
        (self.kind.class(), self.mode, self.kind.rank())
    }

    /// Letters in different segments commute (up to sign for gammas); the
    /// gammas of all modes share one segment.
    pub(crate) fn segment(self) -> (u8, u16) {
        if self.kind == Kind::Gamma {
            (1, 0)
        } else {
            (0, self.mode)
        }
    }
}

impl Ord for GeneratorId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

impl PartialOrd for GeneratorId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.mode)
    }
}

/// A generator raised to an integer power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GeneratorId,
    pub exp: i32,
}

impl Letter {
    pub fn new(gen: GeneratorId, exp: i32) -> Self {
        Letter { gen, exp }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 1 {
            write!(f, "{}", self.gen)
        } else {
            write!(f, "{}^{}", self.gen, self.exp)
        }
    }
}

/// An ordered product of letters. The empty word is the identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub(crate) SmallVec<[Letter; 8]>);

impl Word {
    pub fn identity() -> Self {
        Word(SmallVec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        Word(letters.into_iter().collect())
    }

    pub fn single(gen: GeneratorId, exp: i32) -> Self {
        let mut w = SmallVec::new();
        w.push(Letter::new(gen, exp));
        Word(w)
    }

    /// Concatenate and merge equal adjacent generators at the seam.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            push_merge(&mut out, l);
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total number of lowering letters (`a`, `∂`, `A⁻`).
    pub fn lowering_degree(&self) -> u32 {
        self.0.iter().filter(|l| l.gen.kind.is_lowering()).map(|l| l.exp.max(0) as u32).sum()
    }

    /// Creation-minus-annihilation weight of one mode.
    pub fn mode_weight(&self, mode: u16) -> i32 {
        self.0.iter().filter(|l| l.gen.mode == mode).map(|l| l.gen.kind.weight() * l.exp).sum()
    }
}

pub(crate) fn push_merge(out: &mut SmallVec<[Letter; 8]>, l: Letter) {
    if l.exp == 0 {
        return;
    }
    if let Some(last) = out.last_mut() {
        if last.gen == l.gen {
            last.exp += l.exp;
            if last.exp == 0 {
                out.pop();
            }
            return;
        }
    }
    out.push(l);
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
