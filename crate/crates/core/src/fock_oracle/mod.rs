//! Finite-degree representation oracle.
//!
//! Each family acts faithfully on a space of polynomials: oscillators by
//! multiplication and differentiation, the Clifford ⊗ differential family on
//! polynomials ⊗ spinors, q-oscillators on the weight basis `|m⟩`. Every
//! letter maps a basis state to a single state times a scalar, so operators
//! are applied exactly, without truncating images of high degree.
//!
//! Identities can be evaluated either from a normalized [`Element`] or, more
//! independently, from an expression tree built by [`OracleBuilder`] with the
//! same realization code that feeds the engine.

mod tree;

use std::fmt;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use crate::coefficients::{GaussRat, Scalar};
use crate::ncalg::{Element, Family, Kind, Letter};
use crate::Error;

pub use tree::{Evaluator, Node, OracleBuilder};

/// Excess of the truncation degree over the lowering degree.
pub const MARGIN: usize = 2;

/// Basis state: one exponent per mode plus a spinor index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub exps: SmallVec<[u16; 8]>,
    pub spin: u16,
}

impl State {
    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())?;
        if self.spin > 0 {
            write!(f, "⊗s{}", self.spin)?;
        }
        Ok(())
    }
}

/// Sparse vector over basis states.
pub type Vector<T> = FxHashMap<State, T>;

pub(crate) fn add_term<T: Scalar>(acc: &mut Vector<T>, s: &State, y: T) {
    match acc.get_mut(s) {
        Some(slot) => {
            *slot = slot.field_add(&y);
            if slot.is_zero() {
                acc.remove(s);
            }
        }
        None => {
            if !y.is_zero() {
                acc.insert(s.clone(), y);
            }
        }
    }
}

pub(crate) fn axpy<T: Scalar>(acc: &mut Vector<T>, c: &T, v: &Vector<T>) {
    for (s, x) in v {
        add_term(acc, s, c.field_mul(x));
    }
}

/// Concrete action of one family's generators.
#[derive(Clone, Debug)]
pub struct Model<T> {
    family: Family,
    modes: usize,
    v: Option<T>,
    /// `q = v⁴`
    q: Option<T>,
    /// Column `s` of `γ_μ` is `(image, coefficient)`.
    gammas: Vec<Vec<(u16, T)>>,
}

impl<T: Scalar> Model<T> {
    pub fn weyl(modes: usize) -> Self {
        Model { family: Family::Weyl, modes, v: None, q: None, gammas: Vec::new() }
    }

    /// q-oscillators at `v = v0`; `E|m⟩ = v0^{2m}|m⟩`.
    pub fn qosc(modes: usize, v0: T) -> Result<Self, Error> {
        let q = v0.field_pow(4)?;
        if v0.is_zero() || q.is_one() {
            return Err(Error::InvalidContext(format!("degenerate deformation v = {v0}")));
        }
        Ok(Model { family: Family::QOsc, modes, v: Some(v0), q: Some(q), gammas: Vec::new() })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn v(&self) -> Option<&T> {
        self.v.as_ref()
    }

    pub fn spinor_dim(&self) -> usize {
        self.gammas.first().map_or(1, Vec::len)
    }

    /// `[m]_q = 1 + q + ⋯ + q^{m-1}`
    fn q_number(&self, m: u16) -> T {
        let q = self.q.as_ref().expect("q-oscillator model");
        let mut acc = T::zero();
        let mut p = T::one();
        for _ in 0..m {
            acc = acc.field_add(&p);
            p = p.field_mul(q);
        }
        acc
    }

    /// Image of `state` under one letter, or `None` when it vanishes.
    pub fn act(&self, l: Letter, state: &State) -> Option<(State, T)> {
        let mut s = state.clone();
        let mut c = T::one();
        let i = l.gen.mode as usize - 1;
        let times = l.exp.unsigned_abs();
        match l.gen.kind {
            Kind::Create | Kind::Position | Kind::Raise => s.exps[i] += times as u16,
            Kind::Annihilate | Kind::Derivative => {
                for _ in 0..times {
                    if s.exps[i] == 0 {
                        return None;
                    }
                    c = c.field_mul(&T::from_i64(s.exps[i] as i64));
                    s.exps[i] -= 1;
                }
            }
            Kind::Lower => {
                for _ in 0..times {
                    if s.exps[i] == 0 {
                        return None;
                    }
                    c = c.field_mul(&self.q_number(s.exps[i]));
                    s.exps[i] -= 1;
                }
            }
            Kind::Number => c = T::from_i64(s.exps[i] as i64).field_pow(l.exp as i64).ok()?,
            Kind::ExpHalf | Kind::ExpHalfInv => {
                let sign = if l.gen.kind == Kind::ExpHalf { 1 } else { -1 };
                let v = self.v.as_ref().expect("q-oscillator model");
                c = v.field_pow(sign * 2 * s.exps[i] as i64 * l.exp as i64).ok()?;
            }
            Kind::Gamma => {
                for _ in 0..times {
                    let (t, x) = &self.gammas[i][s.spin as usize];
                    s.spin = *t;
                    c = c.field_mul(x);
                }
            }
        }
        Some((s, c))
    }

    /// Apply a word (rightmost letter first).
    pub fn act_word<'a>(&self, letters: impl DoubleEndedIterator<Item = &'a Letter>, state: &State) -> Option<(State, T)> {
        let mut s = state.clone();
        let mut c = T::one();
        for l in letters.rev() {
            let (t, x) = self.act(*l, &s)?;
            s = t;
            c = c.field_mul(&x);
        }
        Some((s, c))
    }

    /// Apply a normalized element to a vector.
    pub fn apply_element(&self, e: &Element<T>, v: &Vector<T>) -> Vector<T> {
        let mut out = Vector::default();
        let terms = e.terms();
        for (s, x) in v {
            for (w, c) in &terms {
                if let Some((t, y)) = self.act_word(w.letters().iter(), s) {
                    add_term(&mut out, &t, x.field_mul(c).field_mul(&y));
                }
            }
        }
        out
    }
}

impl Model<GaussRat> {
    /// Clifford ⊗ differential operators in `dim` dimensions. `γ_μ = iΓ_μ`
    /// with Hermitian `Γ_μ` built from Pauli matrices on `⌈dim/2⌉` qubits.
    pub fn cliffdiff(dim: usize) -> Self {
        let qubits = dim.div_ceil(2);
        let size = 1usize << qubits;
        let i = GaussRat::i();
        let one = GaussRat::one();
        // Pauli columns: σx|b⟩ = |1-b⟩, σy|b⟩ = ±i|1-b⟩, σz|b⟩ = (-1)^b|b⟩.
        let pauli = |p: u8, b: usize| -> (usize, GaussRat) {
            match p {
                1 => (1 - b, one.clone()),
                2 => (1 - b, if b == 0 { i.clone() } else { i.field_neg() }),
                _ => (b, if b == 0 { one.clone() } else { one.field_neg() }),
            }
        };
        let gammas = (0..dim)
            .map(|mu| {
                // Γ_{2k+1} = σz^{⊗k} ⊗ σx ⊗ 1, Γ_{2k+2} = σz^{⊗k} ⊗ σy ⊗ 1.
                let k = mu / 2;
                let factors: Vec<u8> = (0..qubits).map(|j| if j < k { 3 } else if j == k { 1 + (mu % 2) as u8 } else { 0 }).collect();
                (0..size)
                    .map(|s| {
                        let mut t = 0usize;
                        let mut c = i.clone();
                        for (j, &p) in factors.iter().enumerate() {
                            let b = (s >> j) & 1;
                            let (b2, x) = if p == 0 { (b, one.clone()) } else { pauli(p, b) };
                            t |= b2 << j;
                            c = c.field_mul(&x);
                        }
                        (t as u16, c)
                    })
                    .collect()
            })
            .collect();
        Model { family: Family::CliffDiff, modes: dim, v: None, q: None, gammas }
    }
}

/// All states of total polynomial degree `≤ degree`, in a fixed order.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    family: Family,
    modes: usize,
    degree: usize,
    states: Vec<State>,
}

impl GradedBasis {
    pub fn new<T: Scalar>(model: &Model<T>, degree: usize) -> Self {
        let mut monos: Vec<SmallVec<[u16; 8]>> = vec![SmallVec::from_elem(0, model.modes)];
        let mut frontier = monos.clone();
        for _ in 0..degree {
            let mut next = Vec::new();
            for m in &frontier {
                let start = m.iter().rposition(|&e| e > 0).unwrap_or(0);
                for g in start..model.modes {
                    let mut e = m.clone();
                    e[g] += 1;
                    next.push(e);
                }
            }
            monos.extend(next.iter().cloned());
            frontier = next;
        }
        let states = monos
            .into_iter()
            .flat_map(|exps| (0..model.spinor_dim() as u16).map(move |spin| State { exps: exps.clone(), spin }))
            .collect();
        GradedBasis { family: model.family, modes: model.modes, degree, states }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

/// Exact action on a [`GradedBasis`]: column `j` is the image of state `j`.
/// Images may leave the basis; such rows are kept so nothing is truncated.
#[derive(Clone, Debug)]
pub struct ExactMatrix<T> {
    pub columns: Vec<Vector<T>>,
    pub basis_degree: usize,
}

impl<T: Scalar> ExactMatrix<T> {
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    /// Rows whose state lies above the basis degree.
    pub fn overflow_rows(&self) -> usize {
        let mut rows: Vec<&State> = self.columns.iter().flat_map(|c| c.keys()).filter(|s| s.degree() > self.basis_degree).collect();
        rows.sort();
        rows.dedup();
        rows.len()
    }
}

/// Margin-rule degree for a normalized element: its lowering degree plus
/// [`MARGIN`].
pub fn required_degree<T: Scalar>(e: &Element<T>) -> usize {
    e.lowering_degree() as usize + MARGIN
}

fn check_margin(required: usize, given: usize) -> Result<(), Error> {
    if given < required {
        Err(Error::Margin { required, given })
    } else {
        Ok(())
    }
}

fn check_family<T: Scalar>(model: &Model<T>, basis: &GradedBasis, family: Family) -> Result<(), Error> {
    if model.family != family || basis.family != family || basis.modes != model.modes {
        return Err(Error::InvalidContext(format!(
            "oracle model {:?}/{} does not match {:?}/{}",
            model.family, model.modes, family, basis.modes
        )));
    }
    Ok(())
}

/// Matrix of a normalized element on `basis`.
pub fn matrix_of<T: Scalar>(e: &Element<T>, model: &Model<T>, basis: &GradedBasis) -> Result<ExactMatrix<T>, Error> {
    check_family(model, basis, e.family())?;
    check_margin(required_degree(e), basis.degree)?;
    let e = e.normalize();
    let columns = basis
        .states
        .iter()
        .map(|s| {
            let mut v = Vector::default();
            v.insert(s.clone(), T::one());
            model.apply_element(&e, &v)
        })
        .collect();
    Ok(ExactMatrix { columns, basis_degree: basis.degree })
}

pub fn oracle_is_zero<T: Scalar>(e: &Element<T>, model: &Model<T>, basis: &GradedBasis) -> Result<bool, Error> {
    Ok(matrix_of(e, model, basis)?.is_zero())
}

/// Zero test of an expression tree at its margin-rule degree, or at
/// `degree` when given (which must not be below the rule).
pub fn tree_is_zero<T: Scalar>(node: &Node<T>, model: &Model<T>, degree: Option<usize>) -> Result<TreeVerdict, Error> {
    let required = node.lowering_bound() as usize + MARGIN;
    let degree = degree.unwrap_or(required);
    check_margin(required, degree)?;
    let basis = GradedBasis::new(model, degree);
    let mut ev = Evaluator::new(model);
    let mut nonzero_columns = 0;
    for s in basis.states() {
        if !ev.apply_state(node, s).is_empty() {
            nonzero_columns += 1;
        }
    }
    Ok(TreeVerdict { is_zero: nonzero_columns == 0, degree, basis_size: basis.len(), nonzero_columns })
}

/// Outcome of [`tree_is_zero`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeVerdict {
    pub is_zero: bool,
    pub degree: usize,
    pub basis_size: usize,
    pub nonzero_columns: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{Rat, RatFunc};
    use crate::ncalg::{Algebra, GeneratorId};

    #[test]
    fn number_operator_is_diagonal() {
        let alg = Algebra::<Rat>::weyl(1);
        let n = &alg.gen(Kind::Create, 1) * &alg.gen(Kind::Annihilate, 1);
        let model = Model::weyl(1);
        let basis = GradedBasis::new(&model, 3);
        let m = matrix_of(&n, &model, &basis).unwrap();
        for (j, s) in basis.states().iter().enumerate() {
            let expect = s.degree() as i64;
            assert_eq!(m.columns[j].get(s).cloned().unwrap_or_else(Rat::zero), Rat::integer(expect));
            assert!(m.columns[j].len() <= 1);
        }
    }

    #[test]
    fn q_number_diagonal() {
        let v0 = Rat::new(3, 2).unwrap();
        let model = Model::qosc(1, v0.clone()).unwrap();
        let alg = Algebra::qosc(1, RatFunc::v()).unwrap();
        let e = &alg.gen(Kind::Raise, 1) * &alg.gen(Kind::Lower, 1);
        let ralg = alg.specialized(&v0).unwrap();
        let e0 = e.specialize(&ralg, &v0).unwrap();
        let basis = GradedBasis::new(&model, 4);
        let m = matrix_of(&e0, &model, &basis).unwrap();
        let q = v0.field_pow(4).unwrap();
        for (j, s) in basis.states().iter().enumerate() {
            let k = s.degree() as i64;
            let expect = q.field_pow(k).unwrap().field_sub(&Rat::one()).field_div(&q.field_sub(&Rat::one())).unwrap();
            assert_eq!(m.columns[j].get(s).cloned().unwrap_or_else(Rat::zero), expect, "m = {k}");
        }
    }

    #[test]
    fn gammas_satisfy_clifford() {
        for dim in [2, 5, 6] {
            let model = Model::cliffdiff(dim);
            let basis = GradedBasis::new(&model, 0);
            for mu in 1..=dim {
                for nu in mu..=dim {
                    // the unnormalized words γ_μγ_ν + γ_νγ_μ
                    for s in basis.states() {
                        let mut acc = Vector::default();
                        for (a, b) in [(mu, nu), (nu, mu)] {
                            let l = [Letter::new(GeneratorId::new(Kind::Gamma, a), 1), Letter::new(GeneratorId::new(Kind::Gamma, b), 1)];
                            let (t, c) = model.act_word(l.iter(), s).unwrap();
                            add_term(&mut acc, &t, c);
                        }
                        let mut expect = Vector::default();
                        if mu == nu {
                            expect.insert(s.clone(), GaussRat::from_i64(-2));
                        }
                        assert_eq!(acc, expect, "dim {dim}, ({mu},{nu})");
                    }
                }
            }
        }
    }

    #[test]
    fn margin_is_enforced() {
        let alg = Algebra::<Rat>::weyl(2);
        let a = alg.gen(Kind::Annihilate, 1).pow(3);
        let model = Model::weyl(2);
        let basis = GradedBasis::new(&model, 4);
        assert!(matches!(matrix_of(&a, &model, &basis), Err(Error::Margin { required: 5, given: 4 })));
        assert!(!oracle_is_zero(&alg.one(), &model, &basis).unwrap());
    }
}
