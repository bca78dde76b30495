//! Backend-neutral construction of operators.
//!
//! Realizations are written once against [`OpBuilder`] and evaluated either
//! symbolically by [`Engine`] or numerically by the Fock oracle.

use std::sync::Arc;

use super::algebra::Algebra;
use super::element::Element;
use super::generator::{Family, GeneratorId, Kind};
use crate::coefficients::Scalar;
use crate::Error;

pub trait OpBuilder<S: Scalar>: Sync {
    type Op: Clone + Send + Sync;

    fn family(&self) -> Family;
    fn modes(&self) -> usize;
    /// The deformation parameter `v = q^{1/4}`; `None` outside the q-family.
    fn v(&self) -> Option<S>;

    fn gen(&self, kind: Kind, mode: usize) -> Result<Self::Op, Error>;
    fn constant(&self, c: S) -> Self::Op;
    fn add(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
    fn mul(&self, a: &Self::Op, b: &Self::Op) -> Self::Op;
    fn scale(&self, a: &Self::Op, c: &S) -> Self::Op;

    fn zero(&self) -> Self::Op {
        self.constant(S::zero())
    }

    fn one(&self) -> Self::Op {
        self.constant(S::one())
    }

    fn neg(&self, a: &Self::Op) -> Self::Op {
        self.scale(a, &S::one().field_neg())
    }

    fn sub(&self, a: &Self::Op, b: &Self::Op) -> Self::Op {
        self.add(a, &self.neg(b))
    }

    fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Self::Op>) -> Self::Op
    where
        Self::Op: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    fn product<'a>(&self, items: impl IntoIterator<Item = &'a Self::Op>) -> Self::Op
    where
        Self::Op: 'a,
    {
        items.into_iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    fn pow(&self, a: &Self::Op, n: u32) -> Self::Op {
        (0..n).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    fn comm(&self, a: &Self::Op, b: &Self::Op) -> Self::Op {
        self.sub(&self.mul(a, b), &self.mul(b, a))
    }

    fn anticomm(&self, a: &Self::Op, b: &Self::Op) -> Self::Op {
        self.add(&self.mul(a, b), &self.mul(b, a))
    }

    /// `λ ab - λ⁻¹ ba`
    fn qcomm(&self, a: &Self::Op, b: &Self::Op, lambda: &S) -> Result<Self::Op, Error> {
        let inv = lambda.field_inv()?;
        Ok(self.sub(&self.scale(&self.mul(a, b), lambda), &self.scale(&self.mul(b, a), &inv)))
    }

    fn v_pow(&self, k: i64) -> Result<S, Error> {
        let v = self.v().ok_or_else(|| Error::InvalidContext("no deformation parameter".into()))?;
        Ok(v.field_pow(k)?)
    }
}

/// Symbolic backend: operators are normalized [`Element`]s.
#[derive(Clone, Debug)]
pub struct Engine<S: Scalar> {
    alg: Arc<Algebra<S>>,
}

impl<S: Scalar> Engine<S> {
    pub fn new(alg: Arc<Algebra<S>>) -> Self {
        Engine { alg }
    }

    pub fn algebra(&self) -> &Arc<Algebra<S>> {
        &self.alg
    }
}

impl<S: Scalar> OpBuilder<S> for Engine<S> {
    type Op = Element<S>;

    fn family(&self) -> Family {
        self.alg.family()
    }

    fn modes(&self) -> usize {
        self.alg.modes()
    }

    fn v(&self) -> Option<S> {
        self.alg.v().cloned()
    }

    fn gen(&self, kind: Kind, mode: usize) -> Result<Element<S>, Error> {
        self.alg.try_gen(GeneratorId::new(kind, mode))
    }

    fn constant(&self, c: S) -> Element<S> {
        self.alg.constant(c)
    }

    fn add(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a + b
    }

    fn sub(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a - b
    }

    fn mul(&self, a: &Element<S>, b: &Element<S>) -> Element<S> {
        a * b
    }

    fn neg(&self, a: &Element<S>) -> Element<S> {
        -a
    }

    fn scale(&self, a: &Element<S>, c: &S) -> Element<S> {
        a.scale(c)
    }
}
