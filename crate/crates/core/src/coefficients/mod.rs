//! Exact scalar fields used as coefficients of noncommutative elements.
//!
//! Three fields carry coefficients:
//!
//! * [`Rat`]: arbitrary precision rationals,
//! * [`GaussRat`]: the Gaussian rationals `Q(i)`,
//! * [`RatFunc`]: rational functions in one formal variable `v`, where `v`
//!   stands for `q^{1/4}` so that every `q`-power with exponent in `Z/4` is a
//!   plain Laurent monomial in `v`.
//!
//! All arithmetic is exact and every value is kept in canonical form, so
//! equality is structural. [`Zp`], residues modulo a 61-bit prime, is only
//! used to sample identities before they are confirmed exactly.

mod gauss;
mod poly;
mod rat;
mod ratfunc;
mod zp;

use std::fmt;

pub use gauss::GaussRat;
pub use poly::Poly;
pub use rat::Rat;
pub use ratfunc::RatFunc;
pub use zp::Zp;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at v = {0}")]
    Pole(String),
}

/// A commutative field of exact scalars.
///
/// The method names carry a `field_` prefix so that they never collide with
/// the `std::ops` implementations of the concrete types.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn field_add(&self, other: &Self) -> Self;
    fn field_sub(&self, other: &Self) -> Self;
    fn field_mul(&self, other: &Self) -> Self;
    fn field_neg(&self) -> Self;
    fn field_inv(&self) -> Result<Self, CoeffError>;
    fn from_i64(n: i64) -> Self;
    fn from_rat(r: &Rat) -> Self;

    fn field_add_assign(&mut self, other: &Self) {
        *self = self.field_add(other);
    }

    fn field_div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.field_mul(&other.field_inv()?))
    }

    fn field_pow(&self, exp: i64) -> Result<Self, CoeffError> {
        let base = if exp < 0 { self.field_inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.field_mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.field_mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Whether the textual form needs parentheses when used as a factor.
    fn is_atomic(&self) -> bool {
        let s = self.to_string();
        !s[1..].contains(['+', '-', '/', ' ', '*'])
    }
}

/// Scalars that can be evaluated at a rational value `v = v0` of the formal
/// variable. Plain rationals evaluate to themselves.
pub trait Specialize: Scalar {
    fn specialize(&self, v0: &Rat) -> Result<Rat, CoeffError>;

    /// Image modulo the sampling prime at `v = v0`.
    fn sample(&self, v0: Zp) -> Result<Zp, CoeffError>;
}

impl Specialize for Rat {
    fn specialize(&self, _v0: &Rat) -> Result<Rat, CoeffError> {
        Ok(self.clone())
    }

    fn sample(&self, _v0: Zp) -> Result<Zp, CoeffError> {
        Zp::try_from_rat(self)
    }
}

impl Specialize for RatFunc {
    fn specialize(&self, v0: &Rat) -> Result<Rat, CoeffError> {
        RatFunc::specialize(self, v0)
    }

    fn sample(&self, v0: Zp) -> Result<Zp, CoeffError> {
        let eval = |p: &Poly| -> Result<Zp, CoeffError> {
            let mut acc = Zp::zero();
            for c in p.coeffs().iter().rev() {
                acc = acc.field_mul(&v0).field_add(&Zp::try_from_rat(c)?);
            }
            Ok(acc)
        };
        let d = eval(self.denom())?;
        if d.is_zero() {
            return Err(CoeffError::Pole(format!("{} mod p", v0)));
        }
        Ok(eval(self.numer())?.field_mul(&d.field_inv()?))
    }
}
