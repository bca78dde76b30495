use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{CoeffError, Rat, Scalar};

/// The Mersenne prime `2^61 - 1`.
pub const P: u64 = (1 << 61) - 1;

/// Residues modulo [`P`], used to sample exact identities cheaply before they
/// are confirmed over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Zp(u64);

impl Zp {
    pub fn new(x: u64) -> Self {
        Zp(x % P)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn reduce(x: u128) -> u64 {
        let lo = (x as u64) & P;
        let hi = (x >> 61) as u64;
        let mut s = lo + (hi & P) + (hi >> 61);
        while s >= P {
            s -= P;
        }
        s
    }

    fn from_bigint(n: &BigInt) -> Zp {
        let r = (n % BigInt::from(P)).to_i64().expect("residue fits");
        Zp::from_i64(r)
    }

    /// Image of a rational; fails when the denominator is divisible by `P`.
    pub fn try_from_rat(r: &Rat) -> Result<Zp, CoeffError> {
        let d = Zp::from_bigint(&r.denom());
        Ok(Zp::from_bigint(&r.numer()).field_mul(&d.field_inv()?))
    }
}

impl fmt::Display for Zp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for Zp {
    fn zero() -> Self {
        Zp(0)
    }

    fn one() -> Self {
        Zp(1)
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn is_one(&self) -> bool {
        self.0 == 1
    }

    fn field_add(&self, o: &Self) -> Self {
        let s = self.0 + o.0;
        Zp(if s >= P { s - P } else { s })
    }

    fn field_sub(&self, o: &Self) -> Self {
        Zp(if self.0 >= o.0 { self.0 - o.0 } else { self.0 + P - o.0 })
    }

    fn field_mul(&self, o: &Self) -> Self {
        Zp(Zp::reduce(self.0 as u128 * o.0 as u128))
    }

    fn field_neg(&self) -> Self {
        Zp(if self.0 == 0 { 0 } else { P - self.0 })
    }

    fn field_inv(&self) -> Result<Self, CoeffError> {
        if self.0 == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        self.field_pow(P as i64 - 2)
    }

    fn from_i64(n: i64) -> Self {
        let r = n.rem_euclid(P as i64);
        Zp(r as u64)
    }

    fn from_rat(r: &Rat) -> Self {
        Zp::try_from_rat(r).expect("denominator divisible by the sampling prime")
    }

    fn is_atomic(&self) -> bool {
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_wrap() {
        let x = Zp::new(123456789);
        assert!(x.field_mul(&x.field_inv().unwrap()).is_one());
        assert_eq!(Zp::from_i64(-1).value(), P - 1);
        assert_eq!(Zp::new(P - 1).field_add(&Zp::new(5)), Zp::new(4));
        let half = Zp::from_rat(&Rat::new(1, 2).unwrap());
        assert_eq!(half.field_add(&half), Zp::one());
    }
}
