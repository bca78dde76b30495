use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CoeffError, Scalar};

/// An exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in an `i64` are stored inline;
/// anything larger spills to a `BigRational`. The split is canonical: a value
/// is `Small` exactly when it fits, so derived equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rat(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(i64, i64),
    Big(BigRational),
}

impl Rat {
    pub fn new(num: i64, den: i64) -> Result<Self, CoeffError> {
        if den == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::from_i128(num as i128, den as i128))
    }

    pub fn integer(n: i64) -> Self {
        Rat(Repr::Small(n, 1))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_big(BigRational::from_integer(n))
    }

    fn from_i128(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rat(Repr::Small(n, d)),
            _ => Rat(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(r) => r.denom().clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(r) => r.is_integer(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
        }
    }

    pub fn abs(&self) -> Rat {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn inv(&self) -> Result<Rat, CoeffError> {
        match &self.0 {
            Repr::Small(0, _) => Err(CoeffError::DivisionByZero),
            Repr::Small(n, d) => Ok(Self::from_i128(*d as i128, *n as i128)),
            Repr::Big(r) => Ok(Self::from_big(r.recip())),
        }
    }

    pub fn pow(&self, exp: i32) -> Result<Rat, CoeffError> {
        Scalar::field_pow(self, exp as i64)
    }
}

impl Scalar for Rat {
    fn zero() -> Self {
        Rat(Repr::Small(0, 1))
    }

    fn one() -> Self {
        Rat(Repr::Small(1, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    fn is_one(&self) -> bool {
        matches!(self.0, Repr::Small(1, 1))
    }

    fn field_add(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Rat(Repr::Small(s, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(s) => Self::from_i128(s, z),
                        None => Self::from_big(self.to_big() + other.to_big()),
                    },
                    _ => Self::from_big(self.to_big() + other.to_big()),
                }
            }
            _ => Self::from_big(self.to_big() + other.to_big()),
        }
    }

    fn field_sub(&self, other: &Self) -> Self {
        self.field_add(&other.field_neg())
    }

    fn field_mul(&self, other: &Self) -> Self {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Rat(Repr::Small(p, 1));
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Self::from_i128(a * c, b * d)
            }
            _ => Self::from_big(self.to_big() * other.to_big()),
        }
    }

    fn field_neg(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rat(Repr::Small(m, *d)),
                None => Self::from_big(-self.to_big()),
            },
            Repr::Big(r) => Self::from_big(-r.clone()),
        }
    }

    fn field_inv(&self) -> Result<Self, CoeffError> {
        self.inv()
    }

    fn from_i64(n: i64) -> Self {
        Rat::integer(n)
    }

    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn is_atomic(&self) -> bool {
        self.is_integer() && !self.is_negative()
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::integer(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Self {
        Rat::from_big(r)
    }
}

impl From<Rat> for BigRational {
    fn from(r: Rat) -> Self {
        r.to_big()
    }
}

impl FromStr for Rat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<BigInt>().map_err(|e| format!("bad rational {s:?}: {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let (n, d) = (parse(n)?, parse(d)?);
                if d.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                Ok(Rat::from_big(BigRational::new(n, d)))
            }
            None => Ok(Rat::from_bigint(parse(s)?)),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! rat_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                $body(self, rhs)
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                $body(&self, &rhs)
            }
        }
    };
}

rat_binop!(Add, add, |a: &Rat, b: &Rat| a.field_add(b));
rat_binop!(Sub, sub, |a: &Rat, b: &Rat| a.field_sub(b));
rat_binop!(Mul, mul, |a: &Rat, b: &Rat| a.field_mul(b));
rat_binop!(Div, div, |a: &Rat, b: &Rat| a.field_mul(&b.inv().expect("rational division by zero")));

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.field_neg()
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        self.field_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rat {
        Rat::new(n, d).unwrap()
    }

    #[test]
    fn half_plus_third() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
    }

    #[test]
    fn canonical_sign_and_zero() {
        assert_eq!(r(2, -4), r(-1, 2));
        assert_eq!(r(0, 7), Rat::zero());
        assert_eq!(r(0, 7).to_string(), "0");
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert_eq!(Rat::zero().inv(), Err(CoeffError::DivisionByZero));
        assert!(Rat::new(1, 0).is_err());
    }

    #[test]
    fn overflow_spills_and_returns() {
        let big = Rat::integer(i64::MAX);
        let sq = &big * &big;
        assert!(matches!(sq.0, Repr::Big(_)));
        let back = &sq / &big;
        assert_eq!(back, big);
        assert!(matches!(back.0, Repr::Small(..)));
        let m = Rat::integer(i64::MIN);
        assert_eq!(-(-m.clone()), m);
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3/16", "5", "123456789012345678901234567891/1024"] {
            let x: Rat = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
    }
}
