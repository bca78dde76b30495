use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{CoeffError, Rat, Scalar};

/// A Gaussian rational `re + im·i` with `i² = -1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::i(),
            2 => Self::from_i64(-1),
            _ => Self::i().field_neg(),
        }
    }
}

impl Scalar for GaussRat {
    fn zero() -> Self {
        GaussRat::real(Rat::zero())
    }

    fn one() -> Self {
        GaussRat::real(Rat::one())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn field_add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn field_sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn field_mul(&self, o: &Self) -> Self {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRat::real(&self.re * &o.re);
        }
        GaussRat {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }

    fn field_neg(&self) -> Self {
        GaussRat { re: -&self.re, im: -&self.im }
    }

    fn field_inv(&self) -> Result<Self, CoeffError> {
        let norm = &(&self.re * &self.re) + &(&self.im * &self.im);
        let inv = norm.inv()?;
        Ok(GaussRat { re: &self.re * &inv, im: -(&self.im * &inv) })
    }

    fn from_i64(n: i64) -> Self {
        GaussRat::real(Rat::integer(n))
    }

    fn from_rat(r: &Rat) -> Self {
        GaussRat::real(r.clone())
    }

    fn is_atomic(&self) -> bool {
        self.im.is_zero() && self.re.is_atomic()
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, im: &Rat, lead: bool| {
            if im.is_one() {
                write!(f, "{}i", if lead { "" } else { "+" })
            } else if *im == Rat::integer(-1) {
                write!(f, "-i")
            } else if im.is_negative() || lead {
                write!(f, "{im}*i")
            } else {
                write!(f, "+{im}*i")
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => imag(f, &self.im, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                imag(f, &self.im, false)
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: GaussRat) -> GaussRat {
        self.field_add(&rhs)
    }
}

impl Sub for GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: GaussRat) -> GaussRat {
        self.field_sub(&rhs)
    }
}

impl Mul for GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: GaussRat) -> GaussRat {
        self.field_mul(&rhs)
    }
}

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        self.field_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared() {
        assert_eq!(GaussRat::i() * GaussRat::i(), GaussRat::from_i64(-1));
        assert_eq!(GaussRat::i_pow(3), -GaussRat::i());
        assert_eq!(GaussRat::i_pow(-1), -GaussRat::i());
    }

    #[test]
    fn inverse() {
        let z = GaussRat::new(Rat::integer(3), Rat::integer(4));
        let w = z.field_inv().unwrap();
        assert!(z.field_mul(&w).is_one());
        assert!(GaussRat::zero().field_inv().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(GaussRat::i().to_string(), "i");
        assert_eq!((-GaussRat::i()).to_string(), "-i");
        let z = GaussRat::new(Rat::new(1, 2).unwrap(), Rat::integer(-3));
        assert_eq!(z.to_string(), "1/2-3*i");
    }
}
