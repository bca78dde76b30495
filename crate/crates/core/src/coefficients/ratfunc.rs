use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{CoeffError, Poly, Rat, Scalar};

/// A rational function `num(v) / den(v)` over `Q`.
///
/// Canonical form: `den` is monic, `gcd(num, den) = 1`, and zero is `0/1`.
/// The variable `v` plays the role of `q^{1/4}`, so `q = v^4`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Build and canonicalize `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lead.inv().expect("nonzero leading coefficient");
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// The formal variable `v = q^{1/4}`.
    pub fn v() -> Self {
        Self::v_pow(1)
    }

    /// `v^k` for any integer `k`.
    pub fn v_pow(k: i64) -> Self {
        let m = Poly::monomial(Rat::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            RatFunc::from_poly(m)
        } else {
            RatFunc { num: Poly::one(), den: m }
        }
    }

    /// `q^{k/4}`, identical to `v^k`.
    pub fn q_quarter_pow(k: i64) -> Self {
        Self::v_pow(k)
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Evaluate at `v = v0`.
    pub fn specialize(&self, v0: &Rat) -> Result<Rat, CoeffError> {
        let d = self.den.eval(v0);
        if d.is_zero() {
            return Err(CoeffError::Pole(v0.to_string()));
        }
        Ok(&self.num.eval(v0) / &d)
    }

    /// Re-canonicalize; a no-op on values built through the public API.
    pub fn canonical(&self) -> Self {
        Self::reduce(self.num.clone(), self.den.clone())
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    fn one() -> Self {
        RatFunc { num: Poly::one(), den: Poly::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    fn field_add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            let num = self.num.add(&o.num);
            if self.den.is_one() {
                return RatFunc { num, den: Poly::one() };
            }
            return Self::reduce(num, self.den.clone());
        }
        // Henrici: only the common part of the denominators can cancel.
        let g = self.den.gcd(&o.den);
        let (d1, d2) = (self.den.exact_div(&g), o.den.exact_div(&g));
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        if num.is_zero() {
            return RatFunc::zero();
        }
        let den = self.den.mul(&d2);
        if g.is_one() {
            return RatFunc { num, den };
        }
        let h = num.gcd(&g);
        if h.is_one() {
            RatFunc { num, den }
        } else {
            RatFunc { num: num.exact_div(&h), den: den.exact_div(&h) }
        }
    }

    fn field_sub(&self, o: &Self) -> Self {
        self.field_add(&o.field_neg())
    }

    fn field_mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc { num: self.num.mul(&o.num), den: Poly::one() };
        }
        let g1 = self.num.gcd(&o.den);
        let g2 = o.num.gcd(&self.den);
        let num = self.num.exact_div(&g1).mul(&o.num.exact_div(&g2));
        let den = self.den.exact_div(&g2).mul(&o.den.exact_div(&g1));
        // Both factors are canonical, so `den` is already monic.
        RatFunc { num, den }
    }

    fn field_neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    fn field_inv(&self) -> Result<Self, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    fn from_i64(n: i64) -> Self {
        RatFunc::from_poly(Poly::constant(Rat::integer(n)))
    }

    fn from_rat(r: &Rat) -> Self {
        RatFunc::from_poly(Poly::constant(r.clone()))
    }

    fn is_atomic(&self) -> bool {
        self.den.is_one() && self.num.is_constant() && self.num.coeffs().first().is_none_or(|c| c.is_atomic())
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let plain = p.is_monomial() && p.leading().is_some_and(|c| c.is_integer() && (p.is_constant() || c.is_one()));
            if plain {
                p.to_string()
            } else {
                format!("({p})")
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Rat> for RatFunc {
    fn from(r: Rat) -> Self {
        RatFunc::from_rat(&r)
    }
}

macro_rules! rf_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                $body(self, rhs)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                $body(&self, &rhs)
            }
        }
    };
}

rf_binop!(Add, add, |a: &RatFunc, b: &RatFunc| a.field_add(b));
rf_binop!(Sub, sub, |a: &RatFunc, b: &RatFunc| a.field_sub(b));
rf_binop!(Mul, mul, |a: &RatFunc, b: &RatFunc| a.field_mul(b));
rf_binop!(Div, div, |a: &RatFunc, b: &RatFunc| a
    .field_div(b)
    .expect("rational function division by zero"));

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.field_neg()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        self.field_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RatFunc {
        RatFunc::v_pow(4)
    }

    #[test]
    fn cancellation_to_one() {
        let x = q() - RatFunc::one();
        assert!(x.field_div(&x).unwrap().is_one());
    }

    #[test]
    fn specialize_quotient() {
        // (v^4 - 1)/(v - 1) at v = 2 is 15
        let num = q() - RatFunc::one();
        let den = RatFunc::v() - RatFunc::one();
        let x = &num / &den;
        assert!(x.is_polynomial());
        assert_eq!(x.specialize(&Rat::integer(2)).unwrap(), Rat::integer(15));
    }

    #[test]
    fn q_number_two_classical_limit() {
        // [2]_{q^{1/2}} = v^2 + v^{-2} = (v^4 + 1)/v^2
        let two = RatFunc::v_pow(2) + RatFunc::v_pow(-2);
        assert_eq!(two.to_string(), "(v^4+1)/v^2");
        assert_eq!(two.specialize(&Rat::one()).unwrap(), Rat::integer(2));
    }

    #[test]
    fn pole_is_reported() {
        let x = RatFunc::one().field_div(&(RatFunc::v() - RatFunc::one())).unwrap();
        assert_eq!(x.specialize(&Rat::one()), Err(CoeffError::Pole("1".into())));
    }

    #[test]
    fn denominators_stay_monic() {
        let x = RatFunc::new(Poly::from_ints(&[2]), Poly::from_ints(&[0, 4])).unwrap();
        assert_eq!(x.denom(), &Poly::from_ints(&[0, 1]));
        assert_eq!(x.to_string(), "(1/2)/v");
    }
}
