use std::fmt;

use super::{CoeffError, Rat, Scalar};

/// Dense univariate polynomial over `Rat` in the formal variable `v`.
/// Coefficients are stored lowest degree first with no trailing zeros, so
/// the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        Poly::from_coeffs(vec![c])
    }

    /// `c · v^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| Rat::integer(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// True for `c · v^k`.
    pub fn is_monomial(&self) -> bool {
        match self.valuation() {
            Some(k) => k + 1 == self.0.len(),
            None => false,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut out = long.0.clone();
        for (a, b) in out.iter_mut().zip(&short.0) {
            *a = &*a + b;
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.0.len() == 1 {
            return self.scale(&o.0[0]);
        }
        if self.0.len() == 1 {
            return o.scale(&self.0[0]);
        }
        let mut out = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Poly::from_coeffs(out)
    }

    /// Multiply by `v^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![Rat::zero(); k];
        v.extend(self.0.iter().cloned());
        Poly(v)
    }

    /// Divide by `v^k`; the caller guarantees `k <= valuation`.
    pub fn unshift(&self, k: usize) -> Poly {
        Poly(self.0[k.min(self.0.len())..].to_vec())
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly), CoeffError> {
        let dd = d.degree().ok_or(CoeffError::DivisionByZero)?;
        let lead_inv = d.0[dd].inv()?;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.0.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        if d.is_one() {
            return self.clone();
        }
        if d.is_monomial() {
            let k = d.valuation().unwrap_or(0);
            let inv = d.0[k].inv().expect("nonzero monomial");
            return self.unshift(k).scale(&inv);
        }
        let (q, r) = self.div_rem(d).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Poly) -> Poly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.is_constant() || o.is_constant() {
            return Poly::one();
        }
        if self.is_monomial() || o.is_monomial() {
            let k = self.valuation().unwrap().min(o.valuation().unwrap());
            return Poly::monomial(Rat::one(), k);
        }
        // Strip the common power of v first; it is cheap and common.
        let k = self.valuation().unwrap().min(o.valuation().unwrap());
        let (mut a, mut b) = (self.unshift(k).monic(), o.unshift(k).monic());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Poly::monomial(Rat::one(), k);
            }
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic().shift(k)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "v")?;
                    } else {
                        write!(f, "v^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (v^4 - 1) = (v-1)(v+1)(v^2+1), (v^2 - 1) = (v-1)(v+1)
        let a = Poly::from_ints(&[-1, 0, 0, 0, 1]);
        let b = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(a.gcd(&b), b);
        let c = Poly::from_ints(&[1, 0, 1]);
        assert_eq!(b.gcd(&c), Poly::one());
    }

    #[test]
    fn gcd_keeps_power_of_v() {
        let a = Poly::from_ints(&[0, 0, -1, 0, 1]); // v^2 (v^2 - 1)
        let b = Poly::from_ints(&[0, -1, 1]); // v (v - 1)
        assert_eq!(a.gcd(&b), Poly::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn div_rem_reconstructs() {
        let a = Poly::from_ints(&[3, -2, 0, 5, 1]);
        let d = Poly::from_ints(&[1, 2]);
        let (q, r) = a.div_rem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn display() {
        assert_eq!(Poly::from_ints(&[-1, 0, 0, 0, 1]).to_string(), "v^4-1");
        assert_eq!(Poly::from_ints(&[0, -2, 3]).to_string(), "3*v^2-2*v");
    }
}
