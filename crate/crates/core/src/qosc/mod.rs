//! q-oscillator realizations of `U_q(su(1,1))` and `o_{q^{1/2}}(2n)`.
//!
//! Scalars are written in `v = q^{1/4}` taken from the builder, so the same
//! formulas evaluate symbolically (`RatFunc`) or at a rational point (`Rat`).

mod fit;

use std::ops::RangeInclusive;
use std::sync::Arc;

pub use fit::{fit_central_combination, CentralMonomial, FitOutcome, FitTerm};

use crate::coefficients::{RatFunc, Scalar};
use crate::ncalg::{Algebra, Element, Engine, Family, Kind, OpBuilder};
use crate::Error;

fn check<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<(), Error> {
    if b.family() == Family::QOsc {
        Ok(())
    } else {
        Err(Error::InvalidContext(format!("expected a q-oscillator algebra, got {:?}", b.family())))
    }
}

fn check_range<S: Scalar, B: OpBuilder<S>>(b: &B, range: &RangeInclusive<usize>) -> Result<(), Error> {
    check(b)?;
    if range.is_empty() || *range.start() == 0 || *range.end() > b.modes() {
        return Err(Error::InvalidIndex(format!("mode range {range:?} outside 1..={}", b.modes())));
    }
    Ok(())
}

/// `q^x` for `x ∈ Z/4`, given as `v^{4x}`.
fn vp<S: Scalar, B: OpBuilder<S>>(b: &B, k: i64) -> Result<S, Error> {
    b.v_pow(k)
}

/// `[2]_{q^{1/2}} = q^{1/2} + q^{-1/2}`
pub fn two_half<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<S, Error> {
    Ok(vp(b, 2)?.field_add(&vp(b, -2)?))
}

/// `q^{A_i^0 + 1/2} = q^{1/2} E_i²`, or its inverse.
fn q_weight<S: Scalar, B: OpBuilder<S>>(b: &B, i: usize, inverse: bool) -> Result<B::Op, Error> {
    let (kind, k) = if inverse { (Kind::ExpHalfInv, -2) } else { (Kind::ExpHalf, 2) };
    let e = b.gen(kind, i)?;
    Ok(b.scale(&b.mul(&e, &e), &vp(b, k)?))
}

/// `U_q(su(1,1))` on a contiguous range of modes, built by iterated coproduct.
#[derive(Clone, Debug)]
pub struct QSu11<Op> {
    pub range: RangeInclusive<usize>,
    pub j0: Op,
    /// `q^{2J₀}`
    pub q2j0: Op,
    /// `q^{-2J₀}`
    pub q2j0_inv: Op,
    pub jplus: Op,
    pub jminus: Op,
}

pub fn q_metaplectic<S: Scalar, B: OpBuilder<S>>(b: &B, range: RangeInclusive<usize>) -> Result<QSu11<B::Op>, Error> {
    check_range(b, &range)?;
    let half = S::from_i64(2).field_inv()?;
    let inv2 = two_half(b)?.field_inv()?;
    let (mut j0, mut jp, mut jm) = (Vec::new(), Vec::new(), Vec::new());
    let (mut q2j0, mut q2j0_inv) = (b.one(), b.one());
    for i in range.clone() {
        let a0 = b.gen(Kind::Number, i)?;
        j0.push(b.scale(&b.add(&a0, &b.constant(half.clone())), &half));
        q2j0 = b.mul(&q2j0, &q_weight(b, i, false)?);
        q2j0_inv = b.mul(&q2j0_inv, &q_weight(b, i, true)?);
        let mut tail = b.one();
        for j in i + 1..=*range.end() {
            tail = b.mul(&tail, &q_weight(b, j, false)?);
        }
        let (ap, am) = (b.gen(Kind::Raise, i)?, b.gen(Kind::Lower, i)?);
        jp.push(b.scale(&b.mul(&b.mul(&ap, &ap), &tail), &inv2));
        jm.push(b.scale(&b.mul(&b.mul(&am, &am), &tail), &inv2));
    }
    Ok(QSu11 { range, j0: b.sum(&j0), q2j0, q2j0_inv, jplus: b.sum(&jp), jminus: b.sum(&jm) })
}

/// `J₋J₊ - q²J₊J₋ - (q^{4J₀} - 1)/(q - q⁻¹)`, zero in any realization.
pub fn uq_residual<S: Scalar, B: OpBuilder<S>>(b: &B, j: &QSu11<B::Op>) -> Result<B::Op, Error> {
    let q = vp(b, 4)?;
    let q2 = vp(b, 8)?;
    let denom = q.field_sub(&vp(b, -4)?).field_inv()?;
    let lhs = b.sub(&b.mul(&j.jminus, &j.jplus), &b.scale(&b.mul(&j.jplus, &j.jminus), &q2));
    let rhs = b.scale(&b.sub(&b.mul(&j.q2j0, &j.q2j0), &b.one()), &denom);
    Ok(b.sub(&lhs, &rhs))
}

/// `C = J₊J₋q^{-2J₀+1} - q/(1-q²)² (q^{2J₀-1} + q^{-2J₀+1}) + (1+q²)/(1-q²)²`
pub fn q_casimir<S: Scalar, B: OpBuilder<S>>(b: &B, j: &QSu11<B::Op>) -> Result<B::Op, Error> {
    let q = vp(b, 4)?;
    let (q_inv, q2) = (vp(b, -4)?, vp(b, 8)?);
    let d = S::one().field_sub(&q2);
    let d2_inv = d.field_mul(&d).field_inv()?;
    let first = b.scale(&b.mul(&b.mul(&j.jplus, &j.jminus), &j.q2j0_inv), &q);
    let middle = b.add(&b.scale(&j.q2j0, &q_inv), &b.scale(&j.q2j0_inv, &q));
    let middle = b.scale(&middle, &q.field_mul(&d2_inv));
    let constant = b.constant(S::one().field_add(&q2).field_mul(&d2_inv));
    Ok(b.add(&b.sub(&first, &middle), &constant))
}

/// `L_{i,i+1} = q^{-½(A_i⁰+½)} (q^{1/4} A_i⁺ A_{i+1}⁻ - q^{-1/4} A_i⁻ A_{i+1}⁺)`
pub fn q_rotation<S: Scalar, B: OpBuilder<S>>(b: &B, i: usize) -> Result<B::Op, Error> {
    check(b)?;
    if i == 0 || i >= b.modes() {
        return Err(Error::InvalidIndex(format!("L_{{i,i+1}} needs 1 <= i < {}, got {i}", b.modes())));
    }
    let pre = b.scale(&b.gen(Kind::ExpHalfInv, i)?, &vp(b, -1)?);
    let hop = |a: Kind, c: Kind, k: i64| -> Result<B::Op, Error> {
        Ok(b.scale(&b.mul(&b.gen(a, i)?, &b.gen(c, i + 1)?), &vp(b, k)?))
    };
    let inner = b.sub(&hop(Kind::Raise, Kind::Lower, 1)?, &hop(Kind::Lower, Kind::Raise, -1)?);
    Ok(b.mul(&pre, &inner))
}

/// Residuals of the two cubic relations between `L_{i-1,i}` and `L_{i,i+1}`:
/// `xyy + yyx - [2]_{q^{1/2}} yxy + x` and the same with `x, y` swapped.
pub fn serre_residuals<S: Scalar, B: OpBuilder<S>>(b: &B, i: usize) -> Result<[B::Op; 2], Error> {
    serre_residuals_scaled(b, i, &S::one())
}

/// [`serre_residuals`] for the rescaled rotations `λL`.
pub fn serre_residuals_scaled<S: Scalar, B: OpBuilder<S>>(b: &B, i: usize, lambda: &S) -> Result<[B::Op; 2], Error> {
    if i < 2 {
        return Err(Error::InvalidIndex(format!("q-Serre relations need i >= 2, got {i}")));
    }
    let (x, y) = (b.scale(&q_rotation(b, i - 1)?, lambda), b.scale(&q_rotation(b, i)?, lambda));
    let c = two_half(b)?;
    let cubic = |x: &B::Op, y: &B::Op| {
        let t = b.add(&b.mul(&b.mul(x, y), y), &b.mul(&b.mul(y, y), x));
        let m = b.scale(&b.mul(&b.mul(y, x), y), &c);
        b.add(&b.sub(&t, &m), x)
    };
    Ok([cubic(&x, &y), cubic(&y, &x)])
}

/// Sign of the deformation in `L^±_{ik}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracket {
    Plus,
    Minus,
}

/// `L^±_{ik} = [L^±_{ij}, L^±_{jk}]_{q^{±1/4}}`, through the chain `j`. With
/// `via = None` the chain is `j = k - 1` at every level.
pub fn extended_rotation<S: Scalar, B: OpBuilder<S>>(
    b: &B,
    i: usize,
    k: usize,
    sign: Bracket,
    via: Option<usize>,
) -> Result<B::Op, Error> {
    check(b)?;
    if i == 0 || k > b.modes() || i >= k {
        return Err(Error::InvalidIndex(format!("L_{{{i},{k}}} needs 1 <= i < k <= {}", b.modes())));
    }
    if k == i + 1 {
        return q_rotation(b, i);
    }
    let j = via.unwrap_or(k - 1);
    if j <= i || j >= k {
        return Err(Error::InvalidIndex(format!("chain index {j} not strictly between {i} and {k}")));
    }
    let lambda = vp(b, if sign == Bracket::Plus { 1 } else { -1 })?;
    let left = extended_rotation(b, i, j, sign, None)?;
    let right = extended_rotation(b, j, k, sign, None)?;
    b.qcomm(&left, &right, &lambda)
}

/// The q-Hahn pair on four modes: `M₁ = J₀^{(12)} - J₀^{(34)}`, `M₂ = C^{(1234)}`.
pub fn qhahn_pair<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<(B::Op, B::Op), Error> {
    check(b)?;
    if b.modes() != 4 {
        return Err(Error::InvalidContext(format!("the q-Hahn pair needs four modes, context has {}", b.modes())));
    }
    let m1 = b.sub(&q_metaplectic(b, 1..=2)?.j0, &q_metaplectic(b, 3..=4)?.j0);
    let m2 = q_casimir(b, &q_metaplectic(b, 1..=4)?)?;
    Ok((m1, m2))
}

/// `K = q(q - q⁻¹)² C - (q + q⁻¹)`, the affine image of an intermediate
/// Casimir used as an Askey–Wilson generator.
pub fn aw_generator<S: Scalar, B: OpBuilder<S>>(b: &B, casimir: &B::Op) -> Result<B::Op, Error> {
    let (q, q_inv) = (vp(b, 4)?, vp(b, -4)?);
    let d = q.field_sub(&q_inv);
    let lambda = q.field_mul(&d).field_mul(&d);
    Ok(b.sub(&b.scale(casimir, &lambda), &b.constant(q.field_add(&q_inv))))
}

/// Names of the elements returned by [`aw_central`].
pub const AW_CENTRAL_NAMES: [&str; 6] = ["C12", "C34", "C56", "Q", "Qinv", "C"];

/// Central elements on six modes: `C^{(12)}, C^{(34)}, C^{(56)}`,
/// `Q = q^{2J₀}` and `Q⁻¹` of all modes, and `C^{(1..6)}`.
pub fn aw_central<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<Vec<B::Op>, Error> {
    check(b)?;
    if b.modes() != 6 {
        return Err(Error::InvalidContext(format!("the Askey–Wilson data needs six modes, context has {}", b.modes())));
    }
    let all = q_metaplectic(b, 1..=6)?;
    Ok(vec![
        q_casimir(b, &q_metaplectic(b, 1..=2)?)?,
        q_casimir(b, &q_metaplectic(b, 3..=4)?)?,
        q_casimir(b, &q_metaplectic(b, 5..=6)?)?,
        all.q2j0.clone(),
        all.q2j0_inv.clone(),
        q_casimir(b, &all)?,
    ])
}

/// Engine-side wrapper over `2n` q-oscillators with symbolic `v`.
#[derive(Clone, Debug)]
pub struct QContext {
    engine: Engine<RatFunc>,
}

pub type QSu11Realization = QSu11<Element<RatFunc>>;

impl QContext {
    pub fn new(modes: usize) -> Result<Self, Error> {
        if modes < 4 || !modes.is_multiple_of(2) {
            return Err(Error::InvalidContext(format!("mode count must be even and at least 4, got {modes}")));
        }
        Ok(QContext { engine: Engine::new(Algebra::qosc(modes, RatFunc::v())?) })
    }

    pub fn engine(&self) -> &Engine<RatFunc> {
        &self.engine
    }

    pub fn algebra(&self) -> &Arc<Algebra<RatFunc>> {
        self.engine.algebra()
    }

    /// `U_q(su(1,1))` on `range`, with its defining relations checked.
    pub fn build_q_su11(&self, range: RangeInclusive<usize>) -> Result<QSu11Realization, Error> {
        let b = &self.engine;
        let j = q_metaplectic(b, range.clone())?;
        let ok = (&j.q2j0 * &j.q2j0_inv) == self.algebra().one()
            && (j.j0.commutator(&j.jplus)? - j.jplus.clone()).is_zero()
            && (j.j0.commutator(&j.jminus)? + j.jminus.clone()).is_zero()
            && uq_residual(b, &j)?.is_zero();
        if ok {
            Ok(j)
        } else {
            Err(Error::RelationViolated(format!("U_q(su(1,1)) relations on {range:?}")))
        }
    }

    pub fn build_q_casimir(&self, range: RangeInclusive<usize>) -> Result<Element<RatFunc>, Error> {
        q_casimir(&self.engine, &self.build_q_su11(range)?)
    }

    pub fn build_q_l(&self, i: usize) -> Result<Element<RatFunc>, Error> {
        q_rotation(&self.engine, i)
    }

    pub fn build_extended_l(&self, i: usize, k: usize, sign: Bracket) -> Result<Element<RatFunc>, Error> {
        extended_rotation(&self.engine, i, k, sign, None)
    }

    pub fn build_qhahn_pair(&self) -> Result<(Element<RatFunc>, Element<RatFunc>), Error> {
        qhahn_pair(&self.engine)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_mode_uq_relation() {
        let ctx = QContext::new(4).unwrap();
        assert!(ctx.build_q_su11(1..=1).is_ok());
        assert!(ctx.build_q_su11(2..=4).is_ok());
        assert!(ctx.build_q_su11(0..=1).is_err());
    }

    #[test]
    fn disjoint_rotations_commute() {
        let ctx = QContext::new(4).unwrap();
        let (l12, l34) = (ctx.build_q_l(1).unwrap(), ctx.build_q_l(3).unwrap());
        assert!(l12.commutator(&l34).unwrap().is_zero());
        assert!(ctx.build_q_l(4).is_err());
    }

    #[test]
    fn serre_at_two() {
        let ctx = QContext::new(4).unwrap();
        let b = ctx.engine();
        let (l12, l23) = (ctx.build_q_l(1).unwrap(), ctx.build_q_l(2).unwrap());
        // As written the cubic leaves (1 - q⁻¹)L behind; for q^{1/2}L it closes.
        let c = RatFunc::one().field_sub(&RatFunc::v_pow(-4));
        let [r1, r2] = serre_residuals(b, 2).unwrap();
        assert_eq!(r1, l12.scale(&c));
        assert_eq!(r2, l23.scale(&c));
        for r in serre_residuals_scaled(b, 2, &RatFunc::v_pow(2)).unwrap() {
            assert!(r.is_zero(), "{r}");
        }
    }
}
