//! The 2n-oscillator realization: rotation generators `L_{μν}`, the
//! metaplectic su(1,1) and their Casimirs.
//!
//! The free functions are generic over [`OpBuilder`] so the same formulas
//! drive the symbolic engine and the Fock oracle. [`WeylContext`] wraps them
//! for the engine and checks constructor invariants.

use std::sync::Arc;

use crate::coefficients::Rat;
use crate::ncalg::{Algebra, Element, Engine, Family, Kind, OpBuilder};
use crate::Error;

fn check_family<B: OpBuilder<Rat>>(b: &B) -> Result<(), Error> {
    if b.family() == Family::Weyl {
        Ok(())
    } else {
        Err(Error::InvalidContext(format!("expected a Weyl algebra, got {:?}", b.family())))
    }
}

fn check_mode<B: OpBuilder<Rat>>(b: &B, mu: usize) -> Result<(), Error> {
    if (1..=b.modes()).contains(&mu) {
        Ok(())
    } else {
        Err(Error::InvalidIndex(format!("mode {mu} outside 1..={}", b.modes())))
    }
}

fn half() -> Rat {
    Rat::new(1, 2).unwrap()
}

/// `L_{μν} = a†_μ a_ν - a_μ a†_ν`
pub fn rotation<B: OpBuilder<Rat>>(b: &B, mu: usize, nu: usize) -> Result<B::Op, Error> {
    check_family(b)?;
    if mu == nu {
        return Err(Error::InvalidIndex(format!("L needs distinct modes, got ({mu}, {nu})")));
    }
    let ad = |m| b.gen(Kind::Create, m);
    let a = |m| b.gen(Kind::Annihilate, m);
    Ok(b.sub(&b.mul(&ad(mu)?, &a(nu)?), &b.mul(&a(mu)?, &ad(nu)?)))
}

/// `N_μ = a†_μ a_μ`
pub fn number<B: OpBuilder<Rat>>(b: &B, mu: usize) -> Result<B::Op, Error> {
    check_family(b)?;
    Ok(b.mul(&b.gen(Kind::Create, mu)?, &b.gen(Kind::Annihilate, mu)?))
}

/// `H = Σ_μ a†_μ a_μ`, without zero-point constant.
pub fn hamiltonian<B: OpBuilder<Rat>>(b: &B) -> Result<B::Op, Error> {
    let ns = (1..=b.modes()).map(|m| number(b, m)).collect::<Result<Vec<_>, _>>()?;
    Ok(b.sum(&ns))
}

/// `Σ_{μ<ν} L_{μν}²` over the given modes.
pub fn rotation_casimir<B: OpBuilder<Rat>>(b: &B, modes: &[usize]) -> Result<B::Op, Error> {
    let mut squares = Vec::new();
    for (i, &mu) in modes.iter().enumerate() {
        for &nu in &modes[i + 1..] {
            squares.push(b.pow(&rotation(b, mu, nu)?, 2));
        }
    }
    Ok(b.sum(&squares))
}

/// su(1,1) generators `J₀, J₊, J₋` of one realization.
#[derive(Clone, Debug)]
pub struct Su11<Op> {
    pub modes: Vec<usize>,
    pub j0: Op,
    pub jplus: Op,
    pub jminus: Op,
}

/// Sum of the metaplectic realizations `J₀ = ½(a†a + ½)`, `J± = ½ a^{†2}, ½ a²`
/// over `modes`.
pub fn metaplectic<B: OpBuilder<Rat>>(b: &B, modes: &[usize]) -> Result<Su11<B::Op>, Error> {
    check_family(b)?;
    if modes.is_empty() {
        return Err(Error::InvalidIndex("empty mode subset".into()));
    }
    let mut sorted = modes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != modes.len() {
        return Err(Error::InvalidIndex(format!("repeated mode in {modes:?}")));
    }
    let (mut j0, mut jp, mut jm) = (Vec::new(), Vec::new(), Vec::new());
    for &m in &sorted {
        check_mode(b, m)?;
        let (ad, a) = (b.gen(Kind::Create, m)?, b.gen(Kind::Annihilate, m)?);
        j0.push(b.scale(&b.add(&b.mul(&ad, &a), &b.constant(half())), &half()));
        jp.push(b.scale(&b.mul(&ad, &ad), &half()));
        jm.push(b.scale(&b.mul(&a, &a), &half()));
    }
    Ok(Su11 { modes: sorted, j0: b.sum(&j0), jplus: b.sum(&jp), jminus: b.sum(&jm) })
}

/// `C = J₀² - J₊J₋ - J₀`
pub fn su11_casimir<B: OpBuilder<Rat>>(b: &B, j: &Su11<B::Op>) -> B::Op {
    b.sub(&b.sub(&b.mul(&j.j0, &j.j0), &b.mul(&j.jplus, &j.jminus)), &j.j0)
}

/// The Racah generators `K₁, K₂` on six modes.
pub fn racah_generators<B: OpBuilder<Rat>>(b: &B) -> Result<(B::Op, B::Op), Error> {
    require_modes(b, 6)?;
    let eighth = Rat::new(1, 8).unwrap();
    let sq = |pairs: &[(usize, usize)]| -> Result<B::Op, Error> {
        let terms = pairs.iter().map(|&(m, n)| Ok(b.pow(&rotation(b, m, n)?, 2))).collect::<Result<Vec<_>, Error>>()?;
        Ok(b.scale(&b.sum(&terms), &eighth))
    };
    let k1 = sq(&[(1, 2), (3, 4), (1, 3), (2, 3), (1, 4), (2, 4)])?;
    let k2 = sq(&[(3, 4), (5, 6), (3, 5), (3, 6), (4, 5), (4, 6)])?;
    Ok((k1, k2))
}

/// The central parameters `d, e₁, e₂` of the Racah relations.
pub fn racah_central<B: OpBuilder<Rat>>(b: &B) -> Result<[B::Op; 3], Error> {
    require_modes(b, 6)?;
    let c = rotation_casimir(b, &[1, 2, 3, 4, 5, 6])?;
    let l2 = |m, n| Ok::<_, Error>(b.pow(&rotation(b, m, n)?, 2));
    let (l12, l34, l56) = (l2(1, 2)?, l2(3, 4)?, l2(5, 6)?);
    let four = b.constant(Rat::integer(4));
    let d = b.scale(&b.sum([&c, &l12, &l34, &l56]), &Rat::new(-1, 8).unwrap());
    let k = Rat::new(-1, 64).unwrap();
    let e1 = b.scale(&b.mul(&b.sub(&b.sub(&c, &l12), &four), &b.sub(&l34, &l56)), &k);
    let e2 = b.scale(&b.mul(&b.sub(&b.sub(&c, &l56), &four), &b.sub(&l34, &l12)), &k);
    Ok([d, e1, e2])
}

/// Oscillator-side Hahn data on four modes: `M₁, M₂, δ₁, δ₂`.
pub struct HahnOscillator<Op> {
    pub m1: Op,
    pub m2: Op,
    pub delta1: Op,
    pub delta2: Op,
}

pub fn hahn_oscillator<B: OpBuilder<Rat>>(b: &B) -> Result<HahnOscillator<B::Op>, Error> {
    require_modes(b, 4)?;
    let n = (1..=4).map(|m| number(b, m)).collect::<Result<Vec<_>, _>>()?;
    let m1 = b.scale(&b.sub(&b.add(&n[0], &n[1]), &b.add(&n[2], &n[3])), &half());
    let m2 = b.scale(&rotation_casimir(b, &[1, 2, 3, 4])?, &Rat::new(-1, 4).unwrap());
    let total = b.add(&b.sum(&n), &b.constant(Rat::integer(2)));
    let (l12, l34) = (b.pow(&rotation(b, 1, 2)?, 2), b.pow(&rotation(b, 3, 4)?, 2));
    let delta1 = b.scale(&b.mul(&total, &b.sub(&l12, &l34)), &Rat::new(-1, 2).unwrap());
    let delta2 = b.sub(
        &b.scale(&b.mul(&total, &total), &half()),
        &b.sum([&l12, &l34, &b.constant(Rat::integer(2))]),
    );
    Ok(HahnOscillator { m1, m2, delta1, delta2 })
}

fn require_modes<B: OpBuilder<Rat>>(b: &B, n: usize) -> Result<(), Error> {
    check_family(b)?;
    if b.modes() == n {
        Ok(())
    } else {
        Err(Error::InvalidContext(format!("needs {n} oscillators, context has {}", b.modes())))
    }
}

/// Engine-side convenience wrapper over a Weyl algebra with `2n ≥ 4` modes.
#[derive(Clone, Debug)]
pub struct WeylContext {
    engine: Engine<Rat>,
}

pub type Su11Realization = Su11<Element<Rat>>;

impl WeylContext {
    pub fn new(modes: usize) -> Result<Self, Error> {
        if modes < 4 || !modes.is_multiple_of(2) {
            return Err(Error::InvalidContext(format!("mode count must be even and at least 4, got {modes}")));
        }
        Ok(WeylContext { engine: Engine::new(Algebra::weyl(modes)) })
    }

    pub fn engine(&self) -> &Engine<Rat> {
        &self.engine
    }

    pub fn algebra(&self) -> &Arc<Algebra<Rat>> {
        self.engine.algebra()
    }

    pub fn modes(&self) -> usize {
        self.engine.modes()
    }

    pub fn build_l(&self, mu: usize, nu: usize) -> Result<Element<Rat>, Error> {
        check_mode(&self.engine, mu)?;
        check_mode(&self.engine, nu)?;
        rotation(&self.engine, mu, nu)
    }

    pub fn hamiltonian(&self) -> Element<Rat> {
        hamiltonian(&self.engine).expect("Weyl context")
    }

    /// `Σ_{μ<ν} L_{μν}²`; defined on six modes.
    pub fn build_casimir_o6(&self) -> Result<Element<Rat>, Error> {
        require_modes(&self.engine, 6)?;
        rotation_casimir(&self.engine, &[1, 2, 3, 4, 5, 6])
    }

    /// Metaplectic su(1,1) on `modes`, with its commutation relations checked.
    pub fn build_su11(&self, modes: &[usize]) -> Result<Su11Realization, Error> {
        let j = metaplectic(&self.engine, modes)?;
        let two_j0 = j.j0.scale(&Rat::integer(2));
        if !(j.j0.commutator(&j.jplus)? - j.jplus.clone()).is_zero()
            || !(j.j0.commutator(&j.jminus)? + j.jminus.clone()).is_zero()
        {
            return Err(Error::RelationViolated(format!("[J0, J±] = ±J± on {modes:?}")));
        }
        if !(j.jplus.commutator(&j.jminus)? + two_j0).is_zero() {
            return Err(Error::RelationViolated(format!("[J+, J-] = -2J0 on {modes:?}")));
        }
        Ok(j)
    }

    pub fn build_su11_casimir(&self, modes: &[usize]) -> Result<Element<Rat>, Error> {
        let j = self.build_su11(modes)?;
        Ok(su11_casimir(&self.engine, &j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_is_antisymmetric_and_invariant() {
        let ctx = WeylContext::new(6).unwrap();
        let (l12, l21) = (ctx.build_l(1, 2).unwrap(), ctx.build_l(2, 1).unwrap());
        assert!((&l12 + &l21).is_zero());
        assert!(l12.commutator(&ctx.hamiltonian()).unwrap().is_zero());
        assert!(l12.commutator(&ctx.build_l(3, 4).unwrap()).unwrap().is_zero());
        assert!(ctx.build_l(1, 1).is_err());
        assert!(ctx.build_l(1, 7).is_err());
    }

    #[test]
    fn single_mode_casimir_is_constant() {
        let ctx = WeylContext::new(4).unwrap();
        let c = ctx.build_su11_casimir(&[1]).unwrap();
        assert_eq!(c.as_scalar(), Some(Rat::new(-3, 16).unwrap()));
    }

    #[test]
    fn pair_casimir_matches_rotation() {
        let ctx = WeylContext::new(4).unwrap();
        let c = ctx.build_su11_casimir(&[1, 2]).unwrap();
        let l = ctx.build_l(1, 2).unwrap();
        let rhs = (&l * &l + ctx.algebra().one()).scale(&Rat::new(-1, 4).unwrap());
        assert_eq!(c, rhs);
    }

    #[test]
    fn casimir_o6_is_central() {
        let ctx = WeylContext::new(6).unwrap();
        let c = ctx.build_casimir_o6().unwrap();
        assert!(c.commutator(&ctx.build_l(2, 5).unwrap()).unwrap().is_zero());
        assert!(WeylContext::new(4).unwrap().build_casimir_o6().is_err());
        assert!(WeylContext::new(5).is_err());
    }

    #[test]
    fn su11_rejects_empty() {
        let ctx = WeylContext::new(4).unwrap();
        assert!(ctx.build_su11(&[]).is_err());
        assert!(ctx.build_su11(&[1, 2, 3, 4]).is_ok());
    }
}
