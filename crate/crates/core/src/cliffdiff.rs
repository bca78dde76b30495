//! Clifford ⊗ differential-operator realization over `Q(i)`: spin and
//! orbital rotations, the osp(1|2) realizations on even index subsets and the
//! Bannai–Ito generators on six dimensions.

use std::sync::Arc;

use crate::coefficients::{GaussRat, Rat, Scalar};
use crate::ncalg::{Algebra, Element, Engine, Family, Kind, OpBuilder};
use crate::Error;

fn gr(n: i64, d: i64) -> GaussRat {
    GaussRat::real(Rat::new(n, d).unwrap())
}

fn minus_i() -> GaussRat {
    GaussRat::i().field_neg()
}

fn check<B: OpBuilder<GaussRat>>(b: &B, idx: &[usize]) -> Result<(), Error> {
    if b.family() != Family::CliffDiff {
        return Err(Error::InvalidContext(format!("expected a Clifford-differential algebra, got {:?}", b.family())));
    }
    for &m in idx {
        if !(1..=b.modes()).contains(&m) {
            return Err(Error::InvalidIndex(format!("index {m} outside 1..={}", b.modes())));
        }
    }
    Ok(())
}

fn distinct(mu: usize, nu: usize) -> Result<(), Error> {
    if mu == nu {
        Err(Error::InvalidIndex(format!("needs distinct indices, got ({mu}, {nu})")))
    } else {
        Ok(())
    }
}

/// `Σ_{μν} = (i/2) γ_μ γ_ν`
pub fn sigma<B: OpBuilder<GaussRat>>(b: &B, mu: usize, nu: usize) -> Result<B::Op, Error> {
    check(b, &[mu, nu])?;
    distinct(mu, nu)?;
    let gg = b.mul(&b.gen(Kind::Gamma, mu)?, &b.gen(Kind::Gamma, nu)?);
    Ok(b.scale(&gg, &GaussRat::new(Rat::zero(), Rat::new(1, 2).unwrap())))
}

/// Orbital part `-i(x_μ ∂_ν - x_ν ∂_μ)`.
pub fn orbital<B: OpBuilder<GaussRat>>(b: &B, mu: usize, nu: usize) -> Result<B::Op, Error> {
    check(b, &[mu, nu])?;
    distinct(mu, nu)?;
    let xd = |m, n| Ok::<_, Error>(b.mul(&b.gen(Kind::Position, m)?, &b.gen(Kind::Derivative, n)?));
    Ok(b.scale(&b.sub(&xd(mu, nu)?, &xd(nu, mu)?), &minus_i()))
}

/// Spinorial rotation `J_{μν} = -i(x_μ∂_ν - x_ν∂_μ) + Σ_{μν}`.
pub fn rotation<B: OpBuilder<GaussRat>>(b: &B, mu: usize, nu: usize) -> Result<B::Op, Error> {
    Ok(b.add(&orbital(b, mu, nu)?, &sigma(b, mu, nu)?))
}

/// osp(1|2) generators with grade involution for one index subset.
#[derive(Clone, Debug)]
pub struct Osp<Op> {
    pub subset: Vec<usize>,
    pub j0: Op,
    pub jplus: Op,
    pub jminus: Op,
    pub s: Op,
}

/// `J₋ = -iΣγ∂`, `J₊ = -iΣγx`, `J₀ = |A|/2 + Σx∂`, `S = i^{|A|/2} Πγ`.
pub fn osp<B: OpBuilder<GaussRat>>(b: &B, subset: &[usize]) -> Result<Osp<B::Op>, Error> {
    check(b, subset)?;
    let mut a = subset.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.len() != subset.len() || a.is_empty() || !a.len().is_multiple_of(2) {
        return Err(Error::InvalidIndex(format!("subset must be nonempty, even and without repeats: {subset:?}")));
    }
    let (mut jm, mut jp, mut xd, mut gammas) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for &m in &a {
        let (g, x, d) = (b.gen(Kind::Gamma, m)?, b.gen(Kind::Position, m)?, b.gen(Kind::Derivative, m)?);
        jm.push(b.mul(&g, &d));
        jp.push(b.mul(&g, &x));
        xd.push(b.mul(&x, &d));
        gammas.push(g);
    }
    let half_size = GaussRat::from_i64(a.len() as i64 / 2);
    let j0 = b.add(&b.constant(half_size), &b.sum(&xd));
    let s = b.scale(&b.product(&gammas), &GaussRat::i_pow(a.len() as i64 / 2));
    Ok(Osp {
        j0,
        jplus: b.scale(&b.sum(&jp), &minus_i()),
        jminus: b.scale(&b.sum(&jm), &minus_i()),
        s,
        subset: a,
    })
}

/// `C = ½([J₋, J₊] - 1) S`
pub fn osp_casimir<B: OpBuilder<GaussRat>>(b: &B, j: &Osp<B::Op>) -> B::Op {
    let inner = b.sub(&b.comm(&j.jminus, &j.jplus), &b.one());
    b.scale(&b.mul(&inner, &j.s), &gr(1, 2))
}

/// Which `L_{μν}` enters `M_i` and `Γ₁₂₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LConvention {
    /// `-i(x_μ∂_ν - x_ν∂_μ)`
    Orbital,
    /// `J_{μν}`, orbital plus spin.
    Total,
    /// `x_μ∂_ν - x_ν∂_μ`, without the factor `-i`.
    Real,
}

/// The three cyclic index quadruples `(a, b, c, d)` for `K₁, K₂, K₃`.
pub const BI_BLOCKS: [[usize; 4]; 3] = [[1, 2, 3, 4], [3, 4, 5, 6], [1, 2, 5, 6]];

/// Bannai–Ito data on six dimensions.
#[derive(Clone, Debug)]
pub struct BannaiIto<Op> {
    pub k: [Op; 3],
    /// `Γ₁ = J₁₂, Γ₂ = J₃₄, Γ₃ = J₅₆`
    pub gamma: [Op; 3],
    pub gamma123: Op,
}

pub fn bannai_ito<B: OpBuilder<GaussRat>>(b: &B, conv: LConvention) -> Result<BannaiIto<B::Op>, Error> {
    check(b, &[])?;
    if b.modes() != 6 {
        return Err(Error::InvalidContext(format!("Bannai–Ito generators need six dimensions, context has {}", b.modes())));
    }
    let l = |m, n| match conv {
        LConvention::Orbital => orbital(b, m, n),
        LConvention::Total => rotation(b, m, n),
        LConvention::Real => Ok(b.scale(&orbital(b, m, n)?, &GaussRat::i())),
    };
    let gg = |m, n| Ok::<_, Error>(b.mul(&b.gen(Kind::Gamma, m)?, &b.gen(Kind::Gamma, n)?));
    let mut k_ops = Vec::new();
    for blk in BI_BLOCKS {
        let mut sum = Vec::new();
        for (i, &mu) in blk.iter().enumerate() {
            for &nu in &blk[i + 1..] {
                sum.push(b.mul(&l(mu, nu)?, &gg(mu, nu)?));
            }
        }
        let ss = b.mul(&sigma(b, blk[0], blk[1])?, &sigma(b, blk[2], blk[3])?);
        let m = b.mul(&b.sum(&sum), &ss);
        k_ops.push(b.add(&m, &b.scale(&ss, &gr(3, 2))));
    }
    let gamma = [rotation(b, 1, 2)?, rotation(b, 3, 4)?, rotation(b, 5, 6)?];
    let mut ls = Vec::new();
    for mu in 1..=6 {
        for nu in mu + 1..=6 {
            ls.push(b.mul(&l(mu, nu)?, &sigma(b, mu, nu)?));
        }
    }
    let s3 = b.product(&[sigma(b, 1, 2)?, sigma(b, 3, 4)?, sigma(b, 5, 6)?]);
    let inner = b.add(&b.constant(gr(5, 2)), &b.scale(&b.sum(&ls), &minus_i()));
    let gamma123 = b.mul(&inner, &s3);
    let arr = |v: Vec<B::Op>| -> [B::Op; 3] { v.try_into().unwrap_or_else(|_| unreachable!()) };
    Ok(BannaiIto { k: arr(k_ops), gamma, gamma123 })
}

/// The same data read off osp(1|2) Casimirs: `K_i = C^{(block i)}`,
/// `Γ_j = C^{(pair j)}`, `Γ₁₂₃ = C^{(123456)}`.
pub fn bannai_ito_casimirs<B: OpBuilder<GaussRat>>(b: &B) -> Result<BannaiIto<B::Op>, Error> {
    check(b, &[1, 2, 3, 4, 5, 6])?;
    let c = |a: &[usize]| Ok::<_, Error>(osp_casimir(b, &osp(b, a)?));
    let k = [c(&BI_BLOCKS[0])?, c(&BI_BLOCKS[1])?, c(&BI_BLOCKS[2])?];
    let gamma = [c(&[1, 2])?, c(&[3, 4])?, c(&[5, 6])?];
    Ok(BannaiIto { k, gamma, gamma123: c(&[1, 2, 3, 4, 5, 6])? })
}

impl<Op: Clone> BannaiIto<Op> {
    /// `ω_k = ω_{ij} = 2Γ_kΓ₁₂₃ + 2Γ_iΓ_j` for `{i, j, k} = {1, 2, 3}`; `k` is 1-based.
    pub fn omega<B: OpBuilder<GaussRat, Op = Op>>(&self, b: &B, k: usize) -> Result<Op, Error> {
        if !(1..=3).contains(&k) {
            return Err(Error::InvalidIndex(format!("ω index {k} outside 1..=3")));
        }
        let (i, j) = match k {
            1 => (2, 3),
            2 => (3, 1),
            _ => (1, 2),
        };
        Ok(self.omega_with(b, k, i, j))
    }

    /// `2Γ_sΓ₁₂₃ + 2Γ_uΓ_w` where `Γ_s` belongs to the block shared by the
    /// two `K`s whose anticommutator produces `K_k`.
    pub fn omega_shared<B: OpBuilder<GaussRat, Op = Op>>(&self, b: &B, k: usize) -> Result<Op, Error> {
        let (s, u, w) = match k {
            1 => (3, 1, 2),
            2 => (1, 2, 3),
            3 => (2, 1, 3),
            _ => return Err(Error::InvalidIndex(format!("ω index {k} outside 1..=3"))),
        };
        Ok(self.omega_with(b, s, u, w))
    }

    fn omega_with<B: OpBuilder<GaussRat, Op = Op>>(&self, b: &B, s: usize, u: usize, w: usize) -> Op {
        let a = b.mul(&self.gamma[s - 1], &self.gamma123);
        let c = b.mul(&self.gamma[u - 1], &self.gamma[w - 1]);
        b.scale(&b.add(&a, &c), &GaussRat::from_i64(2))
    }
}

/// Engine-side wrapper over the Clifford-differential algebra in `N` dimensions.
#[derive(Clone, Debug)]
pub struct CliffDiffContext {
    engine: Engine<GaussRat>,
}

pub type OspRealization = Osp<Element<GaussRat>>;

impl CliffDiffContext {
    pub fn new(dim: usize) -> Result<Self, Error> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::InvalidContext(format!("dimension must be positive and even, got {dim}")));
        }
        Ok(CliffDiffContext { engine: Engine::new(Algebra::cliffdiff(dim)) })
    }

    pub fn engine(&self) -> &Engine<GaussRat> {
        &self.engine
    }

    pub fn algebra(&self) -> &Arc<Algebra<GaussRat>> {
        self.engine.algebra()
    }

    pub fn build_sigma(&self, mu: usize, nu: usize) -> Result<Element<GaussRat>, Error> {
        sigma(&self.engine, mu, nu)
    }

    pub fn build_j_rot(&self, mu: usize, nu: usize) -> Result<Element<GaussRat>, Error> {
        rotation(&self.engine, mu, nu)
    }

    /// osp(1|2) on `subset`, with `[J₀, J±] = ±J±`, `S² = 1`, `[S, J₀] = 0`
    /// and `{S, J±} = 0` checked.
    pub fn build_osp(&self, subset: &[usize]) -> Result<OspRealization, Error> {
        let j = osp(&self.engine, subset)?;
        let ok = (j.j0.commutator(&j.jplus)? - j.jplus.clone()).is_zero()
            && (j.j0.commutator(&j.jminus)? + j.jminus.clone()).is_zero()
            && (&j.s * &j.s) == self.algebra().one()
            && j.s.commutator(&j.j0)?.is_zero()
            && j.s.anticommutator(&j.jplus)?.is_zero()
            && j.s.anticommutator(&j.jminus)?.is_zero();
        if ok {
            Ok(j)
        } else {
            Err(Error::RelationViolated(format!("osp(1|2) relations on {subset:?}")))
        }
    }

    pub fn build_osp_casimir(&self, subset: &[usize]) -> Result<Element<GaussRat>, Error> {
        Ok(osp_casimir(&self.engine, &self.build_osp(subset)?))
    }

    pub fn build_bannai_ito(&self, conv: LConvention) -> Result<BannaiIto<Element<GaussRat>>, Error> {
        bannai_ito(&self.engine, conv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_squares_to_quarter() {
        let ctx = CliffDiffContext::new(6).unwrap();
        let s = ctx.build_sigma(1, 2).unwrap();
        assert_eq!((&s * &s).as_scalar(), Some(gr(1, 4)));
        assert!(s.commutator(&ctx.build_sigma(3, 4).unwrap()).unwrap().is_zero());
        assert!(ctx.build_sigma(2, 2).is_err());
    }

    #[test]
    fn rotations_leave_osp_invariant() {
        let ctx = CliffDiffContext::new(6).unwrap();
        let j = ctx.build_osp(&[1, 2, 3, 4, 5, 6]).unwrap();
        let r = ctx.build_j_rot(1, 2).unwrap();
        assert!(r.commutator(&j.jminus).unwrap().is_zero());
        assert!(r.commutator(&j.jplus).unwrap().is_zero());
        assert!(r.commutator(&ctx.build_j_rot(3, 4).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn odd_subsets_are_rejected() {
        let ctx = CliffDiffContext::new(6).unwrap();
        assert!(ctx.build_osp(&[1, 2, 3]).is_err());
        assert!(ctx.build_osp(&[]).is_err());
        assert!(CliffDiffContext::new(5).is_err());
    }
}
