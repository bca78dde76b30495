//! Racah (six oscillators) and Hahn (four oscillators) verification suites.

use std::time::Instant;

use crate::check::{cross_check, elapsed_ms, run_engine, CheckDef, OraclePoint, SuiteOptions};
use crate::coefficients::{Rat, Scalar};
use crate::fock_oracle::Model;
use crate::ncalg::{Engine, Family, OpBuilder};
use crate::report::{Context, SuiteReport};
use crate::weyl::{
    hahn_oscillator, metaplectic, racah_central, racah_generators, rotation, rotation_casimir, su11_casimir, Su11,
};
use crate::Error;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d).unwrap()
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|m| (m + 1..=n).map(move |k| (m, k))).collect()
}

/// Operators shared by the Racah checks.
pub struct RacahData<Op> {
    pub k: [Op; 3],
    /// `d, e₁, e₂`
    pub central: [Op; 3],
    /// `L_{μν}` for `μ < ν`, in lexicographic order.
    pub l: Vec<((usize, usize), Op)>,
    pub c1234: Op,
    pub c3456: Op,
    /// `C^{(μν)}` in the order of `l`.
    pub c_pair: Vec<Op>,
    pub j: Su11<Op>,
}

impl<Op> RacahData<Op> {
    fn l(&self, mu: usize, nu: usize) -> &Op {
        &self.l.iter().find(|(p, _)| *p == (mu, nu)).expect("pair").1
    }
}

pub fn racah_data<B: OpBuilder<Rat>>(b: &B) -> Result<RacahData<B::Op>, Error> {
    let (k1, k2) = racah_generators(b)?;
    let k3 = b.comm(&k1, &k2);
    let central = racah_central(b)?;
    let casimir = |modes: &[usize]| Ok::<_, Error>(su11_casimir(b, &metaplectic(b, modes)?));
    let mut l = Vec::new();
    let mut c_pair = Vec::new();
    for (m, n) in pairs(6) {
        l.push(((m, n), rotation(b, m, n)?));
        c_pair.push(casimir(&[m, n])?);
    }
    Ok(RacahData {
        k: [k1, k2, k3],
        central,
        l,
        c1234: casimir(&[1, 2, 3, 4])?,
        c3456: casimir(&[3, 4, 5, 6])?,
        c_pair,
        j: metaplectic(b, &[1, 2, 3, 4, 5, 6])?,
    })
}

pub fn racah_checks<B: OpBuilder<Rat> + 'static>() -> Vec<CheckDef<Rat, B, RacahData<B::Op>>> {
    let mut out = vec![
        CheckDef::zero("racah.a", "K3 - [K1, K2] = 0", |b: &B, d: &RacahData<B::Op>| {
            Ok(b.sub(&d.k[2], &b.comm(&d.k[0], &d.k[1])))
        }),
        CheckDef::zero("racah.b", "[K2, K3] - K2^2 - {K1, K2} - d K2 - e1 = 0", |b: &B, d: &RacahData<B::Op>| {
            let [k1, k2, k3] = &d.k;
            let rhs = b.sum([&b.mul(k2, k2), &b.anticomm(k1, k2), &b.mul(&d.central[0], k2), &d.central[1]]);
            Ok(b.sub(&b.comm(k2, k3), &rhs))
        }),
        CheckDef::zero("racah.c", "[K3, K1] - K1^2 - {K1, K2} - d K1 - e2 = 0", |b: &B, d: &RacahData<B::Op>| {
            let [k1, k2, k3] = &d.k;
            let rhs = b.sum([&b.mul(k1, k1), &b.anticomm(k1, k2), &b.mul(&d.central[0], k1), &d.central[2]]);
            Ok(b.sub(&b.comm(k3, k1), &rhs))
        }),
    ];
    for (ci, cname) in ["d", "e1", "e2"].into_iter().enumerate() {
        for ki in 0..2 {
            out.push(CheckDef::zero(
                format!("racah.d.{cname}.K{}", ki + 1),
                format!("[{cname}, K{}] = 0", ki + 1),
                move |b: &B, d: &RacahData<B::Op>| Ok(b.comm(&d.central[ci], &d.k[ki])),
            ));
        }
    }
    for ki in 0..3 {
        for (m, n) in [(1, 2), (3, 4), (5, 6)] {
            out.push(CheckDef::zero(
                format!("racah.e.K{}.L{m}{n}", ki + 1),
                format!("[K{}, L{m}{n}] = 0", ki + 1),
                move |b: &B, d: &RacahData<B::Op>| Ok(b.comm(&d.k[ki], d.l(m, n))),
            ));
        }
    }
    out.push(CheckDef::zero("racah.f.1234", "C(1234) + 2 K1 = 0", |b: &B, d: &RacahData<B::Op>| {
        Ok(b.add(&d.c1234, &b.scale(&d.k[0], &Rat::from_i64(2))))
    }));
    out.push(CheckDef::zero("racah.f.3456", "C(3456) + 2 K2 = 0", |b: &B, d: &RacahData<B::Op>| {
        Ok(b.add(&d.c3456, &b.scale(&d.k[1], &Rat::from_i64(2))))
    }));
    for (idx, (m, n)) in pairs(6).into_iter().enumerate() {
        out.push(CheckDef::zero(
            format!("racah.g.{m}{n}"),
            format!("C({m}{n}) + (L{m}{n}^2 + 1)/4 = 0"),
            move |b: &B, d: &RacahData<B::Op>| {
                let l = d.l(m, n);
                let q = b.scale(&b.add(&b.mul(l, l), &b.one()), &r(1, 4));
                Ok(b.add(&d.c_pair[idx], &q))
            },
        ));
    }
    for (jname, ji) in [("J0", 0), ("Jp", 1), ("Jm", 2)] {
        for (m, n) in pairs(6) {
            out.push(CheckDef::zero(
                format!("racah.h.{jname}.L{m}{n}"),
                format!("[{jname}(1..6), L{m}{n}] = 0"),
                move |b: &B, d: &RacahData<B::Op>| {
                    let j = [&d.j.j0, &d.j.jplus, &d.j.jminus][ji];
                    Ok(b.comm(j, d.l(m, n)))
                },
            ));
        }
    }
    out
}

/// Operators shared by the Hahn checks.
pub struct HahnData<Op> {
    pub m: [Op; 3],
    pub delta1: Op,
    pub delta2: Op,
    pub j0_12: Op,
    pub j0_34: Op,
    pub c12: Op,
    pub c34: Op,
    pub c1234: Op,
}

pub fn hahn_data<B: OpBuilder<Rat>>(b: &B) -> Result<HahnData<B::Op>, Error> {
    let h = hahn_oscillator(b)?;
    let m3 = b.comm(&h.m1, &h.m2);
    let (s12, s34) = (metaplectic(b, &[1, 2])?, metaplectic(b, &[3, 4])?);
    Ok(HahnData {
        m: [h.m1, h.m2, m3],
        delta1: h.delta1,
        delta2: h.delta2,
        c12: su11_casimir(b, &s12),
        c34: su11_casimir(b, &s34),
        c1234: su11_casimir(b, &metaplectic(b, &[1, 2, 3, 4])?),
        j0_12: s12.j0,
        j0_34: s34.j0,
    })
}

/// `2(J₀¹² + J₀³⁴)² + w(C¹² + C³⁴)`
fn abstract_delta2<B: OpBuilder<Rat>>(b: &B, d: &HahnData<B::Op>, w: i64) -> B::Op {
    let j = b.add(&d.j0_12, &d.j0_34);
    b.add(&b.scale(&b.mul(&j, &j), &Rat::from_i64(2)), &b.scale(&b.add(&d.c12, &d.c34), &Rat::from_i64(w)))
}

pub fn hahn_checks<B: OpBuilder<Rat> + 'static>() -> Vec<CheckDef<Rat, B, HahnData<B::Op>>> {
    let mut out = vec![
        CheckDef::zero("hahn.a", "M3 - [M1, M2] = 0", |b: &B, d: &HahnData<B::Op>| {
            Ok(b.sub(&d.m[2], &b.comm(&d.m[0], &d.m[1])))
        }),
        CheckDef::zero("hahn.b", "[M2, M3] + 2{M1, M2} - delta1 = 0", |b: &B, d: &HahnData<B::Op>| {
            let [m1, m2, m3] = &d.m;
            let lhs = b.add(&b.comm(m2, m3), &b.scale(&b.anticomm(m1, m2), &Rat::from_i64(2)));
            Ok(b.sub(&lhs, &d.delta1))
        }),
        CheckDef::zero("hahn.c", "[M3, M1] + 2 M1^2 + 4 M2 - delta2 = 0", |b: &B, d: &HahnData<B::Op>| {
            let [m1, m2, m3] = &d.m;
            let two = Rat::from_i64(2);
            let lhs = b.sum([&b.comm(m3, m1), &b.scale(&b.mul(m1, m1), &two), &b.scale(m2, &Rat::from_i64(4))]);
            Ok(b.sub(&lhs, &d.delta2))
        }),
    ];
    for (dname, di) in [("delta1", 0), ("delta2", 1)] {
        for mi in 0..2 {
            out.push(CheckDef::zero(
                format!("hahn.d.{dname}.M{}", mi + 1),
                format!("[{dname}, M{}] = 0", mi + 1),
                move |b: &B, d: &HahnData<B::Op>| Ok(b.comm([&d.delta1, &d.delta2][di], &d.m[mi])),
            ));
        }
    }
    out.push(CheckDef::zero(
        "hahn.e.delta1",
        "4(J0(12) + J0(34))(C(12) - C(34)) - delta1 = 0",
        |b: &B, d: &HahnData<B::Op>| {
            let j = b.add(&d.j0_12, &d.j0_34);
            let abs = b.scale(&b.mul(&j, &b.sub(&d.c12, &d.c34)), &Rat::from_i64(4));
            Ok(b.sub(&abs, &d.delta1))
        },
    ));
    out.push(CheckDef::zero(
        "hahn.e.delta2",
        "2(J0(12) + J0(34))^2 + (C(12) + C(34)) - delta2 = 0",
        |b: &B, d: &HahnData<B::Op>| Ok(b.sub(&abstract_delta2(b, d, 1), &d.delta2)),
    ));
    out.push(
        CheckDef::zero(
            "hahn.e.delta2.weight4",
            "2(J0(12) + J0(34))^2 + 4(C(12) + C(34)) - delta2 = 0",
            |b: &B, d: &HahnData<B::Op>| Ok(b.sub(&abstract_delta2(b, d, 4), &d.delta2)),
        )
        .informative(),
    );
    out.push(CheckDef::zero("hahn.f.M1", "M1 - (J0(12) - J0(34)) = 0", |b: &B, d: &HahnData<B::Op>| {
        Ok(b.sub(&d.m[0], &b.sub(&d.j0_12, &d.j0_34)))
    }));
    out.push(CheckDef::zero("hahn.f.M2", "M2 - C(1234) = 0", |b: &B, d: &HahnData<B::Op>| Ok(b.sub(&d.m[1], &d.c1234))));
    out.push(CheckDef::zero("hahn.f.C1234", "C(1234) + (1/4) sum L^2 over modes 1..4 = 0", |b: &B, d: &HahnData<B::Op>| {
        Ok(b.add(&d.c1234, &b.scale(&rotation_casimir(b, &[1, 2, 3, 4])?, &r(1, 4))))
    }));
    out
}

fn context(family: Family, modes: usize, opts: &SuiteOptions) -> Context {
    Context { family, modes, seed: opts.seed, fit_cap: None, oracle: opts.oracle, oracle_degree: opts.oracle_degree }
}

pub fn run_racah_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let t = Instant::now();
    let engine = Engine::new(crate::ncalg::Algebra::weyl(6));
    let data = racah_data(&engine)?;
    let setup = elapsed_ms(t);
    let mut checks = run_engine(&engine, &data, &racah_checks());
    if opts.oracle {
        let model = Model::weyl(6);
        let data = racah_data(&crate::fock_oracle::OracleBuilder::new(&model))?;
        cross_check(&[OraclePoint { label: None, model, data }], &racah_checks(), &mut checks, opts.oracle_degree);
    }
    Ok(SuiteReport::new("racah", context(Family::Weyl, 6, opts), checks, setup))
}

pub fn run_hahn_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let t = Instant::now();
    let engine = Engine::new(crate::ncalg::Algebra::weyl(4));
    let data = hahn_data(&engine)?;
    let setup = elapsed_ms(t);
    let mut checks = run_engine(&engine, &data, &hahn_checks());
    if opts.oracle {
        let model = Model::weyl(4);
        let data = hahn_data(&crate::fock_oracle::OracleBuilder::new(&model))?;
        cross_check(&[OraclePoint { label: None, model, data }], &hahn_checks(), &mut checks, opts.oracle_degree);
    }
    Ok(SuiteReport::new("hahn", context(Family::Weyl, 4, opts), checks, setup))
}
