//! Bannai–Ito (Clifford-differential, six dimensions), Askey–Wilson (six
//! q-oscillators) and q-Hahn (four q-oscillators) verification suites.

use std::ops::RangeInclusive;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::{
    attach_evidence, cross_check, elapsed_ms, merge_evidence, oracle_evidence, run_engine, CheckDef, OracleEvidence, OraclePoint,
    SuiteOptions,
};
use crate::cliffdiff::{bannai_ito, bannai_ito_casimirs, osp, osp_casimir, BannaiIto, LConvention, Osp, BI_BLOCKS};
use crate::coefficients::{CoeffError, GaussRat, Rat, RatFunc, Scalar, Specialize, Zp};
use crate::fock_oracle::{Model, Node, OracleBuilder};
use crate::ncalg::{Algebra, Element, Engine, Family, OpBuilder};
use crate::qosc::{
    aw_central, aw_generator, fit_central_combination, q_casimir, q_metaplectic, q_rotation, qhahn_pair, serre_residuals,
    serre_residuals_scaled, uq_residual, FitOutcome, FitTerm, QSu11, AW_CENTRAL_NAMES,
};
use crate::report::{Context, SuiteReport};
use crate::Error;

fn label(idx: &[usize]) -> String {
    idx.iter().map(|i| i.to_string()).collect()
}

/// All even, nonempty subsets of `1..=n` in order of size, then lexicographically.
fn even_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..1 << n)
        .filter(|m| m.count_ones() % 2 == 0)
        .map(|m| (1..=n).filter(|i| m & (1 << (i - 1)) != 0).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

fn context(family: Family, modes: usize, fit_cap: Option<u32>, opts: &SuiteOptions) -> Context {
    Context { family, modes, seed: opts.seed, fit_cap, oracle: opts.oracle, oracle_degree: opts.oracle_degree }
}

/// Cyclic `(i, j, k)` with `{K_i, K_j}` producing `K_k`.
const CYCLIC: [(usize, usize, usize); 3] = [(1, 2, 3), (2, 3, 1), (3, 1, 2)];

// Bannai–Ito

pub struct BiData<Op> {
    /// osp(1|2) on every even subset of `{1..6}`, with its Casimir.
    pub osp: Vec<(Osp<Op>, Op)>,
    /// Generators with the orbital reading of `L_{μν}`.
    pub printed: BannaiIto<Op>,
    pub total: BannaiIto<Op>,
    pub real: BannaiIto<Op>,
    /// `K_i`, `Γ_j`, `Γ₁₂₃` as osp(1|2) Casimirs.
    pub casimirs: BannaiIto<Op>,
}

pub fn bi_data<B: OpBuilder<GaussRat>>(b: &B) -> Result<BiData<B::Op>, Error> {
    let mut sets = Vec::new();
    for a in even_subsets(6) {
        let j = osp(b, &a)?;
        let c = osp_casimir(b, &j);
        sets.push((j, c));
    }
    Ok(BiData {
        osp: sets,
        printed: bannai_ito(b, LConvention::Orbital)?,
        total: bannai_ito(b, LConvention::Total)?,
        real: bannai_ito(b, LConvention::Real)?,
        casimirs: bannai_ito_casimirs(b)?,
    })
}

fn osp_at<Op>(d: &BiData<Op>, n: usize) -> &(Osp<Op>, Op) {
    &d.osp[n]
}

type BiCheck<B> = CheckDef<GaussRat, B, BiData<<B as OpBuilder<GaussRat>>::Op>>;

fn bi_relation<B: OpBuilder<GaussRat>>(b: &B, g: &BannaiIto<B::Op>, (i, j, k): (usize, usize, usize), shared: bool) -> Result<B::Op, Error> {
    let omega = if shared { g.omega_shared(b, k)? } else { g.omega(b, k)? };
    let lhs = b.anticomm(&g.k[i - 1], &g.k[j - 1]);
    Ok(b.sub(&b.sub(&lhs, &g.k[k - 1]), &omega))
}

pub fn bi_checks<B: OpBuilder<GaussRat> + 'static>() -> Vec<BiCheck<B>> {
    let two = GaussRat::from_i64(2);
    let mut out: Vec<BiCheck<B>> = Vec::new();
    for (n, a) in even_subsets(6).into_iter().enumerate() {
        let s = label(&a);
        out.push(CheckDef::zero(format!("bi.osp.{s}.J0Jp"), format!("[J0, J+] - J+ = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.sub(&b.comm(&j.j0, &j.jplus), &j.jplus))
        }));
        out.push(CheckDef::zero(format!("bi.osp.{s}.J0Jm"), format!("[J0, J-] + J- = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.add(&b.comm(&j.j0, &j.jminus), &j.jminus))
        }));
        let t = two.clone();
        out.push(
            CheckDef::any_zero(
                format!("bi.osp.{s}.sign"),
                format!("{{J+, J-}} = +2 J0 or {{J+, J-}} = -2 J0 on {{{s}}}"),
                &["+2J0", "-2J0"],
                move |b: &B, d: &BiData<B::Op>| {
                    let j = &osp_at(d, n).0;
                    let ac = b.anticomm(&j.jplus, &j.jminus);
                    let tj = b.scale(&j.j0, &t);
                    Ok(vec![b.sub(&ac, &tj), b.add(&ac, &tj)])
                },
            )
            .informative(),
        );
        out.push(CheckDef::zero(format!("bi.grade.{s}.S2"), format!("S^2 - 1 = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.sub(&b.mul(&j.s, &j.s), &b.one()))
        }));
        out.push(CheckDef::zero(format!("bi.grade.{s}.SJ0"), format!("[S, J0] = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.comm(&j.s, &j.j0))
        }));
        out.push(CheckDef::zero(format!("bi.grade.{s}.SJp"), format!("{{S, J+}} = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.anticomm(&j.s, &j.jplus))
        }));
        out.push(CheckDef::zero(format!("bi.grade.{s}.SJm"), format!("{{S, J-}} = 0 on {{{s}}}"), move |b: &B, d: &BiData<B::Op>| {
            let j = &osp_at(d, n).0;
            Ok(b.anticomm(&j.s, &j.jminus))
        }));
        for (name, pick) in [("J0", 0usize), ("Jp", 1), ("Jm", 2), ("S", 3)] {
            out.push(CheckDef::zero(
                format!("bi.casimir.{s}.{name}"),
                format!("[C, {name}] = 0 on {{{s}}}"),
                move |b: &B, d: &BiData<B::Op>| {
                    let (j, c) = osp_at(d, n);
                    Ok(b.comm(c, [&j.j0, &j.jplus, &j.jminus, &j.s][pick]))
                },
            ));
        }
    }
    for ijk in CYCLIC {
        let (i, j, k) = ijk;
        out.push(CheckDef::zero(
            format!("bi.rel.{k}"),
            format!("{{K{i}, K{j}}} - K{k} - omega{k} = 0"),
            move |b: &B, d: &BiData<B::Op>| bi_relation(b, &d.printed, ijk, false),
        ));
    }
    for ijk in CYCLIC {
        let (i, j, k) = ijk;
        out.push(
            CheckDef::zero(
                format!("bi.rel.total.{k}"),
                format!("{{K{i}, K{j}}} - K{k} - omega{k} = 0, L read as J"),
                move |b: &B, d: &BiData<B::Op>| bi_relation(b, &d.total, ijk, false),
            )
            .informative(),
        );
    }
    for ijk in CYCLIC {
        let (i, j, k) = ijk;
        out.push(
            CheckDef::zero(
                format!("bi.rel.casimir.{k}"),
                format!("{{C(K{i}), C(K{j})}} - C(K{k}) - omega'{k} = 0, omega' built on the shared pair"),
                move |b: &B, d: &BiData<B::Op>| bi_relation(b, &d.casimirs, ijk, true),
            )
            .informative(),
        );
    }
    for (i, blk) in BI_BLOCKS.iter().enumerate() {
        let s = label(blk);
        out.push(CheckDef::zero(format!("bi.pair.{s}"), format!("C({s}) - K{} = 0", i + 1), move |b: &B, d: &BiData<B::Op>| {
            Ok(b.sub(&d.casimirs.k[i], &d.printed.k[i]))
        }));
    }
    for (i, blk) in BI_BLOCKS.iter().enumerate() {
        let s = label(blk);
        out.push(
            CheckDef::zero(
                format!("bi.pair.real.{s}"),
                format!("C({s}) - 4 K{} = 0, L read as x d - x d", i + 1),
                move |b: &B, d: &BiData<B::Op>| Ok(b.sub(&d.casimirs.k[i], &b.scale(&d.real.k[i], &GaussRat::from_i64(4)))),
            )
            .informative(),
        );
    }
    for i in 0..3 {
        for (j, pair) in ["12", "34", "56"].into_iter().enumerate() {
            out.push(CheckDef::zero(
                format!("bi.comm.K{}.J{pair}", i + 1),
                format!("[K{}, J{pair}] = 0", i + 1),
                move |b: &B, d: &BiData<B::Op>| Ok(b.comm(&d.printed.k[i], &d.printed.gamma[j])),
            ));
        }
    }
    for i in 0..3 {
        out.push(CheckDef::zero(
            format!("bi.comm.K{}.Gamma123", i + 1),
            format!("[K{}, Gamma123] = 0", i + 1),
            move |b: &B, d: &BiData<B::Op>| Ok(b.comm(&d.printed.k[i], &d.printed.gamma123)),
        ));
    }
    for i in 0..3 {
        out.push(
            CheckDef::zero(
                format!("bi.comm.real.K{}.Gamma123", i + 1),
                format!("[K{}, Gamma123] = 0, L read as x d - x d", i + 1),
                move |b: &B, d: &BiData<B::Op>| Ok(b.comm(&d.real.k[i], &d.real.gamma123)),
            )
            .informative(),
        );
    }
    out
}

pub fn run_bannai_ito_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let t = Instant::now();
    let engine = Engine::new(Algebra::cliffdiff(6));
    let data = bi_data(&engine)?;
    let setup = elapsed_ms(t);
    let mut checks = run_engine(&engine, &data, &bi_checks());
    if opts.oracle {
        let model = Model::cliffdiff(6);
        let data = bi_data(&OracleBuilder::new(&model))?;
        cross_check(&[OraclePoint { label: None, model, data }], &bi_checks(), &mut checks, opts.oracle_degree);
    }
    Ok(SuiteReport::new("bannai-ito", context(Family::CliffDiff, 6, None, opts), checks, setup))
}

// Central polynomials and fits

/// `Σ coeff · Π central^e · basis[i]` through a builder.
fn combination<S: Scalar, B: OpBuilder<S>>(b: &B, terms: &[FitTerm<S>], basis: &[B::Op], central: &[B::Op]) -> B::Op {
    let parts: Vec<B::Op> = terms
        .iter()
        .map(|t| {
            let mut m = basis[t.basis_index].clone();
            for (g, &e) in central.iter().zip(&t.monomial.0) {
                for _ in 0..e {
                    m = b.mul(g, &m);
                }
            }
            b.scale(&m, &t.coeff)
        })
        .collect();
    b.sum(&parts)
}

fn scale_terms<S: Scalar>(terms: impl IntoIterator<Item = FitTerm<S>>, c: &S) -> Vec<FitTerm<S>> {
    terms.into_iter().map(|t| FitTerm { coeff: t.coeff.field_mul(c), basis_index: 0, ..t }).collect()
}

fn map_terms<S, T>(terms: &[FitTerm<S>], f: &impl Fn(&S) -> Result<T, CoeffError>) -> Result<Vec<FitTerm<T>>, Error> {
    terms.iter().map(|t| Ok(FitTerm { basis_index: t.basis_index, monomial: t.monomial.clone(), coeff: f(&t.coeff)? })).collect()
}

/// `Σ coeff · monomial` with the given generator names.
pub fn render_polynomial<S: Scalar>(terms: &[FitTerm<S>], names: &[&str]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut sorted: Vec<&FitTerm<S>> = terms.iter().collect();
    sorted.sort_by(|a, b| a.monomial.degree().cmp(&b.monomial.degree()).then_with(|| a.monomial.cmp(&b.monomial)));
    sorted
        .iter()
        .map(|t| if t.monomial.is_one() { format!("({})", t.coeff) } else { format!("({})*{}", t.coeff, t.monomial.render(names)) })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn max_degree<S>(terms: &[FitTerm<S>]) -> u32 {
    terms.iter().map(|t| t.monomial.degree()).max().unwrap_or(0)
}

/// `v0` for sampling, drawn from the seed.
fn sample_point(rng: &mut ChaCha8Rng) -> Zp {
    Zp::new(rng.gen_range(2..(1u64 << 61) - 2))
}

/// `v0 = ±2` for the exact oracle point, the sign drawn from the seed. Small
/// integers keep the rational arithmetic of deep trees cheap.
fn exact_point(rng: &mut ChaCha8Rng) -> Rat {
    Rat::from_i64(if rng.gen::<bool>() { 2 } else { -2 })
}

/// One oracle realization per point; `suffix` marks the coefficient field.
fn q_points<T: Scalar, D>(
    modes: usize,
    points: &[T],
    suffix: &str,
    data: impl Fn(&OracleBuilder<T>, &T) -> Result<D, Error>,
) -> Result<Vec<OraclePoint<T, D>>, Error> {
    points
        .iter()
        .map(|v0| {
            let model = Model::qosc(modes, v0.clone())?;
            let data = data(&OracleBuilder::new(&model), v0)?;
            Ok(OraclePoint { label: Some(format!("v0={v0}{suffix}")), model, data })
        })
        .collect()
}

type OracleDefs<T, D> = [CheckDef<T, OracleBuilder<T>, D>];

/// Oracle evidence of the q-family: one exact rational point and two random
/// points modulo the sampling prime, which guard against accidental
/// cancellation at a single `v0`.
fn q_evidence<DR: Sync, DZ: Sync>(
    rng: &mut ChaCha8Rng,
    modes: usize,
    opts: &SuiteOptions,
    exact: (impl Fn(&OracleBuilder<Rat>, &Rat) -> Result<DR, Error>, &OracleDefs<Rat, DR>),
    sampled: (impl Fn(&OracleBuilder<Zp>, &Zp) -> Result<DZ, Error>, &OracleDefs<Zp, DZ>),
) -> Result<Vec<Option<OracleEvidence>>, Error> {
    let rat = q_points(modes, &[exact_point(rng)], "", exact.0)?;
    let zp = q_points(modes, &[sample_point(rng), sample_point(rng)], " mod p", sampled.0)?;
    let mut ev = oracle_evidence(&rat, exact.1, opts.oracle_degree);
    merge_evidence(&mut ev, oracle_evidence(&zp, sampled.1, opts.oracle_degree));
    Ok(ev)
}

// Askey–Wilson

/// The ranges on which `U_q(su(1,1))` is checked.
pub const AW_RANGES: [RangeInclusive<usize>; 6] = [1..=2, 3..=4, 5..=6, 1..=4, 3..=6, 1..=6];

/// Central structure constants of the Askey–Wilson relations, as
/// polynomials in [`aw_central`].
#[derive(Clone, Debug)]
pub struct AwStructure<S> {
    pub alpha: Vec<FitTerm<S>>,
    pub beta: Vec<FitTerm<S>>,
    pub gamma: Vec<FitTerm<S>>,
    /// `K_C - K_C⁰` with `K_C⁰ = -[K_A, K_B]_q/(q² - q⁻²)`.
    pub kc_shift: Vec<FitTerm<S>>,
}

impl<S> AwStructure<S> {
    /// Coefficientwise image, e.g. a specialization at `v = v0`.
    pub fn map<T>(&self, f: impl Fn(&S) -> Result<T, CoeffError>) -> Result<AwStructure<T>, Error> {
        Ok(AwStructure {
            alpha: map_terms(&self.alpha, &f)?,
            beta: map_terms(&self.beta, &f)?,
            gamma: map_terms(&self.gamma, &f)?,
            kc_shift: map_terms(&self.kc_shift, &f)?,
        })
    }
}

pub struct AwClosure<Op> {
    pub kc: Op,
    pub alpha: Op,
    pub beta: Op,
    pub gamma: Op,
}

pub struct AwData<Op> {
    /// In the order of [`AW_RANGES`].
    pub su11: Vec<QSu11<Op>>,
    /// `L_{i,i+1}` for `i = 1..5`.
    pub l: Vec<Op>,
    pub ka: Op,
    pub kb: Op,
    pub central: Vec<Op>,
    pub closure: Result<AwClosure<Op>, FitFailure>,
}

fn q_consts<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<(S, S, S), Error> {
    let (q, q_inv) = (b.v_pow(4)?, b.v_pow(-4)?);
    let qq = q.field_add(&q_inv);
    let d = b.v_pow(8)?.field_sub(&b.v_pow(-8)?);
    Ok((q, qq, d))
}

/// `[x, y]_q / (q² - q⁻²)`
fn aw_bracket<S: Scalar, B: OpBuilder<S>>(b: &B, x: &B::Op, y: &B::Op) -> Result<B::Op, Error> {
    let (q, _, d) = q_consts(b)?;
    Ok(b.scale(&b.qcomm(x, y, &q)?, &d.field_inv()?))
}

fn aw_kc0<S: Scalar, B: OpBuilder<S>>(b: &B, ka: &B::Op, kb: &B::Op) -> Result<B::Op, Error> {
    Ok(b.neg(&aw_bracket(b, ka, kb)?))
}

pub fn aw_data<S: Scalar, B: OpBuilder<S>>(b: &B, fit: &Result<AwStructure<S>, FitFailure>) -> Result<AwData<B::Op>, Error> {
    let su11 = AW_RANGES.iter().map(|r| q_metaplectic(b, r.clone())).collect::<Result<Vec<_>, _>>()?;
    let l = (1..=5).map(|i| q_rotation(b, i)).collect::<Result<Vec<_>, _>>()?;
    let ka = aw_generator(b, &q_casimir(b, &su11[3])?)?;
    let kb = aw_generator(b, &q_casimir(b, &su11[4])?)?;
    let central = aw_central(b)?;
    let closure = match fit {
        Ok(f) => {
            let one = [b.one()];
            let kc = b.add(&aw_kc0(b, &ka, &kb)?, &combination(b, &f.kc_shift, &one, &central));
            Ok(AwClosure {
                kc,
                alpha: combination(b, &f.alpha, &one, &central),
                beta: combination(b, &f.beta, &one, &central),
                gamma: combination(b, &f.gamma, &one, &central),
            })
        }
        Err(e) => Err(e.clone()),
    };
    Ok(AwData { su11, l, ka, kb, central, closure })
}

/// Why a fit did not produce an identity; cloned into every dependent check.
#[derive(Clone, Debug)]
pub struct FitFailure {
    pub residual_terms: usize,
    pub reason: String,
}

impl FitFailure {
    fn error(&self) -> Error {
        Error::Unfitted { residual_terms: self.residual_terms, reason: self.reason.clone() }
    }
}

fn fitted(outcome: FitOutcome<RatFunc>, what: &str) -> Result<Vec<FitTerm<RatFunc>>, FitFailure> {
    match outcome {
        FitOutcome::Solved { terms } => Ok(terms),
        FitOutcome::Failed { residual_terms, reason } => {
            Err(FitFailure { residual_terms, reason: format!("{what}: {reason}") })
        }
    }
}

/// Discover `α, β, γ` and `K_C` by exact fitting:
/// `[K_B, K_C⁰]_q/(q² - q⁻²) + K_A` over `{1, K_B}` fixes `α` and `γ`, then
/// each cyclic relation is fitted over `{1}`.
pub fn discover_aw(engine: &Engine<RatFunc>, cap: u32, v0: Zp) -> Result<Result<AwStructure<RatFunc>, FitFailure>, Error> {
    let b = engine;
    let d = aw_data(b, &Err(FitFailure { residual_terms: 0, reason: String::new() }))?;
    let (_, qq, _) = q_consts(b)?;
    let one = b.one();
    let kc0 = aw_kc0(b, &d.ka, &d.kb)?;
    let r2 = b.add(&aw_bracket(b, &d.kb, &kc0)?, &d.ka);
    let fit2 = match fitted(fit_central_combination(&r2, &[one.clone(), d.kb.clone()], &d.central, cap, v0)?, "relation 2") {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    let (c0, c1): (Vec<_>, Vec<_>) = fit2.into_iter().partition(|t| t.basis_index == 0);
    let kc_shift = scale_terms(c1, &qq.field_neg());
    let kc = b.add(&kc0, &combination(b, &kc_shift, std::slice::from_ref(&one), &d.central));
    let fit_unit = |target: Element<RatFunc>, what: &str| -> Result<Result<Vec<FitTerm<RatFunc>>, FitFailure>, Error> {
        Ok(fitted(fit_central_combination(&target, std::slice::from_ref(&one), &d.central, cap, v0)?, what).map(|t| scale_terms(t, &qq)))
    };
    let gamma = match fit_unit(b.add(&aw_bracket(b, &d.ka, &d.kb)?, &kc), "relation 1")? {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    let beta = match fit_unit(b.add(&aw_bracket(b, &kc, &d.ka)?, &d.kb), "relation 3")? {
        Ok(t) => t,
        Err(e) => return Ok(Err(e)),
    };
    Ok(Ok(AwStructure { alpha: scale_terms(c0, &qq), beta, gamma, kc_shift }))
}

type AwCheck<S, B> = CheckDef<S, B, AwData<<B as OpBuilder<S>>::Op>>;

fn closure<Op>(d: &AwData<Op>) -> Result<&AwClosure<Op>, Error> {
    d.closure.as_ref().map_err(FitFailure::error)
}

pub fn aw_checks<S: Scalar, B: OpBuilder<S> + 'static>() -> Vec<AwCheck<S, B>> {
    let mut out: Vec<AwCheck<S, B>> = Vec::new();
    for (n, r) in AW_RANGES.iter().enumerate() {
        let s = format!("{}..{}", r.start(), r.end());
        out.push(CheckDef::zero(format!("aw.uq.{s}.J0Jp"), format!("[J0, J+] - J+ = 0 on {s}"), move |b: &B, d: &AwData<B::Op>| {
            let j = &d.su11[n];
            Ok(b.sub(&b.comm(&j.j0, &j.jplus), &j.jplus))
        }));
        out.push(CheckDef::zero(format!("aw.uq.{s}.J0Jm"), format!("[J0, J-] + J- = 0 on {s}"), move |b: &B, d: &AwData<B::Op>| {
            let j = &d.su11[n];
            Ok(b.add(&b.comm(&j.j0, &j.jminus), &j.jminus))
        }));
        out.push(CheckDef::zero(
            format!("aw.uq.{s}.JmJp"),
            format!("J- J+ - q^2 J+ J- - (q^(4 J0) - 1)/(q - q^-1) = 0 on {s}"),
            move |b: &B, d: &AwData<B::Op>| uq_residual(b, &d.su11[n]),
        ));
        out.push(CheckDef::zero(format!("aw.uq.{s}.q2j0"), format!("q^(2 J0) q^(-2 J0) - 1 = 0 on {s}"), move |b: &B, d: &AwData<B::Op>| {
            let j = &d.su11[n];
            Ok(b.sub(&b.mul(&j.q2j0, &j.q2j0_inv), &b.one()))
        }));
    }
    for i in 1..=5 {
        for k in i + 2..=5 {
            out.push(CheckDef::zero(
                format!("aw.o6.L{i}{}.L{k}{}", i + 1, k + 1),
                format!("[L{i}{}, L{k}{}] = 0", i + 1, k + 1),
                move |b: &B, d: &AwData<B::Op>| Ok(b.comm(&d.l[i - 1], &d.l[k - 1])),
            ));
        }
    }
    for i in 2..=5 {
        let (x, y) = (format!("L{}{i}", i - 1), format!("L{i}{}", i + 1));
        for (r, (p, s)) in [(&x, &y), (&y, &x)].into_iter().enumerate() {
            out.push(CheckDef::zero(
                format!("aw.serre.{i}.{}", r + 1),
                format!("{p} {s}^2 - (q^(1/2) + q^(-1/2)) {s} {p} {s} + {s}^2 {p} + {p} = 0"),
                move |b: &B, _: &AwData<B::Op>| Ok(serre_residuals(b, i)?[r].clone()),
            ));
        }
        for r in 0..2 {
            out.push(
                CheckDef::zero(
                    format!("aw.serre.{i}.{}.scaled", r + 1),
                    format!("relation aw.serre.{i}.{} for q^(1/2) L", r + 1),
                    move |b: &B, _: &AwData<B::Op>| Ok(serre_residuals_scaled(b, i, &b.v_pow(2)?)?[r].clone()),
                )
                .informative(),
            );
        }
    }
    for (name, pick) in [("J0", 0usize), ("Jp", 1), ("Jm", 2)] {
        for i in 1..=5 {
            out.push(CheckDef::zero(
                format!("aw.howe.{name}.L{i}{}", i + 1),
                format!("[{name}(1..6), L{i}{}] = 0", i + 1),
                move |b: &B, d: &AwData<B::Op>| {
                    let j = &d.su11[5];
                    Ok(b.comm([&j.j0, &j.jplus, &j.jminus][pick], &d.l[i - 1]))
                },
            ));
        }
    }
    for (name, pick) in [("KA", 0usize), ("KB", 1)] {
        for i in [1, 3, 5] {
            out.push(CheckDef::zero(
                format!("aw.comm.{name}.L{i}{}", i + 1),
                format!("[{name}, L{i}{}] = 0", i + 1),
                move |b: &B, d: &AwData<B::Op>| Ok(b.comm([&d.ka, &d.kb][pick], &d.l[i - 1])),
            ));
        }
    }
    out.push(CheckDef::zero(
        "aw.closure.1",
        "[KA, KB]_q/(q^2 - q^-2) + KC - gamma/(q + q^-1) = 0",
        |b: &B, d: &AwData<B::Op>| {
            let c = closure(d)?;
            let (_, qq, _) = q_consts(b)?;
            Ok(b.sub(&b.add(&aw_bracket(b, &d.ka, &d.kb)?, &c.kc), &b.scale(&c.gamma, &qq.field_inv()?)))
        },
    ));
    out.push(CheckDef::zero(
        "aw.closure.2",
        "[KB, KC]_q/(q^2 - q^-2) + KA - alpha/(q + q^-1) = 0",
        |b: &B, d: &AwData<B::Op>| {
            let c = closure(d)?;
            let (_, qq, _) = q_consts(b)?;
            Ok(b.sub(&b.add(&aw_bracket(b, &d.kb, &c.kc)?, &d.ka), &b.scale(&c.alpha, &qq.field_inv()?)))
        },
    ));
    out.push(CheckDef::zero(
        "aw.closure.3",
        "[KC, KA]_q/(q^2 - q^-2) + KB - beta/(q + q^-1) = 0",
        |b: &B, d: &AwData<B::Op>| {
            let c = closure(d)?;
            let (_, qq, _) = q_consts(b)?;
            Ok(b.sub(&b.add(&aw_bracket(b, &c.kc, &d.ka)?, &d.kb), &b.scale(&c.beta, &qq.field_inv()?)))
        },
    ));
    for (cname, cpick) in [("alpha", 0usize), ("beta", 1), ("gamma", 2)] {
        for (kname, kpick) in [("KA", 0usize), ("KB", 1), ("KC", 2)] {
            out.push(CheckDef::zero(
                format!("aw.central.{cname}.{kname}"),
                format!("[{cname}, {kname}] = 0"),
                move |b: &B, d: &AwData<B::Op>| {
                    let c = closure(d)?;
                    let x = [&c.alpha, &c.beta, &c.gamma][cpick];
                    Ok(b.comm(x, [&d.ka, &d.kb, &c.kc][kpick]))
                },
            ));
        }
    }
    out
}

/// [`aw_data`] with the structure constants mapped by `f`.
fn aw_data_at<T: Scalar>(
    b: &OracleBuilder<T>,
    fit: &Result<AwStructure<RatFunc>, FitFailure>,
    f: impl Fn(&RatFunc) -> Result<T, CoeffError>,
) -> Result<AwData<Node<T>>, Error> {
    let fit = match fit {
        Ok(s) => Ok(s.map(f)?),
        Err(e) => Err(e.clone()),
    };
    aw_data(b, &fit)
}

pub fn run_aw_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let engine = Engine::new(Algebra::qosc(6, RatFunc::v())?);
    let fit = discover_aw(&engine, opts.fit_cap, sample_point(&mut rng))?;
    let data = aw_data(&engine, &fit)?;
    let setup = elapsed_ms(t);
    let mut checks = run_engine(&engine, &data, &aw_checks());
    match &fit {
        Ok(f) => {
            for (id, name, terms) in [("aw.closure.1", "gamma", &f.gamma), ("aw.closure.2", "alpha", &f.alpha), ("aw.closure.3", "beta", &f.beta)] {
                if let Some(c) = checks.iter_mut().find(|c| c.id == id) {
                    c.detail = Some(format!(
                        "{name} = {} (degree {} in {})",
                        render_polynomial(terms, &AW_CENTRAL_NAMES),
                        max_degree(terms),
                        AW_CENTRAL_NAMES.join(", ")
                    ));
                }
            }
        }
        Err(e) => log::info!("aw closure fit failed: {}", e.reason),
    }
    if opts.oracle {
        let ev = q_evidence(
            &mut rng,
            6,
            opts,
            (|b: &OracleBuilder<Rat>, v0: &Rat| aw_data_at(b, &fit, |c| c.specialize(v0)), &aw_checks()),
            (|b: &OracleBuilder<Zp>, v0: &Zp| aw_data_at(b, &fit, |c| c.sample(*v0)), &aw_checks()),
        )?;
        attach_evidence(&mut checks, ev);
    }
    Ok(SuiteReport::new("aw", context(Family::QOsc, 6, Some(opts.fit_cap), opts), checks, setup))
}

// q-Hahn

pub const QHAHN_CENTRAL_NAMES: [&str; 4] = ["C12", "C34", "Q", "Qinv"];

pub struct QHahnData<Op> {
    pub m1: Op,
    pub m2: Op,
    pub l12: Op,
    pub l34: Op,
    /// Fit residuals `target - Σ c_X X`, engine side only.
    pub fits: Vec<Result<Op, FitFailure>>,
}

pub fn qhahn_data<S: Scalar, B: OpBuilder<S>>(b: &B) -> Result<QHahnData<B::Op>, Error> {
    let (m1, m2) = qhahn_pair(b)?;
    Ok(QHahnData { m1, m2, l12: q_rotation(b, 1)?, l34: q_rotation(b, 3)?, fits: Vec::new() })
}

/// Fit targets of the informative closure checks.
const QHAHN_TARGETS: [(&str, &str); 2] = [("M1M1M2", "[M1, [M1, M2]]"), ("M2M2M1", "[M2, [M2, M1]]")];

fn qhahn_fits(engine: &Engine<RatFunc>, d: &mut QHahnData<Element<RatFunc>>, cap: u32, v0: Zp) -> Result<Vec<String>, Error> {
    let b = engine;
    let all = q_metaplectic(b, 1..=4)?;
    let central =
        vec![q_casimir(b, &q_metaplectic(b, 1..=2)?)?, q_casimir(b, &q_metaplectic(b, 3..=4)?)?, all.q2j0, all.q2j0_inv];
    let basis = vec![b.one(), d.m1.clone(), d.m2.clone(), b.mul(&d.m1, &d.m1), b.anticomm(&d.m1, &d.m2)];
    let names = ["1", "M1", "M2", "M1^2", "{M1,M2}"];
    let targets = [b.comm(&d.m1, &b.comm(&d.m1, &d.m2)), b.comm(&d.m2, &b.comm(&d.m2, &d.m1))];
    let mut details = Vec::new();
    for target in targets {
        match fit_central_combination(&target, &basis, &central, cap, v0)? {
            FitOutcome::Solved { terms } => {
                let mut parts = Vec::new();
                for (i, name) in names.iter().enumerate() {
                    let t: Vec<FitTerm<RatFunc>> = terms.iter().filter(|t| t.basis_index == i).cloned().collect();
                    if !t.is_empty() {
                        parts.push(format!("[{}]*{name}", render_polynomial(&t, &QHAHN_CENTRAL_NAMES)));
                    }
                }
                d.fits.push(Ok(b.sub(&target, &combination(b, &terms, &basis, &central))));
                details.push(format!("fits as {}", parts.join(" + ")));
            }
            f => {
                details.push(f.to_string());
                if let FitOutcome::Failed { residual_terms, reason } = f {
                    d.fits.push(Err(FitFailure { residual_terms, reason }));
                }
            }
        }
    }
    Ok(details)
}

type QHahnCheck<S, B> = CheckDef<S, B, QHahnData<<B as OpBuilder<S>>::Op>>;

pub fn qhahn_checks<S: Scalar, B: OpBuilder<S> + 'static>() -> Vec<QHahnCheck<S, B>> {
    let mut out: Vec<QHahnCheck<S, B>> = Vec::new();
    for (m, mi) in [("M1", 0usize), ("M2", 1)] {
        for (l, li) in [("L12", 0usize), ("L34", 1)] {
            out.push(CheckDef::zero(
                format!("qhahn.comm.{m}.{l}"),
                format!("[{m}, {l}] = 0"),
                move |b: &B, d: &QHahnData<B::Op>| Ok(b.comm([&d.m1, &d.m2][mi], [&d.l12, &d.l34][li])),
            ));
        }
    }
    out.push(CheckDef::nonzero("qhahn.M1M2", "[M1, M2] != 0", |b: &B, d: &QHahnData<B::Op>| Ok(b.comm(&d.m1, &d.m2))));
    for (n, (id, target)) in QHAHN_TARGETS.into_iter().enumerate() {
        out.push(
            CheckDef::zero(
                format!("qhahn.closure.{id}"),
                format!("{target} lies in span{{1, M1, M2, M1^2, {{M1, M2}}}} over C12, C34, q^(2 J0), q^(-2 J0)"),
                move |_: &B, d: &QHahnData<B::Op>| match d.fits.get(n) {
                    Some(Ok(r)) => Ok(r.clone()),
                    Some(Err(e)) => Err(e.error()),
                    None => Err(Error::InvalidContext("closure fit not run".into())),
                },
            )
            .informative(),
        );
    }
    out
}

pub fn run_qhahn_suite(opts: &SuiteOptions) -> Result<SuiteReport, Error> {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let engine = Engine::new(Algebra::qosc(4, RatFunc::v())?);
    let mut data = qhahn_data(&engine)?;
    let details = qhahn_fits(&engine, &mut data, opts.fit_cap, sample_point(&mut rng))?;
    let setup = elapsed_ms(t);
    let mut checks = run_engine(&engine, &data, &qhahn_checks());
    for ((id, _), detail) in QHAHN_TARGETS.iter().zip(details) {
        if let Some(c) = checks.iter_mut().find(|c| c.id == format!("qhahn.closure.{id}")) {
            c.detail = Some(detail);
        }
    }
    if opts.oracle {
        let ev = q_evidence(
            &mut rng,
            4,
            opts,
            (|b: &OracleBuilder<Rat>, _: &Rat| qhahn_data(b), &qhahn_checks()),
            (|b: &OracleBuilder<Zp>, _: &Zp| qhahn_data(b), &qhahn_checks()),
        )?;
        attach_evidence(&mut checks, ev);
    }
    Ok(SuiteReport::new("qhahn", context(Family::QOsc, 4, Some(opts.fit_cap), opts), checks, setup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qosc::CentralMonomial;

    #[test]
    fn subsets_are_exhaustive() {
        let s = even_subsets(6);
        assert_eq!(s.len(), 31);
        assert_eq!(s[0], vec![1, 2]);
        assert_eq!(s.last().unwrap(), &vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn oracle_points_avoid_poles() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let v = exact_point(&mut rng);
            assert!(!v.is_zero() && !v.abs().is_one());
        }
    }

    #[test]
    fn polynomial_rendering() {
        let t = |e: Vec<u32>, c: i64| FitTerm { basis_index: 0, monomial: CentralMonomial(e), coeff: Rat::from_i64(c) };
        let s = render_polynomial(&[t(vec![1, 0], 2), t(vec![0, 0], -1)], &["A", "B"]);
        assert_eq!(s, "(-1) + (2)*A");
    }
}
