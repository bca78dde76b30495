//! Exact fitting of a target element as a combination of basis elements with
//! coefficients that are polynomials in commuting central elements.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::coefficients::{Scalar, Specialize, Zp};
use crate::ncalg::{Element, Word};
use crate::Error;

/// Exponent vector over the supplied central generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CentralMonomial(pub Vec<u32>);

impl CentralMonomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.degree() == 0
    }

    /// Render with the given generator names, e.g. `Z1^2*Q`.
    pub fn render(&self, names: &[&str]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// One fitted term `coeff · monomial · basis[basis_index]`.
#[derive(Clone, Debug)]
pub struct FitTerm<S> {
    pub basis_index: usize,
    pub monomial: CentralMonomial,
    pub coeff: S,
}

#[derive(Clone, Debug)]
pub enum FitOutcome<S: Scalar> {
    /// `target = Σ coeff · monomial · basis`, re-verified exactly.
    Solved { terms: Vec<FitTerm<S>> },
    /// No combination within the degree cap; carries the residual of the best
    /// least-pivot attempt at the sample point.
    Failed { residual_terms: usize, reason: String },
}

impl<S: Scalar> FitOutcome<S> {
    pub fn is_solved(&self) -> bool {
        matches!(self, FitOutcome::Solved { .. })
    }
}

impl<S: Scalar> fmt::Display for FitOutcome<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FitOutcome::Solved { terms } => write!(f, "solved with {} nonzero terms", terms.len()),
            FitOutcome::Failed { residual_terms, reason } => write!(f, "failed ({reason}; {residual_terms} residual terms)"),
        }
    }
}

/// Evaluate `Σ coeff · Π central^e · basis` as an element.
pub fn assemble<S: Scalar>(terms: &[FitTerm<S>], basis: &[Element<S>], central: &[Element<S>]) -> Result<Element<S>, Error> {
    let alg = basis.first().or(central.first()).map(|e| e.algebra().clone());
    let Some(alg) = alg else {
        return Err(Error::InvalidContext("empty fit basis".into()));
    };
    let mut acc = alg.zero();
    for t in terms {
        let mu = monomial_element(&t.monomial, central, &alg.one());
        acc = acc.checked_add(&mu.checked_mul(&basis[t.basis_index])?.scale(&t.coeff))?;
    }
    Ok(acc)
}

fn monomial_element<S: Scalar>(m: &CentralMonomial, central: &[Element<S>], one: &Element<S>) -> Element<S> {
    let mut e = one.clone();
    for (g, &k) in central.iter().zip(&m.0) {
        for _ in 0..k {
            e = &e * g;
        }
    }
    e
}

fn monomials(n: usize, cap: u32) -> Vec<CentralMonomial> {
    let mut out = vec![CentralMonomial(vec![0; n])];
    let mut frontier = out.clone();
    for _ in 0..cap {
        let mut next = Vec::new();
        for m in &frontier {
            // Non-decreasing generator index keeps each monomial unique.
            let start = m.0.iter().rposition(|&e| e > 0).unwrap_or(0);
            for g in start..n {
                let mut e = m.0.clone();
                e[g] += 1;
                next.push(CentralMonomial(e));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Sparse column with its pivot row, reduced against earlier columns.
struct Reduced {
    pivot: usize,
    col: FxHashMap<usize, Zp>,
}

fn reduce(mut v: FxHashMap<usize, Zp>, basis: &[Reduced]) -> FxHashMap<usize, Zp> {
    for r in basis {
        if let Some(c) = v.get(&r.pivot).copied() {
            // Pivot entries are normalized to one.
            for (row, x) in &r.col {
                let slot = v.entry(*row).or_insert_with(Zp::zero);
                *slot = slot.field_sub(&c.field_mul(x));
            }
            v.retain(|_, x| !x.is_zero());
        }
    }
    v
}

/// Fit `target` as `Σ_X c_X · X` over `basis`, each `c_X` a polynomial of
/// degree `≤ degree_cap` in the commuting `central` elements.
///
/// Columns are built and selected modulo a 61-bit prime at the sample point
/// `v = v0`. Only the selected columns are rebuilt over `S`, where the square
/// system on the pivot rows is solved; the fit is accepted only if the full
/// residual vanishes exactly.
pub fn fit_central_combination<S: Specialize>(
    target: &Element<S>,
    basis: &[Element<S>],
    central: &[Element<S>],
    degree_cap: u32,
    v0: Zp,
) -> Result<FitOutcome<S>, Error> {
    if basis.is_empty() {
        return Err(Error::InvalidContext("empty fit basis".into()));
    }
    let spec_alg = target.algebra().sampled(v0)?;
    let spec = |e: &Element<S>| e.sample(&spec_alg, v0);
    let t0 = spec(target)?;
    let basis0 = basis.iter().map(spec).collect::<Result<Vec<_>, _>>()?;
    let central0 = central.iter().map(spec).collect::<Result<Vec<_>, _>>()?;
    // Screen at the sample point; the final identity is verified exactly anyway.
    for (i, z) in central0.iter().enumerate() {
        for w in central0[i + 1..].iter().chain(&basis0).chain(std::iter::once(&t0)) {
            if !z.commutator(w)?.is_zero() {
                return Err(Error::NonCentral(format!("central generator #{} does not commute", i + 1)));
            }
        }
    }
    log::debug!("fit: specialized inputs");

    // Columns μ·X at v0, dropping duplicates such as Q·Q⁻¹ = 1.
    let one0 = spec_alg.one();
    let mut monos: Vec<(CentralMonomial, Element<Zp>)> = Vec::new();
    for m in monomials(central.len(), degree_cap) {
        let e = monomial_element(&m, &central0, &one0);
        if !monos.iter().any(|(_, f)| *f == e) {
            monos.push((m, e));
        }
    }
    let mut cols: Vec<(usize, CentralMonomial)> = Vec::new();
    let mut col0: Vec<Element<Zp>> = Vec::new();
    for (bi, x) in basis0.iter().enumerate() {
        for (m, e) in &monos {
            cols.push((bi, m.clone()));
            col0.push(e.checked_mul(x)?);
        }
    }

    let mut rows: FxHashMap<Word, usize> = FxHashMap::default();
    let mut sparse0 = |e: &Element<Zp>| -> FxHashMap<usize, Zp> {
        e.terms()
            .into_iter()
            .map(|(w, c)| {
                let n = rows.len();
                (*rows.entry(w).or_insert(n), c)
            })
            .collect()
    };
    let target_vec0 = sparse0(&t0);
    let col_vecs0: Vec<FxHashMap<usize, Zp>> = col0.iter().map(&mut sparse0).collect();

    let all: Vec<usize> = (0..cols.len()).collect();
    let (chosen, reduced) = eliminate(&col_vecs0, &all, |_| 0);
    log::debug!("fit: {} of {} columns independent, {} rows", chosen.len(), cols.len(), rows.len());
    let leftover = reduce(target_vec0.clone(), &reduced);
    if !leftover.is_empty() {
        return Ok(FitOutcome::Failed {
            residual_terms: leftover.len(),
            reason: format!("target outside the span of {} columns at the sample point", cols.len()),
        });
    }

    // Solve at the sample point for the support, then re-pick pivot rows for
    // the support alone, preferring rows touched by few support columns.
    let pivots: Vec<usize> = reduced.iter().map(|r| r.pivot).collect();
    let x0 = solve_dense(square(&col_vecs0, &target_vec0, &chosen, &pivots))?;
    let support: Vec<usize> = chosen.iter().zip(&x0).filter(|(_, c)| !c.is_zero()).map(|(&j, _)| j).collect();
    let mut weight: FxHashMap<usize, usize> = FxHashMap::default();
    for &j in &support {
        for r in col_vecs0[j].keys() {
            *weight.entry(*r).or_default() += 1;
        }
    }
    let (support, reduced) = eliminate(&col_vecs0, &support, |r| weight[&r]);
    log::debug!("fit: support of {} columns", support.len());

    // Square system over S on the pivot rows.
    let row_words: FxHashMap<usize, Word> = rows.into_iter().map(|(w, i)| (i, w)).collect();
    let pivot_words: Vec<Word> = reduced.iter().map(|r| row_words[&r.pivot].clone()).collect();
    let one = target.algebra().one();
    let n = support.len();
    let mut a = vec![vec![S::zero(); n + 1]; n];
    let chosen_terms: Vec<(usize, CentralMonomial)> = support.iter().map(|&j| cols[j].clone()).collect();
    for (k, (bi, m)) in chosen_terms.iter().enumerate() {
        let col = monomial_element(m, central, &one).checked_mul(&basis[*bi])?;
        for (i, w) in pivot_words.iter().enumerate() {
            a[i][k] = col.coefficient(w);
        }
    }
    for (i, w) in pivot_words.iter().enumerate() {
        a[i][n] = target.coefficient(w);
    }
    log::debug!("fit: square system assembled");
    let x = solve_dense(a)?;
    log::debug!("fit: solved");

    let terms: Vec<FitTerm<S>> = chosen_terms
        .into_iter()
        .zip(x)
        .filter(|(_, c)| !c.is_zero())
        .map(|((basis_index, monomial), coeff)| FitTerm { basis_index, monomial, coeff })
        .collect();
    let residual = target.checked_sub(&assemble(&terms, basis, central)?)?;
    if residual.is_zero() {
        Ok(FitOutcome::Solved { terms })
    } else {
        Ok(FitOutcome::Failed {
            residual_terms: residual.len(),
            reason: "solution at the sample point does not lift to an exact identity".into(),
        })
    }
}

/// Reduce `cols` in order, keeping the independent ones. Each pivot is the
/// nonzero row of least `weight`, ties broken by row index.
fn eliminate(
    vecs: &[FxHashMap<usize, Zp>],
    cols: &[usize],
    weight: impl Fn(usize) -> usize,
) -> (Vec<usize>, Vec<Reduced>) {
    let mut reduced: Vec<Reduced> = Vec::new();
    let mut kept = Vec::new();
    for &j in cols {
        let r = reduce(vecs[j].clone(), &reduced);
        if let Some((&pivot, &p)) = r.iter().min_by_key(|(row, _)| (weight(**row), **row)) {
            let inv = p.field_inv().expect("nonzero pivot");
            let col = r.into_iter().map(|(i, x)| (i, x.field_mul(&inv))).collect();
            reduced.push(Reduced { pivot, col });
            kept.push(j);
        }
    }
    (kept, reduced)
}

/// Augmented system on `rows × cols` at the sample point.
fn square(vecs: &[FxHashMap<usize, Zp>], rhs: &FxHashMap<usize, Zp>, cols: &[usize], rows: &[usize]) -> Vec<Vec<Zp>> {
    let at = |v: &FxHashMap<usize, Zp>, r: usize| v.get(&r).copied().unwrap_or_else(Zp::zero);
    rows.iter()
        .map(|&r| {
            let mut row: Vec<Zp> = cols.iter().map(|&j| at(&vecs[j], r)).collect();
            row.push(at(rhs, r));
            row
        })
        .collect()
}

/// Gauss–Jordan on an `n × (n+1)` augmented system known to be nonsingular.
fn solve_dense<S: Scalar>(mut a: Vec<Vec<S>>) -> Result<Vec<S>, Error> {
    let n = a.len();
    for k in 0..n {
        let p = (k..n)
            .filter(|&i| !a[i][k].is_zero())
            .min_by_key(|&i| a[i][k..].iter().filter(|x| !x.is_zero()).count())
            .ok_or_else(|| Error::NonCentral("singular fit system".into()))?;
        a.swap(k, p);
        let inv = a[k][k].field_inv()?;
        for x in a[k][k..].iter_mut() {
            *x = x.field_mul(&inv);
        }
        let pivot_row = a[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k || row[k].is_zero() {
                continue;
            }
            let f = row[k].clone();
            for (x, p) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                if !p.is_zero() {
                    *x = x.field_sub(&f.field_mul(p));
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::RatFunc;
    use crate::ncalg::{Algebra, Kind};

    #[test]
    fn monomial_count() {
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomials(2, 0).len(), 1);
    }

    #[test]
    fn scalar_fits() {
        let alg = Algebra::qosc(2, RatFunc::v()).unwrap();
        let one = alg.one();
        let a0 = alg.gen(Kind::Number, 1);
        let v0 = Zp::new(1_000_003);
        // [x, x] = 0 over {1}
        let zero = a0.commutator(&a0).unwrap();
        match fit_central_combination(&zero, std::slice::from_ref(&one), &[], 2, v0).unwrap() {
            FitOutcome::Solved { terms } => assert!(terms.is_empty()),
            f => panic!("{f}"),
        }
        // [1, 1]_q = (q - q⁻¹)
        let q = RatFunc::v_pow(4);
        let t = one.q_commutator(&one, &q).unwrap();
        match fit_central_combination(&t, std::slice::from_ref(&one), &[], 0, v0).unwrap() {
            FitOutcome::Solved { terms } => {
                assert_eq!(terms[0].coeff, q.field_sub(&RatFunc::v_pow(-4)));
            }
            f => panic!("{f}"),
        }
        // A⁰² over {1, A⁰} with the central element A⁰ of mode 2 fails
        let a02 = alg.gen(Kind::Number, 2);
        assert!(!fit_central_combination(&(&a0 * &a0), std::slice::from_ref(&one), &[a02], 2, v0).unwrap().is_solved());
        // a non-commuting "central" generator is rejected
        let ap = alg.gen(Kind::Raise, 1);
        assert!(fit_central_combination(&a0, &[one], &[ap], 1, v0).is_err());
    }
}
