//! Structure maps of the two dual bialgebras.
//!
//! On the series side `R[[s]]` carries the Cauchy product, the
//! comultiplication `Δ(s) = s⊗1 + 1⊗s + s⊗s`, the counit `F ↦ F(0)` and the
//! antipode `s ↦ (1+s)^{-1} - 1`. On the Mahler side the product, the
//! Vandermonde comultiplication and the reflection `f(x) ↦ f(-x)` are the
//! transposes of these maps under the pairing of `s^n` with `binom(x, n)`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::coefficients::{CoefficientModel, ModelId, NormValue, RingElement};
use crate::combinatorics::{binomial, binomial_int, trinomial};
use crate::series::{expect_basis, geometric_inverse, poly_mul, same_model, Basis, BiTruncatedSeries, TruncatedSeries};
use crate::weights::{Tail, TailDescriptor};
use crate::{Error, Result};

/// `Δ(F)` on the `n × n` square.
///
/// Entry `(i, j)` collects `a_m · trinomial` over `m = i + j - k`, so it is
/// known whenever `i + j` is below the valid order of `F`.
pub fn comultiply(f: &TruncatedSeries, n: usize) -> Result<BiTruncatedSeries> {
    expect_basis(f.basis(), Basis::Monomial)?;
    let m = *f.model();
    let diag = (!f.is_exact()).then(|| f.order());
    let mut out = BiTruncatedSeries::with_region(m, n, n, diag);
    for (deg, a) in f.coeffs().iter().enumerate() {
        if m.is_zero(a) {
            continue;
        }
        for k in 0..=deg {
            for i in 0..=deg - k {
                let j = deg - k - i;
                if out.is_known(i + k, j + k) {
                    let t = trinomial(i as u64, j as u64, k as u64);
                    out.accumulate(i + k, j + k, &m.mul_integer(a, &t));
                }
            }
        }
    }
    Ok(out)
}

/// `ε(F) = F(0)`.
pub fn counit(f: &TruncatedSeries) -> Result<RingElement> {
    expect_basis(f.basis(), Basis::Monomial)?;
    f.coeff(0).ok_or(Error::InsufficientOrder {
        needed: 1,
        available: 0,
    })
}

/// `α(F) = F(α(s))` modulo `s^n`.
pub fn antipode(f: &TruncatedSeries, n: usize) -> Result<TruncatedSeries> {
    f.compose(&geometric_inverse(*f.model(), n)?)
}

/// `‖α(s)‖_ρ` on the disk of radius `ρ < 1`.
///
/// Only over non-archimedean models is the antipode an isometry of the disk
/// algebra; archimedean models are refused.
pub fn certified_antipode_norm(model: &CoefficientModel, rho: &BigRational) -> Result<NormValue> {
    if !model.is_nonarchimedean() {
        return Err(Error::ArchimedeanModel);
    }
    if !rho.is_positive() || *rho >= BigRational::one() {
        return Err(Error::Domain(format!("radius {rho} is not in (0, 1)")));
    }
    Ok(NormValue::finite(rho.clone()))
}

/// `α(F)` modulo `s^n` with the bound `‖α(F)‖_ρ ≤ ‖F‖_ρ`.
pub fn antipode_with_bound(f: &TruncatedSeries, n: usize, rho: &BigRational) -> Result<(TruncatedSeries, NormValue)> {
    certified_antipode_norm(f.model(), rho)?;
    Ok((antipode(f, n)?, f.ps_norm(rho)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomStatus {
    Pass,
    Fail(String),
}

impl AxiomStatus {
    pub fn passed(&self) -> bool {
        *self == AxiomStatus::Pass
    }

    pub fn label(&self) -> &'static str {
        match self {
            AxiomStatus::Pass => "pass",
            AxiomStatus::Fail(_) => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HopfReport {
    pub coassoc: AxiomStatus,
    pub counit: AxiomStatus,
    pub antipode: AxiomStatus,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.coassoc.passed() && self.counit.passed() && self.antipode.passed()
    }
}

type Cube = BTreeMap<(usize, usize, usize), RingElement>;

fn add_to(m: &CoefficientModel, map: &mut Cube, key: (usize, usize, usize), c: RingElement) {
    let v = match map.remove(&key) {
        Some(old) => m.add(&old, &c),
        None => c,
    };
    if !m.is_zero(&v) {
        map.insert(key, v);
    }
}

fn first_difference(m: &CoefficientModel, lhs: &Cube, rhs: &Cube) -> Option<String> {
    let zero = m.zero();
    lhs.keys().chain(rhs.keys()).find_map(|k| {
        let a = lhs.get(k).unwrap_or(&zero);
        let b = rhs.get(k).unwrap_or(&zero);
        (!m.equivalent(a, b)).then(|| format!("entry {k:?}: {a:?} vs {b:?}"))
    })
}

fn check_coassociativity(m: &CoefficientModel, n: usize) -> Result<AxiomStatus> {
    let deltas = (0..n)
        .map(|d| comultiply(&TruncatedSeries::monomial(*m, d), n))
        .collect::<Result<Vec<_>>>()?;
    for (d, delta) in deltas.iter().enumerate() {
        let mut left = Cube::new();
        let mut right = Cube::new();
        for (&(a, b), c) in delta.entries() {
            for (&(x, y), e) in deltas[a].entries() {
                add_to(m, &mut left, (x, y, b), m.mul(c, e));
            }
            for (&(x, y), e) in deltas[b].entries() {
                add_to(m, &mut right, (a, x, y), m.mul(c, e));
            }
        }
        if let Some(diff) = first_difference(m, &left, &right) {
            return Ok(AxiomStatus::Fail(format!("s^{d}: {diff}")));
        }
    }
    Ok(AxiomStatus::Pass)
}

fn check_counit(m: &CoefficientModel, n: usize) -> Result<AxiomStatus> {
    for d in 0..n {
        let delta = comultiply(&TruncatedSeries::monomial(*m, d), n)?;
        for side in 0..2 {
            let mut got = vec![m.zero(); n];
            for (&(i, j), c) in delta.entries() {
                let (kept, dropped) = if side == 0 { (j, i) } else { (i, j) };
                if dropped == 0 {
                    got[kept] = m.add(&got[kept], c);
                }
            }
            for (k, c) in got.iter().enumerate() {
                let want = if k == d { m.one() } else { m.zero() };
                if !m.equivalent(c, &want) {
                    let which = if side == 0 { "(ε⊗id)" } else { "(id⊗ε)" };
                    return Ok(AxiomStatus::Fail(format!(
                        "{which}Δ(s^{d}) has coefficient {c:?} at s^{k}"
                    )));
                }
            }
        }
    }
    Ok(AxiomStatus::Pass)
}

/// Both antipode laws on `(1+s)^e`, `e < n`, modulo `s^n`.
fn check_antipode(m: &CoefficientModel, n: usize) -> Result<AxiomStatus> {
    let alpha = geometric_inverse(*m, n)?;
    let mut alpha_pow = vec![TruncatedSeries::one(*m).coeffs().to_vec()];
    for i in 1..n {
        alpha_pow.push(poly_mul(m, &alpha_pow[i - 1], alpha.coeffs(), Some(n)));
    }
    let s_pow = |j: usize| TruncatedSeries::monomial(*m, j).coeffs().to_vec();
    for e in 0..n {
        let g = crate::mahler::binomial_row(m, e as u64);
        let delta = comultiply(&g, n)?;
        let eps = counit(&g)?;
        for side in 0..2 {
            let mut acc = vec![m.zero(); n];
            for (&(i, j), c) in delta.entries() {
                let (a, b) = if side == 0 {
                    (alpha_pow[i].clone(), s_pow(j))
                } else {
                    (s_pow(i), alpha_pow[j].clone())
                };
                let term = poly_mul(m, &a, &b, Some(n));
                for (k, t) in term.iter().enumerate() {
                    acc[k] = m.add(&acc[k], &m.mul(c, t));
                }
            }
            for (k, c) in acc.iter().enumerate() {
                let want = if k == 0 { eps.clone() } else { m.zero() };
                if !m.equivalent(c, &want) {
                    let which = if side == 0 { "m(α⊗id)Δ" } else { "m(id⊗α)Δ" };
                    return Ok(AxiomStatus::Fail(format!(
                        "{which} on (1+s)^{e} has coefficient {c:?} at s^{k}"
                    )));
                }
            }
        }
    }
    Ok(AxiomStatus::Pass)
}

/// Exact check of coassociativity, the counit laws and the antipode law at
/// truncation order `n`.
pub fn verify_hopf_axioms(model: &CoefficientModel, n: usize) -> Result<HopfReport> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    Ok(HopfReport {
        coassoc: check_coassociativity(model, n)?,
        counit: check_counit(model, n)?,
        antipode: check_antipode(model, n)?,
    })
}

/// Product of Mahler series via
/// `binom(x,n) binom(x,k) = Σ_l binom(l,n) binom(n,l-k) binom(x,l)`.
pub fn mahler_product(f: &TruncatedSeries, g: &TruncatedSeries) -> Result<TruncatedSeries> {
    expect_basis(f.basis(), Basis::Mahler)?;
    expect_basis(g.basis(), Basis::Mahler)?;
    same_model(f.model(), g.model())?;
    let m = *f.model();
    let (len, tail) = match (f.is_exact(), g.is_exact()) {
        (true, true) => {
            let f = f.trimmed();
            let g = g.trimmed();
            if f.order() == 0 || g.order() == 0 {
                return Ok(TruncatedSeries::zero(m, Basis::Mahler));
            }
            (f.order() + g.order() - 1, Tail::Zero)
        }
        (true, false) => (g.order(), Tail::Unknown),
        (false, true) => (f.order(), Tail::Unknown),
        (false, false) => (f.order().min(g.order()), Tail::Unknown),
    };
    let mut out = vec![m.zero(); len];
    // coefficient l only involves indices n, k ≤ l
    let fa: Vec<_> = (0..len).map(|i| f.coeff(i).expect("known")).collect();
    let gb: Vec<_> = (0..len).map(|i| g.coeff(i).expect("known")).collect();
    for (n, a) in fa.iter().enumerate() {
        if m.is_zero(a) {
            continue;
        }
        for (k, b) in gb.iter().enumerate() {
            if m.is_zero(b) || n.max(k) >= len {
                continue;
            }
            let ab = m.mul(a, b);
            let hi = (n + k).min(len - 1);
            for (l, slot) in out.iter_mut().enumerate().take(hi + 1).skip(n.max(k)) {
                let c = binomial(l as u64, n as u64) * binomial(n as u64, (l - k) as u64);
                *slot = m.add(slot, &m.mul_integer(&ab, &c));
            }
        }
    }
    Ok(TruncatedSeries::raw(m, Basis::Mahler, out, tail))
}

/// Vandermonde comultiplication `binom(x,n) ↦ Σ_{i+j=n} binom(x,i) ⊗ binom(x,j)`
/// on the `n × n` square.
pub fn mahler_comultiply(f: &TruncatedSeries, n: usize) -> Result<BiTruncatedSeries> {
    expect_basis(f.basis(), Basis::Mahler)?;
    let m = *f.model();
    let diag = (!f.is_exact()).then(|| f.order());
    let mut out = BiTruncatedSeries::with_region(m, n, n, diag);
    for (d, a) in f.coeffs().iter().enumerate() {
        if m.is_zero(a) {
            continue;
        }
        for i in 0..=d {
            if out.is_known(i, d - i) {
                out.accumulate(i, d - i, a);
            }
        }
    }
    Ok(out)
}

/// `binom(-n, k) = (-1)^k binom(n+k-1, k)`.
pub fn binomial_negative(n: u64, k: u64) -> BigInt {
    binomial_int(&-BigInt::from(n), k)
}

/// Values `f(-n)` for each requested `n`.
///
/// Finite Mahler support gives exact values. Otherwise the model must be a
/// truncated p-adic ring and the tail must certify convergence at its working
/// precision.
pub fn mahler_antipode(f: &TruncatedSeries, points: &[u64]) -> Result<Vec<RingElement>> {
    expect_basis(f.basis(), Basis::Mahler)?;
    let m = *f.model();
    points
        .iter()
        .map(|&n| {
            let target = match m.id() {
                ModelId::TruncatedZp { precision, .. } => Some(precision as i64),
                _ => None,
            };
            crate::mahler::certified_sum(f, |k| Ok(m.from_integer(&binomial_negative(n, k as u64))), target)
        })
        .collect()
}

/// `F(0) = 1` and `Δ(F) = F ⊗ F` on the `n × n` square.
pub fn is_grouplike(f: &TruncatedSeries, n: usize) -> Result<bool> {
    expect_basis(f.basis(), Basis::Monomial)?;
    let m = f.model();
    let Some(c0) = f.coeff(0) else {
        return Ok(false);
    };
    if !m.equivalent(&c0, &m.one()) {
        return Ok(false);
    }
    Ok(comultiply(f, n)?.agrees_with(&BiTruncatedSeries::outer(f, f, n)?))
}

/// `(1+s)^a = Σ binom(a, n) s^n` to order `n`.
///
/// The exponent must be integral. Over a truncated p-adic ring the
/// coefficients are computed at working precision and an error names the
/// first one that cannot be determined.
pub fn grouplike_from_exponent(model: &CoefficientModel, a: &RingElement, n: usize) -> Result<TruncatedSeries> {
    model.check(a)?;
    let coeffs = match a {
        RingElement::Padic(_) => crate::mahler::zp_binomials(model, a, n)?,
        _ => {
            let q = model.to_rational(a).expect("rational carrier");
            if !q.is_integer() {
                return Err(Error::Domain(format!("exponent {q} is not an integer")));
            }
            let a = q.to_integer();
            (0..n as u64)
                .map(|k| model.from_integer(&binomial_int(&a, k)))
                .collect()
        }
    };
    let finite = match a {
        RingElement::Padic(_) => false,
        _ => {
            let q = model.to_rational(a).expect("rational carrier").to_integer();
            !q.is_negative() && q < BigInt::from(n)
        }
    };
    let tail = if finite {
        Tail::Zero
    } else if model.is_nonarchimedean() {
        // integral binomials have norm at most one
        Tail::Geometric(TailDescriptor {
            start: n,
            bound: BigRational::one(),
            ratio: BigRational::one(),
            sharp: false,
        })
    } else {
        Tail::Unknown
    };
    TruncatedSeries::new(*model, Basis::Monomial, coeffs, tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundRelation {
    /// `‖Δ(s^n)‖ ≤ (2ρ + ρ²)^n`
    AtMost,
    /// `‖Δ(s^n)‖ = ρ^n`
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaBoundReport {
    pub norm: NormValue,
    pub bound: NormValue,
    pub relation: BoundRelation,
    pub holds: bool,
}

/// Compares `‖Δ(s^n)‖_{ρ⊗ρ}` with the radius bound.
///
/// Non-archimedean models with `ρ ≤ 1` assert equality with `ρ^n`; all other
/// cases assert the archimedean bound `(2ρ + ρ²)^n`.
pub fn delta_norm_bound_check(n: usize, rho: &BigRational, model: &CoefficientModel) -> Result<DeltaBoundReport> {
    if !rho.is_positive() {
        return Err(Error::Domain(format!("radius {rho} is not positive")));
    }
    let delta = comultiply(&TruncatedSeries::monomial(*model, n), n + 1)?;
    let norm = delta.tensor_norm(rho, rho)?;
    let (bound, relation) = if model.is_nonarchimedean() && *rho <= BigRational::one() {
        (num_traits::pow(rho.clone(), n), BoundRelation::Equal)
    } else {
        let two = BigRational::from_integer(2.into());
        (num_traits::pow(&two * rho + rho * rho, n), BoundRelation::AtMost)
    };
    let bound = NormValue::finite(bound);
    let holds = match relation {
        BoundRelation::AtMost => norm <= bound,
        BoundRelation::Equal => norm == bound,
    };
    Ok(DeltaBoundReport {
        norm,
        bound,
        relation,
        holds,
    })
}
