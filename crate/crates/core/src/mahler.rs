//! Finite differences, Mahler expansions and the binomial transform.
//!
//! A function `ℕ → R` is seen either as a table of values (the indicator
//! basis) or through its Mahler coefficients `Δ^n f(0)` (the basis
//! `binom(x, n)`). [`mahler_expand`] and [`evaluate`] move between the two.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coefficients::{CoefficientModel, ModelId, NormValue, Padic, RingElement};
use crate::combinatorics::{binomial, pascal};
use crate::series::{expect_basis, Basis, TruncatedSeries};
use crate::weights::{Tail, TailDescriptor};
use crate::{Error, Result};

/// Values `f(0), ..., f(M)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    model: CoefficientModel,
    values: Vec<RingElement>,
}

impl FunctionTable {
    pub fn new(model: CoefficientModel, values: Vec<RingElement>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InsufficientData {
                needed: 1,
                available: 0,
            });
        }
        for v in &values {
            model.check(v)?;
        }
        Ok(FunctionTable { model, values })
    }

    pub fn from_i64s(model: CoefficientModel, values: &[i64]) -> Result<Self> {
        Self::new(model, values.iter().map(|&v| model.from_i64(v)).collect())
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `Δf(n) = f(n+1) - f(n)`.
pub fn fdiff_table(t: &FunctionTable) -> Result<FunctionTable> {
    if t.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            available: t.len(),
        });
    }
    let m = t.model;
    let values = t.values.windows(2).map(|w| m.sub(&w[1], &w[0])).collect();
    Ok(FunctionTable { model: m, values })
}

/// Shift of Mahler coefficients, `Σ a_n binom(x,n) ↦ Σ a_{n+1} binom(x,n)`.
pub fn fdiff_series(f: &TruncatedSeries) -> Result<TruncatedSeries> {
    expect_basis(f.basis(), Basis::Mahler)?;
    let coeffs = f.coeffs().iter().skip(1).cloned().collect();
    let tail = match f.tail() {
        Tail::Geometric(td) => Tail::Geometric(TailDescriptor {
            start: td.start.saturating_sub(1),
            bound: &td.bound * &td.ratio,
            ratio: td.ratio.clone(),
            sharp: td.sharp,
        }),
        other => other.clone(),
    };
    Ok(TruncatedSeries::raw(*f.model(), Basis::Mahler, coeffs, tail))
}

/// `Δ^k f(0) = Σ_i (-1)^(k-i) binom(k,i) f(i)`.
pub fn fdiff_k_at_zero(t: &FunctionTable, k: usize) -> Result<RingElement> {
    if k >= t.len() {
        return Err(Error::InsufficientData {
            needed: k + 1,
            available: t.len(),
        });
    }
    let m = t.model;
    let mut acc = m.zero();
    for (i, v) in t.values.iter().enumerate().take(k + 1) {
        let mut c = binomial(k as u64, i as u64);
        if (k - i) % 2 == 1 {
            c = -c;
        }
        acc = m.add(&acc, &m.mul_integer(v, &c));
    }
    Ok(acc)
}

/// Mahler coefficients `Δ^n f(0)` for `n ≤ M`, via the difference table.
///
/// Nothing is known about the function beyond the table, so the result
/// carries an unknown tail.
pub fn mahler_expand(t: &FunctionTable) -> TruncatedSeries {
    let m = t.model;
    let mut row = t.values.clone();
    let mut coeffs = Vec::with_capacity(row.len());
    while let Some(first) = row.first() {
        coeffs.push(first.clone());
        row = row.windows(2).map(|w| m.sub(&w[1], &w[0])).collect();
    }
    TruncatedSeries::raw(m, Basis::Mahler, coeffs, Tail::Unknown)
}

/// `f(n) = Σ_{k≤n} a_k binom(n,k)`.
pub fn evaluate(f: &TruncatedSeries, n: usize) -> Result<RingElement> {
    expect_basis(f.basis(), Basis::Mahler)?;
    let m = f.model();
    let mut acc = m.zero();
    for k in 0..=n {
        let a = f.coeff(k).ok_or(Error::InsufficientOrder {
            needed: n + 1,
            available: f.order(),
        })?;
        if !m.is_zero(&a) {
            acc = m.add(&acc, &m.mul_integer(&a, &binomial(n as u64, k as u64)));
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `β(e_j) = Σ_i binom(j, i) e_i`
    Forward,
    /// `β^{-1}(e_j) = Σ_i (-1)^(j-i) binom(j, i) e_i`
    Inverse,
}

/// Square integer matrix, in practice `β`, `β^{-1}` or their products.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransformMatrix {
    entries: Vec<Vec<BigInt>>,
}

impl TransformMatrix {
    pub fn new(size: usize, direction: Direction) -> Self {
        let rows = pascal(size);
        let entries = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        if i > j {
                            return BigInt::zero();
                        }
                        let c = rows[j][i].clone();
                        if direction == Direction::Inverse && (j - i) % 2 == 1 {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect()
            })
            .collect();
        TransformMatrix { entries }
    }

    pub fn forward(size: usize) -> Self {
        Self::new(size, Direction::Forward)
    }

    pub fn inverse(size: usize) -> Self {
        Self::new(size, Direction::Inverse)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        assert_eq!(n, other.size(), "size mismatch");
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &self.entries[i][k] * &other.entries[k][j]).sum())
                    .collect()
            })
            .collect();
        TransformMatrix { entries }
    }

    pub fn is_identity(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter()
                .enumerate()
                .all(|(j, c)| if i == j { c.is_one() } else { c.is_zero() })
        })
    }

    pub fn apply(&self, model: &CoefficientModel, v: &[RingElement]) -> Vec<RingElement> {
        assert_eq!(v.len(), self.size(), "size mismatch");
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(v).fold(model.zero(), |acc, (c, x)| {
                    if c.is_zero() {
                        acc
                    } else {
                        model.add(&acc, &model.mul_integer(x, c))
                    }
                })
            })
            .collect()
    }
}

/// `β v` or `β^{-1} v`.
pub fn binomial_transform(model: &CoefficientModel, v: &[RingElement], direction: Direction) -> Vec<RingElement> {
    TransformMatrix::new(v.len(), direction).apply(model, v)
}

/// Basis change within one side of the duality, keeping the input's order.
pub fn change_basis(f: &TruncatedSeries, to: Basis) -> Result<TruncatedSeries> {
    let from = f.basis();
    if from == to {
        return Ok(f.clone());
    }
    let m = f.model();
    match (from, to) {
        (Basis::Monomial, Basis::GroupLike) | (Basis::GroupLike, Basis::Monomial) => {
            let coeffs = f.exact_coeffs()?;
            // s^n = Σ (-1)^(n-k) binom(n,k) s_k, and s_k = Σ binom(k,i) s^i
            let dir = if to == Basis::GroupLike {
                Direction::Inverse
            } else {
                Direction::Forward
            };
            let out = binomial_transform(m, coeffs, dir);
            Ok(TruncatedSeries::raw(*m, to, out, Tail::Zero))
        }
        (Basis::Mahler, Basis::Indicator) => {
            let values = (0..f.order()).map(|k| evaluate(f, k)).collect::<Result<Vec<_>>>()?;
            let tail = if f.is_zero() { Tail::Zero } else { Tail::Unknown };
            Ok(TruncatedSeries::raw(*m, to, values, tail))
        }
        (Basis::Indicator, Basis::Mahler) => {
            let values = (0..f.order()).map(|k| f.coeff(k).expect("stored")).collect::<Vec<_>>();
            if values.is_empty() {
                return Ok(TruncatedSeries::raw(*m, to, Vec::new(), f.tail().clone()));
            }
            let mut out = mahler_expand(&FunctionTable::new(*m, values)?);
            if f.is_zero() {
                out = TruncatedSeries::raw(*m, to, out.coeffs().to_vec(), Tail::Zero);
            }
            Ok(out)
        }
        _ => Err(Error::CrossSide { from, to }),
    }
}

/// Verdict of the Mahler membership criteria.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MahlerClass {
    /// Finitely many nonzero coefficients: an integer-valued polynomial.
    Polynomial {
        degree: Option<usize>,
    },
    /// Coefficient norms are bounded by `C r^n`, so `|a_n| ρ^n → 0` for every
    /// `ρ < radius = 1/r`; the series lies in the space of radius `σ` for
    /// every `σ < radius`.
    Certified {
        radius: NormValue,
    },
    Undecidable,
}

impl MahlerClass {
    pub fn certifies(&self, sigma: &BigRational) -> bool {
        match self {
            MahlerClass::Polynomial { .. } => true,
            MahlerClass::Certified { radius } => NormValue::finite(sigma.clone()) < *radius,
            MahlerClass::Undecidable => false,
        }
    }
}

pub fn classify_membership(f: &TruncatedSeries) -> Result<MahlerClass> {
    expect_basis(f.basis(), Basis::Mahler)?;
    Ok(match f.tail() {
        Tail::Zero => MahlerClass::Polynomial { degree: f.degree() },
        Tail::Unknown => MahlerClass::Undecidable,
        Tail::Geometric(td) => {
            let radius = if td.ratio.is_zero() || td.bound.is_zero() {
                NormValue::Infinite
            } else {
                NormValue::finite(td.ratio.recip())
            };
            MahlerClass::Certified { radius }
        }
    })
}

/// Largest `t` with `p^t · bound ≤ 1`.
fn precision_from_bound(p: u64, bound: &BigRational) -> i64 {
    if bound.is_zero() {
        return i64::MAX;
    }
    let p = BigRational::from_integer(BigInt::from(p));
    let one = BigRational::one();
    let mut t = 0i64;
    let mut scaled = bound.clone();
    while scaled > one {
        scaled = &scaled / &p;
        t -= 1;
    }
    loop {
        let next = &scaled * &p;
        if next > one {
            return t;
        }
        scaled = next;
        t += 1;
    }
}

/// `Σ a_k w_k` for weights of norm at most one.
///
/// Exact series give exact sums. Infinite series need a truncated p-adic
/// model and a decaying tail; the value is then known modulo `p^t` for the
/// `t` the certificate supports, and `target` (when given) must not exceed it.
pub(crate) fn certified_sum(
    f: &TruncatedSeries,
    weight: impl Fn(usize) -> Result<RingElement>,
    target: Option<i64>,
) -> Result<RingElement> {
    let m = *f.model();
    let mut sum = m.zero();
    for (k, a) in f.coeffs().iter().enumerate() {
        if !m.is_zero(a) || matches!(a, RingElement::Padic(Padic::Zero { abs_precision: Some(_) })) {
            sum = m.add(&sum, &m.mul(a, &weight(k)?));
        }
    }
    let tail_precision = match f.tail() {
        Tail::Zero => i64::MAX,
        tail => {
            let ModelId::TruncatedZp { p, .. } = m.id() else {
                return Err(Error::UnsupportedModel {
                    op: "summing an infinite Mahler series",
                    model: m.to_string(),
                });
            };
            let Tail::Geometric(td) = tail else {
                return Err(Error::MissingCertificate);
            };
            if !td.is_null() && td.ratio >= BigRational::one() {
                return Err(Error::Domain("tail certificate does not decay".into()));
            }
            precision_from_bound(p, &td.bound_at(f.order()))
        }
    };
    let RingElement::Padic(value) = &sum else {
        return Ok(sum);
    };
    let achievable = tail_precision.min(value.abs_precision().unwrap_or(i64::MAX));
    let ctx = m.padic_context().expect("p-adic model");
    match target {
        Some(t) if achievable < t => Err(Error::CertificateTooWeak { achievable }),
        Some(t) => Ok(RingElement::Padic(ctx.truncate(value, t))),
        None if achievable < i64::MAX => Ok(RingElement::Padic(ctx.truncate(value, achievable))),
        None => Ok(sum),
    }
}

/// `binom(a, k)` for `k < count` over a truncated p-adic model.
pub(crate) fn zp_binomials(model: &CoefficientModel, a: &RingElement, count: usize) -> Result<Vec<RingElement>> {
    let ctx = model.padic_context().ok_or(Error::UnsupportedModel {
        op: "p-adic binomials",
        model: model.to_string(),
    })?;
    let RingElement::Padic(a) = a else {
        return Err(Error::NotInCarrier {
            model: model.to_string(),
        });
    };
    if a.valuation().is_some_and(|v| v < 0) {
        return Err(Error::Domain("exponent is not a p-adic integer".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut b = ctx.from_integer(&BigInt::one());
    for k in 0..count {
        if k > 0 {
            let factor = ctx.sub(a, &ctx.from_integer(&BigInt::from(k - 1)));
            b = ctx
                .div(&ctx.mul(&b, &factor), &ctx.from_integer(&BigInt::from(k)))
                .expect("nonzero divisor");
        }
        if b.abs_precision().is_some_and(|abs| abs < 1) {
            return Err(Error::PrecisionExhausted { index: k });
        }
        out.push(RingElement::Padic(b.clone()));
    }
    Ok(out)
}

/// `f(a)` for a Mahler series over a truncated p-adic model, known modulo
/// `p^target`.
pub fn padic_evaluate(f: &TruncatedSeries, a: &RingElement, target: i64) -> Result<RingElement> {
    expect_basis(f.basis(), Basis::Mahler)?;
    let m = f.model();
    if !matches!(m.id(), ModelId::TruncatedZp { .. }) {
        return Err(Error::UnsupportedModel {
            op: "padic_evaluate",
            model: m.to_string(),
        });
    }
    let weights = zp_binomials(m, a, f.order())?;
    certified_sum(f, |k| Ok(weights[k].clone()), Some(target))
}

/// `(1+s)^e` as an exact monomial series.
pub fn binomial_row(model: &CoefficientModel, e: u64) -> TruncatedSeries {
    let coeffs = (0..=e).map(|k| model.from_integer(&binomial(e, k))).collect();
    TruncatedSeries::raw(*model, Basis::Monomial, coeffs, Tail::Zero)
}
