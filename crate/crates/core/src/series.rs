//! Truncated series in the monomial, Mahler, group-like and indicator bases,
//! and truncated elements of the tensor square.
//!
//! A [`TruncatedSeries`] stores the coefficients it knows exactly plus a
//! [`Tail`]. A series with a zero tail is *exact* (a polynomial); otherwise
//! its *valid order* is the number of stored coefficients, and every
//! operation records the order up to which its result is correct.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;

use crate::coefficients::{CoefficientModel, NormValue, RingElement};
use crate::weights::{weighted_l1_norm, weighted_linf_norm, Tail, TailDescriptor, Weight};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// `s^n`
    Monomial,
    /// `binom(x, n)`
    Mahler,
    /// `s_n = (1+s)^n`
    GroupLike,
    /// `r_n`, the indicator of `{n}`
    Indicator,
}

impl Basis {
    /// Whether the basis lives on the power series side of the duality.
    pub fn is_series_side(self) -> bool {
        matches!(self, Basis::Monomial | Basis::GroupLike)
    }

    pub fn name(self) -> &'static str {
        match self {
            Basis::Monomial => "monomial",
            Basis::Mahler => "mahler",
            Basis::GroupLike => "grouplike",
            Basis::Indicator => "indicator",
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Basis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "monomial" => Ok(Basis::Monomial),
            "mahler" => Ok(Basis::Mahler),
            "grouplike" => Ok(Basis::GroupLike),
            "indicator" => Ok(Basis::Indicator),
            _ => Err(format!("unknown basis {s:?}")),
        }
    }
}

pub(crate) fn same_model(a: &CoefficientModel, b: &CoefficientModel) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModelMismatch {
            left: a.to_string(),
            right: b.to_string(),
        })
    }
}

pub(crate) fn expect_basis(found: Basis, expected: Basis) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(Error::BasisMismatch { expected, found })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    model: CoefficientModel,
    basis: Basis,
    coeffs: Vec<RingElement>,
    tail: Tail,
}

impl TruncatedSeries {
    /// Checks carriers and the tail certificate against the prefix.
    pub fn new(model: CoefficientModel, basis: Basis, coeffs: Vec<RingElement>, tail: Tail) -> Result<Self> {
        for c in &coeffs {
            model.check(c)?;
        }
        tail.validate(&model, &coeffs)?;
        Ok(TruncatedSeries {
            model,
            basis,
            coeffs,
            tail,
        })
    }

    pub(crate) fn raw(model: CoefficientModel, basis: Basis, coeffs: Vec<RingElement>, tail: Tail) -> Self {
        TruncatedSeries {
            model,
            basis,
            coeffs,
            tail,
        }
    }

    pub fn polynomial(model: CoefficientModel, basis: Basis, coeffs: Vec<RingElement>) -> Result<Self> {
        Self::new(model, basis, coeffs, Tail::Zero)
    }

    pub fn from_i64s(model: CoefficientModel, basis: Basis, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| model.from_i64(c)).collect();
        Self::raw(model, basis, coeffs, Tail::Zero)
    }

    /// The `n`-th basis vector.
    pub fn basis_vector(model: CoefficientModel, basis: Basis, n: usize) -> Self {
        let mut coeffs = vec![model.zero(); n + 1];
        coeffs[n] = model.one();
        Self::raw(model, basis, coeffs, Tail::Zero)
    }

    /// `s^n`.
    pub fn monomial(model: CoefficientModel, n: usize) -> Self {
        Self::basis_vector(model, Basis::Monomial, n)
    }

    pub fn zero(model: CoefficientModel, basis: Basis) -> Self {
        Self::raw(model, basis, Vec::new(), Tail::Zero)
    }

    pub fn one(model: CoefficientModel) -> Self {
        Self::monomial(model, 0)
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Number of stored coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_exact(&self) -> bool {
        self.tail == Tail::Zero
    }

    /// Coefficient `n` when it is known.
    pub fn coeff(&self, n: usize) -> Option<RingElement> {
        if let Some(c) = self.coeffs.get(n) {
            return Some(c.clone());
        }
        match &self.tail {
            Tail::Zero => Some(self.model.zero()),
            Tail::Geometric(td) if td.is_null() => Some(self.model.zero()),
            _ => None,
        }
    }

    /// Index of the last nonzero coefficient of an exact series.
    pub fn degree(&self) -> Option<usize> {
        if !self.is_exact() {
            return None;
        }
        self.coeffs.iter().rposition(|c| !self.model.is_zero(c))
    }

    pub fn is_zero(&self) -> bool {
        self.is_exact() && self.degree().is_none()
    }

    /// Same series with trailing zeros of an exact prefix removed.
    pub fn trimmed(&self) -> Self {
        let mut out = self.clone();
        if self.is_exact() {
            out.coeffs.truncate(self.degree().map_or(0, |d| d + 1));
        }
        out
    }

    /// Restricts to the first `n` coefficients.
    pub fn truncate(&self, n: usize) -> Self {
        if n >= self.coeffs.len() {
            return self.clone();
        }
        let tail = match &self.tail {
            Tail::Zero if self.degree().is_none_or(|d| d < n) => Tail::Zero,
            Tail::Geometric(td) if td.start <= n => Tail::Geometric(td.clone()),
            _ => Tail::Unknown,
        };
        Self::raw(self.model, self.basis, self.coeffs[..n].to_vec(), tail)
    }

    /// Equal on every index known to both sides.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.model != other.model || self.basis != other.basis {
            return false;
        }
        let n = match (self.is_exact(), other.is_exact()) {
            (true, true) => self.order().max(other.order()),
            (true, false) => other.order(),
            (false, true) => self.order(),
            (false, false) => self.order().min(other.order()),
        };
        (0..n).all(|i| match (self.coeff(i), other.coeff(i)) {
            (Some(a), Some(b)) => self.model.equivalent(&a, &b),
            _ => true,
        })
    }

    /// Exact coefficients, or [`Error::InfiniteSupport`].
    pub fn exact_coeffs(&self) -> Result<&[RingElement]> {
        if self.is_exact() {
            Ok(&self.coeffs)
        } else {
            Err(Error::InfiniteSupport)
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        same_model(&self.model, &other.model)?;
        expect_basis(other.basis, self.basis)
    }

    /// Valid order of a result built from `inputs`; `None` when all are exact.
    fn joint_order(inputs: &[&Self]) -> Option<usize> {
        inputs.iter().filter(|s| !s.is_exact()).map(|s| s.order()).min()
    }

    /// Geometric certificate for a linear combination valid beyond `n`, with
    /// `scales[i]` bounding the norm of the multiplier of `inputs[i]`.
    fn linear_tail(inputs: &[&Self], scales: &[NormValue], n: usize) -> Tail {
        let mut bound = BigRational::zero();
        let mut ratio = BigRational::zero();
        for (s, k) in inputs.iter().zip(scales) {
            let Some(k) = k.as_rational() else {
                return Tail::Unknown;
            };
            match &s.tail {
                Tail::Zero if s.order() <= n => {}
                Tail::Geometric(td) if td.start <= n => {
                    bound += &td.bound * k;
                    ratio = ratio.max(td.ratio.clone());
                }
                _ => return Tail::Unknown,
            }
        }
        Tail::Geometric(TailDescriptor {
            start: n,
            bound,
            ratio,
            sharp: false,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let m = self.model;
        let (n, tail) = match Self::joint_order(&[self, other]) {
            None => (self.order().max(other.order()), Tail::Zero),
            Some(n) => (
                n,
                Self::linear_tail(&[self, other], &[NormValue::one(), NormValue::one()], n),
            ),
        };
        let coeffs = (0..n)
            .map(|i| m.add(&self.coeff(i).unwrap(), &other.coeff(i).unwrap()))
            .collect();
        Ok(Self::raw(m, self.basis, coeffs, tail))
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| self.model.neg(c)).collect();
        Self::raw(self.model, self.basis, coeffs, self.tail.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        let m = self.model;
        let k = m.norm(c)?;
        let coeffs = self.coeffs.iter().map(|a| m.mul(c, a)).collect();
        let tail = match &self.tail {
            Tail::Zero => Tail::Zero,
            Tail::Unknown => Tail::Unknown,
            Tail::Geometric(_) => Self::linear_tail(&[self], &[k], self.order()),
        };
        Ok(Self::raw(m, self.basis, coeffs, tail))
    }

    /// Cauchy product in the monomial basis.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        expect_basis(self.basis, Basis::Monomial)?;
        self.check_compatible(other)?;
        let m = self.model;
        Ok(match Self::joint_order(&[self, other]) {
            None => Self::raw(
                m,
                Basis::Monomial,
                poly_mul(&m, &self.coeffs, &other.coeffs, None),
                Tail::Zero,
            ),
            Some(n) => {
                let a = self.known_prefix(n);
                let b = other.known_prefix(n);
                Self::raw(m, Basis::Monomial, poly_mul(&m, &a, &b, Some(n)), Tail::Unknown)
            }
        })
    }

    /// The first `n` coefficients; `n` must not exceed what is known.
    fn known_prefix(&self, n: usize) -> Vec<RingElement> {
        (0..n).map(|i| self.coeff(i).expect("known coefficient")).collect()
    }

    /// `F(G(s))` for `G` without constant term.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        expect_basis(self.basis, Basis::Monomial)?;
        self.check_compatible(g)?;
        let m = self.model;
        match g.coeff(0) {
            None => {
                return Err(Error::InsufficientOrder {
                    needed: 1,
                    available: 0,
                })
            }
            Some(c) if !m.is_zero(&c) => return Err(Error::NonZeroConstantTerm),
            _ => {}
        }
        let (limit, f, gc, tail) = match Self::joint_order(&[self, g]) {
            None => (None, self.coeffs.clone(), g.coeffs.clone(), Tail::Zero),
            Some(n) => {
                // terms f_k G^k with k ≥ n vanish mod s^n
                let f = self.known_prefix(if self.is_exact() { n.min(self.order()) } else { n });
                (Some(n), f, g.known_prefix(n), Tail::Unknown)
            }
        };
        let mut acc: Vec<RingElement> = Vec::new();
        for c in f.iter().rev() {
            acc = poly_mul(&m, &acc, &gc, limit);
            if acc.is_empty() {
                acc.push(m.zero());
            }
            acc[0] = m.add(&acc[0], c);
        }
        if let Some(n) = limit {
            acc.resize(n, m.zero());
        }
        Ok(Self::raw(m, Basis::Monomial, acc, tail))
    }

    /// Weighted norm `Σ |a_n| ρ^n` (supremum over non-archimedean models).
    pub fn ps_norm(&self, rho: &BigRational) -> Result<NormValue> {
        expect_basis(self.basis, Basis::Monomial)?;
        weighted_l1_norm(&self.model, &self.coeffs, &self.tail, &Weight::geometric(rho.clone())?)
    }

    /// Weighted norm `sup |a_n| ρ^n`.
    pub fn bs_norm(&self, rho: &BigRational) -> Result<NormValue> {
        expect_basis(self.basis, Basis::Mahler)?;
        weighted_linf_norm(&self.model, &self.coeffs, &self.tail, &Weight::geometric(rho.clone())?)
    }
}

/// `α(s) = (1+s)^{-1} - 1 = Σ_{n≥1} (-1)^n s^n` to order `n`.
pub fn geometric_inverse(model: CoefficientModel, n: usize) -> Result<TruncatedSeries> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let coeffs = (0..n)
        .map(|i| match i {
            0 => model.zero(),
            _ if i % 2 == 0 => model.one(),
            _ => model.from_i64(-1),
        })
        .collect();
    let td = TailDescriptor {
        start: 1,
        bound: BigRational::from_integer(1.into()),
        ratio: BigRational::from_integer(1.into()),
        sharp: true,
    };
    Ok(TruncatedSeries::raw(
        model,
        Basis::Monomial,
        coeffs,
        Tail::Geometric(td),
    ))
}

/// Polynomial product, optionally truncated to `limit` coefficients.
pub(crate) fn poly_mul(
    m: &CoefficientModel,
    a: &[RingElement],
    b: &[RingElement],
    limit: Option<usize>,
) -> Vec<RingElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let full = a.len() + b.len() - 1;
    let len = limit.map_or(full, |l| l.min(full));
    let mut out = vec![m.zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if m.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = m.add(&out[i + j], &m.mul(x, y));
        }
    }
    out
}

/// A truncated element of the tensor square, coefficients on `e_i ⊗ e_j`.
///
/// Entry `(i, j)` is known when `i < rows`, `j < cols` and, if a diagonal
/// limit is set, `i + j < diag`. Only nonzero known entries are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiTruncatedSeries {
    model: CoefficientModel,
    rows: usize,
    cols: usize,
    diag: Option<usize>,
    entries: BTreeMap<(usize, usize), RingElement>,
}

impl BiTruncatedSeries {
    pub fn new(
        model: CoefficientModel,
        rows: usize,
        cols: usize,
        diag: Option<usize>,
        entries: impl IntoIterator<Item = ((usize, usize), RingElement)>,
    ) -> Result<Self> {
        let mut out = BiTruncatedSeries {
            model,
            rows,
            cols,
            diag,
            entries: BTreeMap::new(),
        };
        for ((i, j), c) in entries {
            model.check(&c)?;
            if !out.is_known(i, j) {
                return Err(Error::Domain(format!("entry ({i}, {j}) lies outside the known region")));
            }
            out.accumulate(i, j, &c);
        }
        Ok(out)
    }

    /// Empty element with every entry of the `size × size` square known.
    pub fn square(model: CoefficientModel, size: usize) -> Self {
        BiTruncatedSeries {
            model,
            rows: size,
            cols: size,
            diag: None,
            entries: BTreeMap::new(),
        }
    }

    pub(crate) fn with_region(model: CoefficientModel, rows: usize, cols: usize, diag: Option<usize>) -> Self {
        BiTruncatedSeries {
            model,
            rows,
            cols,
            diag,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `c` to entry `(i, j)`.
    pub(crate) fn accumulate(&mut self, i: usize, j: usize, c: &RingElement) {
        let m = self.model;
        let v = match self.entries.remove(&(i, j)) {
            Some(old) => m.add(&old, c),
            None => c.clone(),
        };
        if !m.is_zero(&v) {
            self.entries.insert((i, j), v);
        }
    }

    pub fn model(&self) -> &CoefficientModel {
        &self.model
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn diag(&self) -> Option<usize> {
        self.diag
    }

    pub fn is_known(&self, i: usize, j: usize) -> bool {
        i < self.rows && j < self.cols && self.diag.is_none_or(|d| i + j < d)
    }

    pub fn get(&self, i: usize, j: usize) -> Option<RingElement> {
        if !self.is_known(i, j) {
            return None;
        }
        Some(self.entries.get(&(i, j)).cloned().unwrap_or_else(|| self.model.zero()))
    }

    /// Nonzero entries in `(i, j)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &RingElement)> {
        self.entries.iter()
    }

    /// `F ⊗ G` restricted to the `n × n` square.
    pub fn outer(f: &TruncatedSeries, g: &TruncatedSeries, n: usize) -> Result<Self> {
        same_model(f.model(), g.model())?;
        let bound = |s: &TruncatedSeries| if s.is_exact() { n } else { s.order().min(n) };
        let mut out = Self::with_region(*f.model(), bound(f), bound(g), None);
        let m = *f.model();
        for i in 0..out.rows {
            let a = f.coeff(i).expect("known");
            if m.is_zero(&a) {
                continue;
            }
            for j in 0..out.cols {
                let b = g.coeff(j).expect("known");
                out.accumulate(i, j, &m.mul(&a, &b));
            }
        }
        Ok(out)
    }

    /// `Σ |c_ij| ρ1^i ρ2^j`, or the maximum over a non-archimedean model.
    pub fn tensor_norm(&self, rho1: &BigRational, rho2: &BigRational) -> Result<NormValue> {
        let mut acc = NormValue::zero();
        for (&(i, j), c) in &self.entries {
            let w = num_traits::pow(rho1.clone(), i) * num_traits::pow(rho2.clone(), j);
            let term = self.model.norm(c)? * NormValue::finite(w);
            acc = if self.model.is_nonarchimedean() {
                acc.max(term)
            } else {
                acc + term
            };
        }
        Ok(acc)
    }

    /// Equal on every entry known to both sides.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.model != other.model {
            return false;
        }
        let rows = self.rows.min(other.rows);
        let cols = self.cols.min(other.cols);
        (0..rows).all(|i| {
            (0..cols).all(|j| match (self.get(i, j), other.get(i, j)) {
                (Some(a), Some(b)) => self.model.equivalent(&a, &b),
                _ => true,
            })
        })
    }
}
