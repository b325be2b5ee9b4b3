//! Köthe weights, weight matrices and the sequence spaces they define.
//!
//! Every weight is *eventually geometric*: a finite table of values followed
//! by a geometric continuation. Ratio sums, suprema and the eventual order
//! between weights therefore have exact closed forms.
//!
//! Sequences are given by an exact prefix plus a [`Tail`]. Weighted norms are
//! exact for finitely supported sequences and certified upper bounds
//! otherwise. Membership in the echelon space `λ` (summable against every
//! row) and the co-echelon space `κ` (summable against the inverse of some
//! row) is decided only when the certificate settles it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::coefficients::{CoefficientModel, NormValue, RingElement};
use crate::{Error, Result};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rpow(x: &BigRational, n: usize) -> BigRational {
    num_traits::pow(x.clone(), n)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Weight {
    /// `ρ(n) = ratio^n`.
    Geometric { ratio: BigRational },
    /// `ρ(n) = prefix[n]` for `n < prefix.len()`, continued geometrically from
    /// the last entry with the given ratio.
    Table {
        prefix: Vec<BigRational>,
        ratio: BigRational,
    },
}

impl Weight {
    pub fn geometric(ratio: BigRational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::InvalidWeight(format!("ratio {ratio} is not positive")));
        }
        Ok(Weight::Geometric { ratio })
    }

    pub fn table(prefix: Vec<BigRational>, ratio: BigRational) -> Result<Self> {
        if prefix.is_empty() {
            return Err(Error::InvalidWeight("table prefix is empty".into()));
        }
        if let Some(v) = prefix.iter().find(|v| !v.is_positive()) {
            return Err(Error::InvalidWeight(format!("table value {v} is not positive")));
        }
        if !ratio.is_positive() {
            return Err(Error::InvalidWeight(format!("ratio {ratio} is not positive")));
        }
        Ok(Weight::Table { prefix, ratio })
    }

    /// Shorthand for tests and examples; panics on a non-positive ratio.
    pub fn geometric_ratio(num: i64, den: i64) -> Self {
        Self::geometric(rat(num, den)).expect("positive ratio")
    }

    pub fn ratio(&self) -> &BigRational {
        match self {
            Weight::Geometric { ratio } | Weight::Table { ratio, .. } => ratio,
        }
    }

    /// Index `a` with `ρ(n) = ρ(a) · ratio^(n-a)` for all `n ≥ a`.
    pub fn anchor(&self) -> usize {
        match self {
            Weight::Geometric { .. } => 0,
            Weight::Table { prefix, .. } => prefix.len() - 1,
        }
    }

    pub fn eval(&self, n: usize) -> BigRational {
        match self {
            Weight::Geometric { ratio } => rpow(ratio, n),
            Weight::Table { prefix, ratio } => match prefix.get(n) {
                Some(v) => v.clone(),
                None => {
                    let last = prefix.len() - 1;
                    &prefix[last] * rpow(ratio, n - last)
                }
            },
        }
    }

    /// The weight `n ↦ 1/ρ(n)`.
    pub fn reciprocal(&self) -> Weight {
        match self {
            Weight::Geometric { ratio } => Weight::Geometric { ratio: ratio.recip() },
            Weight::Table { prefix, ratio } => Weight::Table {
                prefix: prefix.iter().map(|v| v.recip()).collect(),
                ratio: ratio.recip(),
            },
        }
    }
}

/// `Σ_{n≥0} first · q^n`, with `0` for a zero first term.
fn geometric_sum(first: &BigRational, q: &BigRational) -> NormValue {
    if first.is_zero() {
        NormValue::zero()
    } else if *q < BigRational::one() {
        NormValue::finite(first / (BigRational::one() - q))
    } else {
        NormValue::Infinite
    }
}

/// `sup_{n≥0} first · q^n`.
fn geometric_sup(first: &BigRational, q: &BigRational) -> NormValue {
    if first.is_zero() {
        NormValue::zero()
    } else if *q <= BigRational::one() {
        NormValue::finite(first.clone())
    } else {
        NormValue::Infinite
    }
}

/// `Σ_{n≥0} σ(n)/ρ(n)`, exactly.
pub fn ratio_sum(sigma: &Weight, rho: &Weight) -> NormValue {
    let a = sigma.anchor().max(rho.anchor());
    let head: BigRational = (0..a).map(|n| sigma.eval(n) / rho.eval(n)).sum();
    let q = sigma.ratio() / rho.ratio();
    NormValue::finite(head) + geometric_sum(&(sigma.eval(a) / rho.eval(a)), &q)
}

/// `Σ_{n<k} σ(n)/ρ(n)` by direct summation.
pub fn partial_ratio_sum(sigma: &Weight, rho: &Weight, k: usize) -> BigRational {
    (0..k).map(|n| sigma.eval(n) / rho.eval(n)).sum()
}

/// `sup_n σ(n)/ρ(n)`, exactly.
pub fn sup_ratio(sigma: &Weight, rho: &Weight) -> NormValue {
    let a = sigma.anchor().max(rho.anchor());
    let q = sigma.ratio() / rho.ratio();
    (0..a)
        .map(|n| NormValue::finite(sigma.eval(n) / rho.eval(n)))
        .fold(geometric_sup(&(sigma.eval(a) / rho.eval(a)), &q), NormValue::max)
}

/// Nuclearity of the identity inclusion `ℓ¹(ρ) → ℓ¹(σ)`.
///
/// Fails with [`Error::UnboundedInclusion`] when the inclusion is not even
/// well defined; `Ok(false)` means bounded but not nuclear.
pub fn is_nuclear_inclusion(sigma: &Weight, rho: &Weight, nonarchimedean: bool) -> Result<bool> {
    if !sup_ratio(sigma, rho).is_finite() {
        return Err(Error::UnboundedInclusion);
    }
    if nonarchimedean {
        // σ(n)/ρ(n) → 0 iff the eventual ratio is < 1
        Ok(sigma.ratio() < rho.ratio())
    } else {
        Ok(ratio_sum(sigma, rho).is_finite())
    }
}

/// Eventual strict order: `σ(n) < ρ(n)` for all large `n`.
pub fn eventually_less(sigma: &Weight, rho: &Weight) -> bool {
    let a = sigma.anchor().max(rho.anchor());
    match sigma.ratio().cmp(rho.ratio()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => sigma.eval(a) < rho.eval(a),
        std::cmp::Ordering::Greater => false,
    }
}

/// Eventual weak order: `σ(n) ≤ ρ(n)` for all large `n`.
pub fn eventually_le(sigma: &Weight, rho: &Weight) -> bool {
    let a = sigma.anchor().max(rho.anchor());
    match sigma.ratio().cmp(rho.ratio()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => sigma.eval(a) <= rho.eval(a),
        std::cmp::Ordering::Greater => false,
    }
}

/// An increasing chain of weights `ρ_0 ≤ ρ_1 ≤ ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    rows: Vec<Weight>,
    na: bool,
}

impl WeightMatrix {
    /// Rows must be eventually weakly increasing; use
    /// [`WeightMatrix::is_strictly_increasing`] for the strict order.
    pub fn new(rows: Vec<Weight>, na: bool) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidWeight("weight matrix has no rows".into()));
        }
        for (j, w) in rows.windows(2).enumerate() {
            if !eventually_le(&w[0], &w[1]) {
                return Err(Error::InvalidWeight(format!(
                    "row {j} is not eventually dominated by row {}",
                    j + 1
                )));
            }
        }
        Ok(WeightMatrix { rows, na })
    }

    pub fn geometric(ratios: &[BigRational], na: bool) -> Result<Self> {
        let rows = ratios.iter().cloned().map(Weight::geometric).collect::<Result<_>>()?;
        Self::new(rows, na)
    }

    /// Radii `1 - 1/(j+2)` for `j < rows`, exhausting the open unit disk.
    pub fn open_unit_disk(rows: usize, na: bool) -> Self {
        let ratios: Vec<_> = (0..rows as i64).map(|j| rat(j + 1, j + 2)).collect();
        Self::geometric(&ratios, na).expect("increasing radii")
    }

    /// Radii `j + 1`, exhausting the whole line.
    pub fn entire(rows: usize, na: bool) -> Self {
        let ratios: Vec<_> = (0..rows as i64).map(|j| rat(j + 1, 1)).collect();
        Self::geometric(&ratios, na).expect("increasing radii")
    }

    pub fn rows(&self) -> &[Weight] {
        &self.rows
    }

    pub fn na(&self) -> bool {
        self.na
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.rows.windows(2).all(|w| eventually_less(&w[0], &w[1]))
    }

    /// Ratio sums of consecutive rows.
    pub fn consecutive_ratio_sums(&self) -> Vec<NormValue> {
        self.rows.windows(2).map(|w| ratio_sum(&w[0], &w[1])).collect()
    }
}

pub fn is_nuclear_matrix(w: &WeightMatrix) -> bool {
    w.rows
        .windows(2)
        .all(|pair| is_nuclear_inclusion(&pair[0], &pair[1], w.na).unwrap_or(false))
}

/// Certificate `|a_n| ≤ bound · ratio^n` for every `n ≥ start`; with `sharp`
/// set the inequality is an equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TailDescriptor {
    pub start: usize,
    pub bound: BigRational,
    pub ratio: BigRational,
    pub sharp: bool,
}

impl TailDescriptor {
    pub fn new(start: usize, bound: BigRational, ratio: BigRational) -> Result<Self> {
        if bound.is_negative() || ratio.is_negative() {
            return Err(Error::InvalidTail("bound and ratio must be nonnegative".into()));
        }
        Ok(TailDescriptor {
            start,
            bound,
            ratio,
            sharp: false,
        })
    }

    pub fn sharp(mut self) -> Self {
        self.sharp = true;
        self
    }

    pub fn bound_at(&self, n: usize) -> BigRational {
        &self.bound * rpow(&self.ratio, n)
    }

    /// Whether every term the certificate describes is zero.
    pub fn is_null(&self) -> bool {
        self.bound.is_zero() || (self.ratio.is_zero() && self.start > 0)
    }
}

/// What is known about a sequence beyond its stored prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    /// All further terms vanish.
    Zero,
    Geometric(TailDescriptor),
    /// Nothing is known.
    Unknown,
}

impl Tail {
    /// Checks the certificate against the known prefix.
    pub fn validate(&self, model: &CoefficientModel, coeffs: &[RingElement]) -> Result<()> {
        let Tail::Geometric(td) = self else {
            return Ok(());
        };
        if td.start > coeffs.len() {
            return Err(Error::InvalidTail(format!(
                "certificate starts at {} beyond the {} stored coefficients",
                td.start,
                coeffs.len()
            )));
        }
        for (n, a) in coeffs.iter().enumerate().skip(td.start) {
            let norm = model.norm(a)?;
            let bound = NormValue::finite(td.bound_at(n));
            if norm > bound || (td.sharp && norm != bound) {
                return Err(Error::InvalidTail(format!(
                    "coefficient {n} has norm {norm}, certificate says {bound}"
                )));
            }
        }
        Ok(())
    }
}

/// Contribution of indices `n ≥ len` against weight `w`.
fn tail_contribution(tail: &Tail, len: usize, w: &Weight, sum: bool) -> NormValue {
    let td = match tail {
        Tail::Zero => return NormValue::zero(),
        Tail::Unknown => return NormValue::Infinite,
        Tail::Geometric(td) => td,
    };
    let m = len.max(w.anchor());
    let explicit = (len..m).map(|n| NormValue::finite(td.bound_at(n) * w.eval(n)));
    let head = td.bound_at(m) * w.eval(m);
    let q = &td.ratio * w.ratio();
    if sum {
        explicit.sum::<NormValue>() + geometric_sum(&head, &q)
    } else {
        explicit.fold(geometric_sup(&head, &q), NormValue::max)
    }
}

fn weighted_norm(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    rho: &Weight,
    sum: bool,
) -> Result<NormValue> {
    let mut acc = NormValue::zero();
    for (n, a) in coeffs.iter().enumerate() {
        let term = model.norm(a)? * NormValue::finite(rho.eval(n));
        acc = if sum { acc + term } else { acc.max(term) };
    }
    let t = tail_contribution(tail, coeffs.len(), rho, sum);
    Ok(if sum { acc + t } else { acc.max(t) })
}

/// `Σ |a_n| ρ(n)`, or `sup |a_n| ρ(n)` over a non-archimedean model.
pub fn weighted_l1_norm(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    rho: &Weight,
) -> Result<NormValue> {
    weighted_norm(model, coeffs, tail, rho, !model.is_nonarchimedean())
}

/// `sup |a_n| ρ(n)`.
pub fn weighted_linf_norm(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    rho: &Weight,
) -> Result<NormValue> {
    weighted_norm(model, coeffs, tail, rho, false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Lambda,
    Kappa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Member,
    NonMember,
    Undecidable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RowVerdict {
    /// Finite with the given certified bound.
    Certified(NormValue),
    /// A sharp certificate shows the weighted terms do not tend to zero.
    Divergent,
    Unsettled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberReport {
    pub verdict: Verdict,
    /// For `κ`-members the least certifying row; for non-members of `λ` the
    /// first divergent row.
    pub witness: Option<usize>,
    pub rows: Vec<RowVerdict>,
}

fn row_verdict(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    w: &Weight,
    sup_form: bool,
) -> Result<RowVerdict> {
    let bound = if sup_form {
        weighted_linf_norm(model, coeffs, tail, w)?
    } else {
        weighted_l1_norm(model, coeffs, tail, w)?
    };
    let Tail::Geometric(td) = tail else {
        return Ok(if bound.is_finite() {
            RowVerdict::Certified(bound)
        } else {
            RowVerdict::Unsettled
        });
    };
    if td.is_null() {
        return Ok(RowVerdict::Certified(bound));
    }
    let q = &td.ratio * w.ratio();
    let one = BigRational::one();
    let settled = if sup_form { q <= one } else { q < one };
    if settled {
        Ok(RowVerdict::Certified(bound))
    } else if td.sharp && (!sup_form || q > one) {
        Ok(RowVerdict::Divergent)
    } else {
        Ok(RowVerdict::Unsettled)
    }
}

fn aggregate(space: Space, rows: Vec<RowVerdict>) -> MemberReport {
    let first = |pred: fn(&RowVerdict) -> bool| rows.iter().position(pred);
    let certified = |r: &RowVerdict| matches!(r, RowVerdict::Certified(_));
    let divergent = |r: &RowVerdict| matches!(r, RowVerdict::Divergent);
    let (verdict, witness) = match space {
        Space::Lambda => {
            if let Some(j) = first(divergent) {
                (Verdict::NonMember, Some(j))
            } else if rows.iter().all(certified) {
                (Verdict::Member, None)
            } else {
                (Verdict::Undecidable, None)
            }
        }
        Space::Kappa => {
            if let Some(j) = first(certified) {
                (Verdict::Member, Some(j))
            } else if rows.iter().all(divergent) {
                (Verdict::NonMember, None)
            } else {
                (Verdict::Undecidable, None)
            }
        }
    };
    MemberReport { verdict, witness, rows }
}

fn membership_with(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    w: &WeightMatrix,
    space: Space,
    sup_form: bool,
) -> Result<MemberReport> {
    tail.validate(model, coeffs)?;
    let rows = w
        .rows()
        .iter()
        .map(|row| {
            let weight = match space {
                Space::Lambda => row.clone(),
                Space::Kappa => row.reciprocal(),
            };
            row_verdict(model, coeffs, tail, &weight, sup_form)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(aggregate(space, rows))
}

/// Membership in `λ(W)` or `κ(W)` using the summability condition per row.
pub fn membership(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    w: &WeightMatrix,
    space: Space,
) -> Result<MemberReport> {
    membership_with(model, coeffs, tail, w, space, false)
}

/// The same test with boundedness (`ℓ^∞`) in place of summability per row.
pub fn membership_sup(
    model: &CoefficientModel,
    coeffs: &[RingElement],
    tail: &Tail,
    w: &WeightMatrix,
    space: Space,
) -> Result<MemberReport> {
    membership_with(model, coeffs, tail, w, space, true)
}
