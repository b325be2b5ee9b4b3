//! Coefficient rings: the integers with the trivial norm, the rationals with
//! the supremum of all p-adic and trivial norms, the p-adic and archimedean
//! rationals, and truncated p-adic integers.
//!
//! Elements are plain data ([`RingElement`]); all arithmetic goes through the
//! owning [`CoefficientModel`]. Arithmetic methods panic when handed an element
//! from a different carrier; constructors at API boundaries validate carriers
//! with [`CoefficientModel::check`].

mod morphism;
mod norm;
pub mod padic;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use morphism::{apply_morphism, MorphismKind, RingMorphism};
pub use norm::NormValue;
pub use padic::{Padic, PadicContext};

use crate::combinatorics::{factor, is_prime};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelId {
    TrivialInt,
    SupRational,
    PAdicRational { p: u64 },
    ArchRational,
    TruncatedZp { p: u64, precision: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoefficientModel {
    id: ModelId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    Rat(BigRational),
    Padic(Padic),
}

impl RingElement {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            RingElement::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RingElement::Rat(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_padic(&self) -> Option<&Padic> {
        match self {
            RingElement::Padic(x) => Some(x),
            _ => None,
        }
    }
}

impl CoefficientModel {
    pub fn new(id: ModelId) -> Result<Self> {
        match id {
            ModelId::PAdicRational { p } | ModelId::TruncatedZp { p, .. } if !is_prime(p) => {
                Err(Error::InvalidModel(format!("{p} is not prime")))
            }
            ModelId::TruncatedZp { precision: 0, .. } => Err(Error::InvalidModel("precision must be positive".into())),
            _ => Ok(CoefficientModel { id }),
        }
    }

    pub fn trivial_int() -> Self {
        CoefficientModel {
            id: ModelId::TrivialInt,
        }
    }

    pub fn sup_rational() -> Self {
        CoefficientModel {
            id: ModelId::SupRational,
        }
    }

    pub fn arch_rational() -> Self {
        CoefficientModel {
            id: ModelId::ArchRational,
        }
    }

    pub fn padic_rational(p: u64) -> Result<Self> {
        Self::new(ModelId::PAdicRational { p })
    }

    pub fn truncated_zp(p: u64, precision: u32) -> Result<Self> {
        Self::new(ModelId::TruncatedZp { p, precision })
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn is_nonarchimedean(&self) -> bool {
        !matches!(self.id, ModelId::ArchRational)
    }

    pub fn prime(&self) -> Option<u64> {
        match self.id {
            ModelId::PAdicRational { p } | ModelId::TruncatedZp { p, .. } => Some(p),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(
            self.id,
            ModelId::SupRational | ModelId::PAdicRational { .. } | ModelId::ArchRational
        )
    }

    pub(crate) fn padic_context(&self) -> Option<PadicContext> {
        match self.id {
            ModelId::TruncatedZp { p, precision } => Some(PadicContext::new(p, precision)),
            _ => None,
        }
    }

    fn ctx(&self) -> PadicContext {
        self.padic_context().expect("p-adic model")
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        matches!(
            (self.id, x),
            (ModelId::TrivialInt, RingElement::Int(_))
                | (ModelId::SupRational, RingElement::Rat(_))
                | (ModelId::PAdicRational { .. }, RingElement::Rat(_))
                | (ModelId::ArchRational, RingElement::Rat(_))
                | (ModelId::TruncatedZp { .. }, RingElement::Padic(_))
        )
    }

    pub fn check(&self, x: &RingElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInCarrier {
                model: self.to_string(),
            })
        }
    }

    pub fn zero(&self) -> RingElement {
        self.from_integer(&BigInt::zero())
    }

    pub fn one(&self) -> RingElement {
        self.from_integer(&BigInt::one())
    }

    pub fn from_i64(&self, n: i64) -> RingElement {
        self.from_integer(&BigInt::from(n))
    }

    pub fn from_integer(&self, n: &BigInt) -> RingElement {
        match self.id {
            ModelId::TrivialInt => RingElement::Int(n.clone()),
            ModelId::TruncatedZp { .. } => RingElement::Padic(self.ctx().from_integer(n)),
            _ => RingElement::Rat(BigRational::from_integer(n.clone())),
        }
    }

    /// Fails over the integers when `q` is not integral.
    pub fn from_rational(&self, q: &BigRational) -> Result<RingElement> {
        match self.id {
            ModelId::TrivialInt if q.is_integer() => Ok(RingElement::Int(q.to_integer())),
            ModelId::TrivialInt => Err(Error::NotInCarrier {
                model: self.to_string(),
            }),
            ModelId::TruncatedZp { .. } => Ok(RingElement::Padic(self.ctx().from_rational(q))),
            _ => Ok(RingElement::Rat(q.clone())),
        }
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        match x {
            RingElement::Int(n) => n.is_zero(),
            RingElement::Rat(q) => q.is_zero(),
            RingElement::Padic(a) => a.is_zero(),
        }
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match (a, b) {
            (RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(x + y),
            (RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(x + y),
            (RingElement::Padic(x), RingElement::Padic(y)) => RingElement::Padic(self.ctx().add(x, y)),
            _ => panic!("carrier mismatch in {self}"),
        }
    }

    pub fn neg(&self, a: &RingElement) -> RingElement {
        match a {
            RingElement::Int(x) => RingElement::Int(-x),
            RingElement::Rat(x) => RingElement::Rat(-x),
            RingElement::Padic(x) => RingElement::Padic(self.ctx().neg(x)),
        }
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        match (a, b) {
            (RingElement::Int(x), RingElement::Int(y)) => RingElement::Int(x * y),
            (RingElement::Rat(x), RingElement::Rat(y)) => RingElement::Rat(x * y),
            (RingElement::Padic(x), RingElement::Padic(y)) => RingElement::Padic(self.ctx().mul(x, y)),
            _ => panic!("carrier mismatch in {self}"),
        }
    }

    pub fn mul_integer(&self, a: &RingElement, n: &BigInt) -> RingElement {
        self.mul(a, &self.from_integer(n))
    }

    /// Exact division. Over the integers the quotient must be integral.
    pub fn div(&self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        if self.is_zero(b) {
            return Err(Error::DivisionByZero);
        }
        match (a, b) {
            (RingElement::Int(x), RingElement::Int(y)) => {
                if (x % y).is_zero() {
                    Ok(RingElement::Int(x / y))
                } else {
                    Err(Error::NotInCarrier {
                        model: self.to_string(),
                    })
                }
            }
            (RingElement::Rat(x), RingElement::Rat(y)) => Ok(RingElement::Rat(x / y)),
            (RingElement::Padic(x), RingElement::Padic(y)) => self
                .ctx()
                .div(x, y)
                .map(RingElement::Padic)
                .ok_or(Error::DivisionByZero),
            _ => panic!("carrier mismatch in {self}"),
        }
    }

    /// Equality; for truncated p-adics, agreement at the common precision.
    pub fn equivalent(&self, a: &RingElement, b: &RingElement) -> bool {
        match (a, b) {
            (RingElement::Padic(x), RingElement::Padic(y)) => self.ctx().equivalent(x, y),
            _ => a == b,
        }
    }

    pub fn norm(&self, x: &RingElement) -> Result<NormValue> {
        self.check(x)?;
        if self.is_zero(x) {
            return Ok(NormValue::zero());
        }
        Ok(match (self.id, x) {
            (ModelId::TrivialInt, _) => NormValue::one(),
            (ModelId::ArchRational, RingElement::Rat(q)) => NormValue::finite(q.abs()),
            (ModelId::PAdicRational { p }, RingElement::Rat(q)) => padic_norm(q, p),
            (ModelId::SupRational, RingElement::Rat(q)) => sup_norm(q),
            (ModelId::TruncatedZp { p, .. }, RingElement::Padic(a)) => p_power_norm(p, a.valuation().expect("nonzero")),
            _ => unreachable!("carrier checked"),
        })
    }

    /// Exact rational value when one exists. For truncated p-adics this is the
    /// canonical representative of the known digits.
    pub fn to_rational(&self, x: &RingElement) -> Option<BigRational> {
        match x {
            RingElement::Int(n) => Some(BigRational::from_integer(n.clone())),
            RingElement::Rat(q) => Some(q.clone()),
            RingElement::Padic(a) => self.padic_context()?.representative(a),
        }
    }
}

fn p_power_norm(p: u64, valuation: i64) -> NormValue {
    let p = BigRational::from_integer(BigInt::from(p));
    let v = if valuation >= 0 {
        num_traits::pow(p, valuation as usize).recip()
    } else {
        num_traits::pow(p, (-valuation) as usize)
    };
    NormValue::finite(v)
}

fn padic_norm(q: &BigRational, p: u64) -> NormValue {
    let pb = BigInt::from(p);
    let vn = crate::combinatorics::valuation(q.numer(), &pb).unwrap() as i64;
    let vd = crate::combinatorics::valuation(q.denom(), &pb).unwrap() as i64;
    p_power_norm(p, vn - vd)
}

/// `max(1, max_p |q|_p)`: only primes of the denominator can exceed the
/// trivial norm, each contributing `p^{v_p(den)}`.
fn sup_norm(q: &BigRational) -> NormValue {
    let den: BigUint = q.denom().magnitude().clone();
    let best = factor(&den)
        .into_iter()
        .map(|(p, e)| num_traits::pow(p, e as usize))
        .max()
        .unwrap_or_else(BigUint::one);
    NormValue::finite(BigRational::from_integer(BigInt::from(best)))
}

impl fmt::Display for CoefficientModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.id {
            ModelId::TrivialInt => write!(f, "Z-trivial"),
            ModelId::SupRational => write!(f, "Q-na"),
            ModelId::PAdicRational { p } => write!(f, "Qp:{p}"),
            ModelId::ArchRational => write!(f, "Q-arch"),
            ModelId::TruncatedZp { p, precision } => write!(f, "Zp:{p}:{precision}"),
        }
    }
}

impl FromStr for CoefficientModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidModel(format!("unrecognized model name {s:?}"));
        match s {
            "Z-trivial" => Ok(Self::trivial_int()),
            "Q-na" => Ok(Self::sup_rational()),
            "Q-arch" => Ok(Self::arch_rational()),
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["Qp", p] => Self::padic_rational(p.parse().map_err(|_| bad())?),
                    ["Zp", p, prec] => {
                        Self::truncated_zp(p.parse().map_err(|_| bad())?, prec.parse().map_err(|_| bad())?)
                    }
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    NormOfOne,
    ZeroIffZeroNorm,
    Triangle,
    Ultrametric,
    Submultiplicative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub operands: Vec<RingElement>,
    pub lhs: NormValue,
    pub rhs: NormValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    /// False for archimedean models, where only the triangle inequality applies.
    pub ultrametric_checked: bool,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the normed-ring axioms on every sample and every pair of samples.
pub fn check_ring_axioms(model: &CoefficientModel, samples: &[RingElement]) -> Result<AxiomReport> {
    if samples.is_empty() {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    for x in samples {
        model.check(x)?;
    }
    let mut violations = Vec::new();
    let one = model.one();
    let n1 = model.norm(&one)?;
    if n1 > NormValue::one() {
        violations.push(AxiomViolation {
            axiom: Axiom::NormOfOne,
            operands: vec![one],
            lhs: n1,
            rhs: NormValue::one(),
        });
    }
    for x in samples {
        let nx = model.norm(x)?;
        if nx.is_zero() != model.is_zero(x) {
            violations.push(AxiomViolation {
                axiom: Axiom::ZeroIffZeroNorm,
                operands: vec![x.clone()],
                lhs: nx.clone(),
                rhs: NormValue::zero(),
            });
        }
    }
    let na = model.is_nonarchimedean();
    for x in samples {
        for y in samples {
            let (nx, ny) = (model.norm(x)?, model.norm(y)?);
            let sum = model.norm(&model.add(x, y))?;
            let (axiom, bound) = if na {
                (Axiom::Ultrametric, nx.clone().max(ny.clone()))
            } else {
                (Axiom::Triangle, nx.clone() + ny.clone())
            };
            if sum > bound {
                violations.push(AxiomViolation {
                    axiom,
                    operands: vec![x.clone(), y.clone()],
                    lhs: sum,
                    rhs: bound,
                });
            }
            let prod = model.norm(&model.mul(x, y))?;
            let bound = nx * ny;
            if prod > bound {
                violations.push(AxiomViolation {
                    axiom: Axiom::Submultiplicative,
                    operands: vec![x.clone(), y.clone()],
                    lhs: prod,
                    rhs: bound,
                });
            }
        }
    }
    Ok(AxiomReport {
        violations,
        ultrametric_checked: na,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> RingElement {
        RingElement::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn norm_examples() {
        let z = CoefficientModel::trivial_int();
        assert_eq!(z.norm(&z.from_i64(5)).unwrap(), NormValue::one());
        assert_eq!(z.norm(&z.zero()).unwrap(), NormValue::zero());
        let qna = CoefficientModel::sup_rational();
        assert_eq!(qna.norm(&q(1, 6)).unwrap(), NormValue::from_integer(3));
        assert_eq!(qna.norm(&q(0, 1)).unwrap(), NormValue::zero());
        let q3 = CoefficientModel::padic_rational(3).unwrap();
        assert_eq!(q3.norm(&q(18, 1)).unwrap(), NormValue::ratio(1, 9));
        let arch = CoefficientModel::arch_rational();
        assert_eq!(arch.norm(&q(-3, 4)).unwrap(), NormValue::ratio(3, 4));
        let zp = CoefficientModel::truncated_zp(3, 4).unwrap();
        assert_eq!(zp.norm(&zp.from_i64(18)).unwrap(), NormValue::ratio(1, 9));
        assert_eq!(zp.norm(&zp.zero()).unwrap(), NormValue::zero());
    }

    #[test]
    fn norm_rejects_foreign_elements() {
        let z = CoefficientModel::trivial_int();
        assert!(matches!(z.norm(&q(1, 2)), Err(Error::NotInCarrier { .. })));
    }

    #[test]
    fn sup_norm_is_at_least_one() {
        let qna = CoefficientModel::sup_rational();
        for (n, d) in [(1, 1), (7, 3), (-5, 8), (100, 1), (3, 2730)] {
            assert!(qna.norm(&q(n, d)).unwrap() >= NormValue::one());
        }
        assert_eq!(qna.norm(&q(3, 2730)).unwrap(), NormValue::from_integer(13));
    }

    #[test]
    fn model_names_round_trip() {
        for s in ["Z-trivial", "Q-na", "Qp:7", "Q-arch", "Zp:5:6"] {
            assert_eq!(s.parse::<CoefficientModel>().unwrap().to_string(), s);
        }
        assert!("Qp:6".parse::<CoefficientModel>().is_err());
        assert!("Zp:5:0".parse::<CoefficientModel>().is_err());
        assert!("R".parse::<CoefficientModel>().is_err());
    }

    #[test]
    fn nonarchimedean_flag() {
        assert!(CoefficientModel::trivial_int().is_nonarchimedean());
        assert!(CoefficientModel::sup_rational().is_nonarchimedean());
        assert!(!CoefficientModel::arch_rational().is_nonarchimedean());
    }

    #[test]
    fn axiom_examples() {
        let z = CoefficientModel::trivial_int();
        let r = check_ring_axioms(&z, &[z.from_i64(1), z.from_i64(2), z.from_i64(3)]).unwrap();
        assert!(r.passed());
        let q2 = CoefficientModel::padic_rational(2).unwrap();
        let r = check_ring_axioms(&q2, &[q(1, 2), q(3, 1), q(5, 4)]).unwrap();
        assert!(r.passed() && r.ultrametric_checked);
        let arch = CoefficientModel::arch_rational();
        let r = check_ring_axioms(&arch, &[q(-1, 1), q(1, 1)]).unwrap();
        assert!(r.passed());
        assert!(!r.ultrametric_checked);
        assert!(check_ring_axioms(&arch, &[]).is_err());
    }

    #[test]
    fn padic_rational_norm_is_multiplicative() {
        let q5 = CoefficientModel::padic_rational(5).unwrap();
        let xs = [q(25, 3), q(1, 10), q(7, 1), q(-50, 13)];
        for a in &xs {
            for b in &xs {
                let lhs = q5.norm(&q5.mul(a, b)).unwrap();
                let rhs = q5.norm(a).unwrap() * q5.norm(b).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
