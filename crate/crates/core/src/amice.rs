//! The pairing between the two sides, distributions through their Amice
//! transforms, power moments and base change.
//!
//! A distribution `μ` is stored as its Amice transform `Σ μ_n s^n` with
//! `μ_n = ∫ binom(x, n) dμ`, so integrating a Mahler series against `μ` is
//! the coefficientwise pairing `Σ μ_n a_n`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::coefficients::{CoefficientModel, ModelId, NormValue, RingElement, RingMorphism};
use crate::combinatorics::factorial;
use crate::series::{expect_basis, same_model, Basis, TruncatedSeries};
use crate::weights::{Tail, TailDescriptor};
use crate::{Error, Result};

/// A distribution, represented by its Amice transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution(TruncatedSeries);

impl Distribution {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        expect_basis(series.basis(), Basis::Monomial)?;
        Ok(Distribution(series))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }

    pub fn into_series(self) -> TruncatedSeries {
        self.0
    }

    /// `∫ binom(x, n) dμ`, when known.
    pub fn moment(&self, n: usize) -> Option<RingElement> {
        self.0.coeff(n)
    }

    /// `∫ f dμ`.
    pub fn integrate(&self, f: &TruncatedSeries) -> Result<RingElement> {
        pairing(&self.0, f)
    }
}

/// Stirling numbers of the second kind `S(n, k)` for `n ≤ bound`.
#[derive(Debug, Clone)]
pub struct StirlingCache {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingCache {
    pub fn new(bound: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=bound {
            let prev = &rows[n - 1];
            let row = (0..=n)
                .map(|k| {
                    let stay = prev.get(k).map_or(BigInt::from(0), |s| s * k);
                    let grow = if k > 0 {
                        prev.get(k - 1).cloned().unwrap_or_default()
                    } else {
                        BigInt::from(0)
                    };
                    stay + grow
                })
                .collect();
            rows.push(row);
        }
        StirlingCache { rows }
    }

    pub fn bound(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> BigInt {
        self.rows[n].get(k).cloned().unwrap_or_default()
    }

    /// `x^n = Σ_k S(n,k) k! binom(x,k)` as Mahler coefficients.
    pub fn power_in_mahler_basis(&self, n: usize) -> Vec<BigInt> {
        (0..=n).map(|k| self.get(n, k) * factorial(k as u64)).collect()
    }
}

/// A pairing value with a bound on the omitted terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingValue {
    pub value: RingElement,
    /// Zero when the value is exact.
    pub error_bound: NormValue,
}

fn check_pair(xi: &TruncatedSeries, f: &TruncatedSeries) -> Result<()> {
    expect_basis(xi.basis(), Basis::Monomial)?;
    expect_basis(f.basis(), Basis::Mahler)?;
    same_model(xi.model(), f.model())
}

/// Norm bound for coefficient `n` of a series: exact when stored, from the
/// certificate otherwise.
fn coefficient_bound(s: &TruncatedSeries, n: usize) -> Result<NormValue> {
    match (s.coeffs().get(n), s.tail()) {
        (Some(c), _) => s.model().norm(c),
        (None, Tail::Zero) => Ok(NormValue::zero()),
        (None, Tail::Geometric(td)) => Ok(NormValue::finite(td.bound_at(n))),
        (None, Tail::Unknown) => Ok(NormValue::Infinite),
    }
}

/// `⟨ξ, f⟩ = Σ ξ_n a_n` together with a bound on the truncation error.
pub fn pairing_with_bound(xi: &TruncatedSeries, f: &TruncatedSeries) -> Result<PairingValue> {
    check_pair(xi, f)?;
    let m = *xi.model();
    let exact_len = match (xi.is_exact(), f.is_exact()) {
        (true, true) => Some(xi.order().min(f.order())),
        (true, false) => Some(xi.order()),
        (false, true) => Some(f.order()),
        (false, false) => None,
    };
    let len = exact_len.unwrap_or_else(|| xi.order().min(f.order()));
    let mut value = m.zero();
    for n in 0..len {
        let x = xi.coeff(n).expect("stored");
        if m.is_zero(&x) {
            continue;
        }
        let a = f.coeff(n).ok_or(Error::InsufficientOrder {
            needed: n + 1,
            available: f.order(),
        })?;
        value = m.add(&value, &m.mul(&x, &a));
    }
    if exact_len.is_some() {
        return Ok(PairingValue {
            value,
            error_bound: NormValue::zero(),
        });
    }
    let (Tail::Geometric(t1), Tail::Geometric(t2)) = (xi.tail(), f.tail()) else {
        return Err(Error::PairingUndefined(
            "both sides are infinite and a tail is uncertified".into(),
        ));
    };
    let q = &t1.ratio * &t2.ratio;
    if q >= BigRational::one() && !t1.is_null() && !t2.is_null() {
        return Err(Error::PairingUndefined(format!(
            "certified terms decay with ratio {q}, not below 1"
        )));
    }
    let na = m.is_nonarchimedean();
    let join = |acc: NormValue, t: NormValue| if na { acc.max(t) } else { acc + t };
    let far = xi.order().max(f.order());
    let mut bound = NormValue::zero();
    for n in len..far {
        bound = join(bound, coefficient_bound(xi, n)? * coefficient_bound(f, n)?);
    }
    let head = &t1.bound * &t2.bound * num_traits::pow(q.clone(), far);
    let rest = if na || head == BigRational::from_integer(0.into()) {
        head
    } else {
        head / (BigRational::one() - &q)
    };
    bound = join(bound, NormValue::finite(rest));
    Ok(PairingValue {
        value,
        error_bound: bound,
    })
}

/// `⟨ξ, f⟩ = Σ ξ_n a_n`. Exact when either side has finite support.
pub fn pairing(xi: &TruncatedSeries, f: &TruncatedSeries) -> Result<RingElement> {
    pairing_with_bound(xi, f).map(|p| p.value)
}

/// The distribution whose Mahler moments are `moments`.
pub fn amice_transform(model: &CoefficientModel, moments: Vec<RingElement>) -> Result<Distribution> {
    amice_transform_with_tail(model, moments, Tail::Zero)
}

pub fn amice_transform_with_tail(
    model: &CoefficientModel,
    moments: Vec<RingElement>,
    tail: Tail,
) -> Result<Distribution> {
    Distribution::new(TruncatedSeries::new(*model, Basis::Monomial, moments, tail)?)
}

/// The Dirac measure at an integer, `(1+s)^a`, to order `n`.
pub fn dirac(model: &CoefficientModel, a: i64, n: usize) -> Result<Distribution> {
    Distribution::new(crate::hopf::grouplike_from_exponent(model, &model.from_i64(a), n)?)
}

/// `∫ x^n dμ = Σ_k S(n,k) k! μ_k`.
pub fn power_moment(mu: &Distribution, n: usize) -> Result<RingElement> {
    power_moment_with(mu, n, &StirlingCache::new(n))
}

pub fn power_moment_with(mu: &Distribution, n: usize, stirling: &StirlingCache) -> Result<RingElement> {
    let m = mu.series().model();
    let weights = stirling.power_in_mahler_basis(n);
    let mut acc = m.zero();
    for (k, w) in weights.iter().enumerate() {
        let mk = mu.moment(k).ok_or(Error::InsufficientOrder {
            needed: n + 1,
            available: mu.series().order(),
        })?;
        acc = m.add(&acc, &m.mul_integer(&mk, w));
    }
    Ok(acc)
}

/// The distribution with Amice transform `log(1+s)/s`, to order `n`.
///
/// Moments are `(-1)^k/(k+1)`. The tail certificate is `|μ_k| ≤ 1` over the
/// archimedean rationals; non-archimedean norms of `1/(k+1)` can reach
/// `k+1`, covered by `n (1 + 1/n)^k` from index `n` on.
pub fn kubota_leopoldt(model: &CoefficientModel, n: usize) -> Result<Distribution> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    let tail = match model.id() {
        ModelId::ArchRational => TailDescriptor {
            start: 0,
            bound: BigRational::one(),
            ratio: BigRational::one(),
            sharp: false,
        },
        ModelId::SupRational | ModelId::PAdicRational { .. } => {
            let nn = BigRational::from_integer(BigInt::from(n));
            TailDescriptor {
                start: n,
                ratio: BigRational::one() + nn.recip(),
                bound: nn,
                sharp: false,
            }
        }
        _ => {
            return Err(Error::UnsupportedModel {
                op: "kubota_leopoldt",
                model: model.to_string(),
            })
        }
    };
    let moments = (0..n)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            model.from_rational(&BigRational::new(BigInt::from(sign), BigInt::from(k + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    amice_transform_with_tail(model, moments, Tail::Geometric(tail))
}

/// `B_n = ∫ x^n dμ_KL`, with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Result<BigRational> {
    bernoulli_with(n, &StirlingCache::new(n))
}

pub fn bernoulli_with(n: usize, stirling: &StirlingCache) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::Domain("index must be at least 1".into()));
    }
    let model = CoefficientModel::arch_rational();
    let mu = kubota_leopoldt(&model, n + 1)?;
    let v = power_moment_with(&mu, n, stirling)?;
    Ok(model.to_rational(&v).expect("rational model"))
}

/// Coefficientwise image of a series under a ring morphism.
pub fn base_change_series(f: &TruncatedSeries, m: &RingMorphism) -> Result<TruncatedSeries> {
    same_model(f.model(), &m.source())?;
    let coeffs = f.coeffs().iter().map(|c| m.apply(c)).collect::<Result<Vec<_>>>()?;
    // contracting morphisms keep geometric bounds but not equality
    let tail = match f.tail() {
        Tail::Geometric(td) => Tail::Geometric(TailDescriptor {
            sharp: false,
            ..td.clone()
        }),
        other => other.clone(),
    };
    Ok(TruncatedSeries::raw(m.target(), f.basis(), coeffs, tail))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseChangeReport {
    /// The pairing computed over the source, then mapped.
    pub lhs: RingElement,
    /// The pairing of the mapped series.
    pub rhs: RingElement,
    pub commutes: bool,
}

/// Compares pairing-then-map with map-then-pair for finitely supported input.
///
/// Over a truncated p-adic target both sides must also be known to the
/// target's full precision.
pub fn base_change_commutes(xi: &TruncatedSeries, f: &TruncatedSeries, m: &RingMorphism) -> Result<BaseChangeReport> {
    if !xi.is_exact() && !f.is_exact() {
        return Err(Error::InfiniteSupport);
    }
    let lhs = m.apply(&pairing(xi, f)?)?;
    let rhs = pairing(&base_change_series(xi, m)?, &base_change_series(f, m)?)?;
    let t = m.target();
    let precise = |x: &RingElement| match (x, t.id()) {
        (RingElement::Padic(p), ModelId::TruncatedZp { precision, .. }) => {
            p.abs_precision().is_none_or(|a| a >= precision as i64)
        }
        _ => true,
    };
    let commutes = t.equivalent(&lhs, &rhs) && precise(&lhs) && precise(&rhs);
    Ok(BaseChangeReport { lhs, rhs, commutes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::Padic;
    use crate::mahler::evaluate;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn z() -> CoefficientModel {
        CoefficientModel::trivial_int()
    }

    fn mahler(cs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64s(z(), Basis::Mahler, cs)
    }

    fn mono(cs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_i64s(z(), Basis::Monomial, cs)
    }

    #[test]
    fn dual_basis_pairing() {
        for n in 0..6 {
            for k in 0..6 {
                let v = pairing(
                    &TruncatedSeries::monomial(z(), n),
                    &TruncatedSeries::basis_vector(z(), Basis::Mahler, k),
                )
                .unwrap();
                assert_eq!(v, z().from_i64((n == k) as i64));
            }
        }
        let f = mahler(&[4, -2, 7, 1]);
        assert_eq!(pairing(&mono(&[1, 2, 1]), &f).unwrap(), evaluate(&f, 2).unwrap());
        assert_eq!(pairing(&mono(&[1, 1]), &mahler(&[0, 1])).unwrap(), z().one());
        assert!(pairing(&mahler(&[1]), &f).is_err());
    }

    #[test]
    fn pairing_of_two_infinite_series() {
        let arch = CoefficientModel::arch_rational();
        let half = q(1, 2);
        let geo = |len: usize| {
            let coeffs = (0..len)
                .map(|n| arch.from_rational(&num_traits::pow(half.clone(), n)).unwrap())
                .collect();
            let td = TailDescriptor::new(0, BigRational::one(), half.clone())
                .unwrap()
                .sharp();
            TruncatedSeries::new(arch, Basis::Monomial, coeffs, Tail::Geometric(td)).unwrap()
        };
        let xi = geo(4);
        let f = {
            let s = geo(6);
            TruncatedSeries::raw(arch, Basis::Mahler, s.coeffs().to_vec(), s.tail().clone())
        };
        // Σ 4^-n = 4/3; four terms give 85/64 and the rest is at most 1/192
        let p = pairing_with_bound(&xi, &f).unwrap();
        assert_eq!(p.value, arch.from_rational(&q(85, 64)).unwrap());
        assert_eq!(p.error_bound, NormValue::ratio(1, 192));

        let ones = TruncatedSeries::new(
            arch,
            Basis::Mahler,
            vec![arch.one()],
            Tail::Geometric(TailDescriptor::new(0, BigRational::one(), q(2, 1)).unwrap()),
        )
        .unwrap();
        assert!(matches!(pairing(&xi, &ones), Err(Error::PairingUndefined(_))));
    }

    #[test]
    fn amice_examples() {
        let f = mahler(&[9, 3, -1]);
        let delta0 = amice_transform(&z(), vec![z().one(), z().zero(), z().zero()]).unwrap();
        assert_eq!(delta0.integrate(&f).unwrap(), evaluate(&f, 0).unwrap());
        let d3 = dirac(&z(), 3, 6).unwrap();
        assert_eq!(d3.integrate(&f).unwrap(), evaluate(&f, 3).unwrap());
        assert!(amice_transform(&z(), vec![]).unwrap().series().is_zero());
    }

    #[test]
    fn stirling_recurrence_and_powers() {
        let s = StirlingCache::new(10);
        assert_eq!(s.get(4, 2), BigInt::from(7));
        assert_eq!(s.get(0, 0), BigInt::one());
        assert_eq!(s.get(5, 0), BigInt::from(0));
        // x^n at x = 0..=n, both sides
        for n in 0..=10 {
            let coeffs = s.power_in_mahler_basis(n);
            let f =
                TruncatedSeries::polynomial(z(), Basis::Mahler, coeffs.iter().map(|c| z().from_integer(c)).collect())
                    .unwrap();
            for x in 0..=n {
                assert_eq!(
                    evaluate(&f, x).unwrap(),
                    z().from_integer(&BigInt::from(x).pow(n as u32))
                );
            }
        }
    }

    #[test]
    fn power_moment_examples() {
        for a in -4i64..=4 {
            let d = dirac(&z(), a, 8).unwrap();
            for n in 0..8 {
                assert_eq!(
                    power_moment(&d, n).unwrap(),
                    z().from_integer(&BigInt::from(a).pow(n as u32))
                );
            }
        }
        let arch = CoefficientModel::arch_rational();
        let kl = kubota_leopoldt(&arch, 3).unwrap();
        assert_eq!(power_moment(&kl, 0).unwrap(), arch.one());
        assert_eq!(power_moment(&kl, 2).unwrap(), arch.from_rational(&q(1, 6)).unwrap());
        assert!(matches!(power_moment(&kl, 3), Err(Error::InsufficientOrder { .. })));
    }

    #[test]
    fn kubota_leopoldt_moments() {
        let qna = CoefficientModel::sup_rational();
        let kl = kubota_leopoldt(&qna, 30).unwrap();
        assert_eq!(kl.moment(0), Some(qna.one()));
        assert_eq!(kl.moment(1), Some(qna.from_rational(&q(-1, 2)).unwrap()));
        for n in 0..30 {
            let norm = qna.norm(&kl.moment(n).unwrap()).unwrap();
            assert!(norm <= NormValue::from_integer(n as u64 + 1));
        }
        assert!(kubota_leopoldt(&z(), 3).is_err());
        assert!(kubota_leopoldt(&qna, 0).is_err());
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(1).unwrap(), q(-1, 2));
        assert_eq!(bernoulli(2).unwrap(), q(1, 6));
        assert_eq!(bernoulli(3).unwrap(), q(0, 1));
        assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
        assert!(bernoulli(0).is_err());
    }

    #[test]
    fn base_change_examples() {
        let m = RingMorphism::int_to_zp(5, 4).unwrap();
        let f = mahler(&[25, 7, 0, 5]);
        let g = base_change_series(&f, &m).unwrap();
        assert_eq!(g.basis(), Basis::Mahler);
        assert_eq!(
            g.coeffs()[0],
            RingElement::Padic(Padic::Unit {
                valuation: 2,
                unit: BigInt::one(),
                precision: 4
            })
        );

        let qna = CoefficientModel::sup_rational();
        let to_q3 = RingMorphism::qna_to_qp(3).unwrap();
        let log: Vec<_> = (1..10i64)
            .map(|n| qna.from_rational(&q(if n % 2 == 1 { 1 } else { -1 }, n)).unwrap())
            .collect();
        let series = TruncatedSeries::polynomial(qna, Basis::Monomial, log).unwrap();
        let image = base_change_series(&series, &to_q3).unwrap();
        for (i, c) in image.coeffs().iter().enumerate() {
            let n = i as u64 + 1;
            let want = if n.is_multiple_of(9) {
                9
            } else if n.is_multiple_of(3) {
                3
            } else {
                1
            };
            assert_eq!(to_q3.target().norm(c).unwrap(), NormValue::from_integer(want));
        }

        let id = RingMorphism::identity(z());
        assert_eq!(base_change_series(&f, &id).unwrap(), f);
    }

    #[test]
    fn base_change_commutes_examples() {
        let m = RingMorphism::int_to_zp(5, 4).unwrap();
        let xi = mono(&[1, 3, 3, 1]);
        let f = mahler(&[0, 0, 1]);
        let r = base_change_commutes(&xi, &f, &m).unwrap();
        assert!(r.commutes);
        assert!(m.target().equivalent(&r.lhs, &m.target().from_i64(3)));
        let r = base_change_commutes(&TruncatedSeries::zero(z(), Basis::Monomial), &f, &m).unwrap();
        assert!(r.commutes && m.target().is_zero(&r.lhs));
    }
}
