mod common;

use amice_kit::amice::{
    amice_transform, base_change_commutes, base_change_series, bernoulli, dirac, kubota_leopoldt, pairing,
    pairing_with_bound, power_moment, StirlingCache,
};
use amice_kit::coefficients::{CoefficientModel, NormValue, RingElement, RingMorphism};
use amice_kit::hopf::mahler_antipode;
use amice_kit::series::{Basis, TruncatedSeries};
use amice_kit::weights::{Tail, TailDescriptor};
use amice_kit::Error;
use common::{bernoulli_generating_function, bernoulli_recurrence, mahler_value, q, series};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

fn z() -> CoefficientModel {
    CoefficientModel::trivial_int()
}

fn int_of(m: &CoefficientModel, x: &RingElement) -> BigInt {
    m.to_rational(x).expect("rational").to_integer()
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, 0..=max_len)
}

proptest! {
    #[test]
    fn dirac_pairs_to_point_values(a in -10i64..=10, c in coeffs(9)) {
        let f = series(z(), Basis::Mahler, &c);
        let delta = dirac(&z(), a, 12).unwrap();
        let v = pairing(delta.series(), &f).unwrap();
        prop_assert_eq!(int_of(&z(), &v), mahler_value(&c, a));
        if a < 0 {
            let r = mahler_antipode(&f, &[(-a) as u64]).unwrap();
            prop_assert_eq!(&r[0], &v);
        }
    }

    #[test]
    fn power_moments_of_dirac(a in -12i64..=12, n in 0usize..10) {
        for m in [z(), CoefficientModel::arch_rational()] {
            let delta = dirac(&m, a, n + 1).unwrap();
            let v = power_moment(&delta, n).unwrap();
            prop_assert_eq!(int_of(&m, &v), BigInt::from(a).pow(n as u32));
        }
    }

    #[test]
    fn basis_vectors_are_dual(n in 0usize..=32, k in 0usize..=32) {
        let xi = TruncatedSeries::monomial(z(), n);
        let f = TruncatedSeries::basis_vector(z(), Basis::Mahler, k);
        let expected = if n == k { 1 } else { 0 };
        prop_assert_eq!(int_of(&z(), &pairing(&xi, &f).unwrap()), BigInt::from(expected));
    }

    #[test]
    fn base_change_to_z2(a in coeffs(9), b in coeffs(9)) {
        check_base_change(2, &a, &b)?;
    }

    #[test]
    fn base_change_to_z3(a in coeffs(9), b in coeffs(9)) {
        check_base_change(3, &a, &b)?;
    }

    #[test]
    fn base_change_to_z5(a in coeffs(9), b in coeffs(9)) {
        check_base_change(5, &a, &b)?;
    }

    #[test]
    fn integration_is_linear(a in coeffs(8), b in coeffs(8), c in coeffs(8)) {
        let m = z();
        let mu = amice_transform(&m, a.iter().map(|&x| m.from_i64(x)).collect()).unwrap();
        let f = series(m, Basis::Mahler, &b);
        let g = series(m, Basis::Mahler, &c);
        let lhs = mu.integrate(&f.add(&g).unwrap()).unwrap();
        let rhs = m.add(&mu.integrate(&f).unwrap(), &mu.integrate(&g).unwrap());
        prop_assert_eq!(lhs, rhs);
    }
}

fn check_base_change(p: u64, a: &[i64], b: &[i64]) -> Result<(), TestCaseError> {
    let m = RingMorphism::int_to_zp(p, 6).unwrap();
    let xi = series(z(), Basis::Monomial, a);
    let f = series(z(), Basis::Mahler, b);
    let r = base_change_commutes(&xi, &f, &m).unwrap();
    prop_assert!(r.commutes, "{r:?}");
    Ok(())
}

#[test]
fn bernoulli_matches_both_oracles() {
    let rec = bernoulli_recurrence(24);
    let gf = bernoulli_generating_function(24);
    assert_eq!(rec, gf);
    for (n, expected) in rec.iter().enumerate().skip(1) {
        assert_eq!(&bernoulli(n).unwrap(), expected, "B_{n}");
    }
    assert_eq!(bernoulli(1).unwrap(), q(-1, 2));
    assert_eq!(bernoulli(2).unwrap(), q(1, 6));
    assert_eq!(bernoulli(4).unwrap(), q(-1, 30));
    assert_eq!(bernoulli(12).unwrap(), q(-691, 2730));
    assert!(matches!(bernoulli(0), Err(Error::Domain(_))));
}

#[test]
fn odd_bernoulli_numbers_vanish() {
    for n in (3..=31).step_by(2) {
        assert_eq!(bernoulli(n).unwrap(), q(0, 1));
    }
}

#[test]
fn kubota_leopoldt_moments_agree_across_models() {
    let rec = bernoulli_recurrence(12);
    for m in [
        CoefficientModel::sup_rational(),
        CoefficientModel::padic_rational(5).unwrap(),
    ] {
        let mu = kubota_leopoldt(&m, 13).unwrap();
        for (n, expected) in rec.iter().enumerate().skip(1) {
            let v = power_moment(&mu, n).unwrap();
            assert_eq!(&m.to_rational(&v).unwrap(), expected, "{m} n={n}");
        }
    }
    assert!(matches!(kubota_leopoldt(&z(), 4), Err(Error::UnsupportedModel { .. })));
}

#[test]
fn stirling_rows_give_powers() {
    // x^n = Σ S(n,k) k! binom(x,k)
    let cache = StirlingCache::new(12);
    for n in 0..=12 {
        let row: Vec<i64> = cache
            .power_in_mahler_basis(n)
            .iter()
            .map(|c| i64::try_from(c).unwrap())
            .collect();
        for x in -5i64..=10 {
            assert_eq!(mahler_value(&row, x), BigInt::from(x).pow(n as u32), "n={n} x={x}");
        }
    }
}

#[test]
fn infinite_pairing_reports_an_error_bound() {
    let m = CoefficientModel::arch_rational();
    let half = TailDescriptor::new(4, BigRational::one(), q(1, 2)).unwrap();
    let powers = (0..4).map(|k| m.from_rational(&q(1, 1 << k)).unwrap()).collect();
    let xi = TruncatedSeries::new(m, Basis::Monomial, powers, Tail::Geometric(half)).unwrap();
    let ones = TailDescriptor::new(4, BigRational::one(), BigRational::one()).unwrap();
    let f = TruncatedSeries::new(m, Basis::Mahler, vec![m.one(); 4], Tail::Geometric(ones)).unwrap();
    let pv = pairing_with_bound(&xi, &f).unwrap();
    // Σ_{n<4} 2^{-n} = 15/8 with remainder at most 2^{-4}/(1 - 1/2) = 1/8
    assert_eq!(m.to_rational(&pv.value).unwrap(), q(15, 8));
    assert_eq!(pv.error_bound, NormValue::finite(q(1, 8)));
}

#[test]
fn base_change_preserves_integer_structure() {
    let m = RingMorphism::int_to_zp(3, 6).unwrap();
    let f = series(z(), Basis::Mahler, &[1, 3, 9, 27]);
    let g = base_change_series(&f, &m).unwrap();
    assert_eq!(g.model(), &m.target());
    for (k, c) in g.coeffs().iter().enumerate() {
        let expected = m.target().from_integer(&BigInt::from(3).pow(k as u32));
        assert!(m.target().equivalent(c, &expected));
    }
}
