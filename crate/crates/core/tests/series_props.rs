mod common;

use amice_kit::coefficients::{CoefficientModel, NormValue};
use amice_kit::hopf::antipode;
use amice_kit::series::{geometric_inverse, Basis, TruncatedSeries};
use common::{q, series};
use proptest::prelude::*;

fn models() -> impl Strategy<Value = CoefficientModel> {
    prop_oneof![
        Just(CoefficientModel::trivial_int()),
        Just(CoefficientModel::arch_rational()),
        Just(CoefficientModel::sup_rational()),
    ]
}

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-30i64..=30, 0..=max_len)
}

fn radius() -> impl Strategy<Value = num_rational::BigRational> {
    prop_oneof![
        Just(q(1, 3)),
        Just(q(1, 2)),
        Just(q(1, 1)),
        Just(q(2, 1)),
        Just(q(5, 2))
    ]
}

proptest! {
    #[test]
    fn multiplication_is_commutative(m in models(), a in coeffs(8), b in coeffs(8)) {
        let (f, g) = (series(m, Basis::Monomial, &a), series(m, Basis::Monomial, &b));
        prop_assert!(f.multiply(&g).unwrap().agrees_with(&g.multiply(&f).unwrap()));
    }

    #[test]
    fn multiplication_is_associative(m in models(), a in coeffs(6), b in coeffs(6), c in coeffs(6)) {
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let h = series(m, Basis::Monomial, &c);
        let left = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let right = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn multiplication_distributes(m in models(), a in coeffs(6), b in coeffs(6), c in coeffs(6)) {
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let h = series(m, Basis::Monomial, &c);
        let left = f.multiply(&g.add(&h).unwrap()).unwrap();
        let right = f.multiply(&g).unwrap().add(&f.multiply(&h).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn ps_norm_is_submultiplicative(m in models(), a in coeffs(8), b in coeffs(8), rho in radius()) {
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let lhs = f.multiply(&g).unwrap().ps_norm(&rho).unwrap();
        let rhs = f.ps_norm(&rho).unwrap() * g.ps_norm(&rho).unwrap();
        prop_assert!(lhs <= rhs, "{lhs:?} > {rhs:?}");
    }

    #[test]
    fn gauss_norm_is_multiplicative_for_trivial_norm(a in coeffs(8), b in coeffs(8), rho in radius()) {
        let m = CoefficientModel::trivial_int();
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let lhs = f.multiply(&g).unwrap().ps_norm(&rho).unwrap();
        prop_assert_eq!(lhs, f.ps_norm(&rho).unwrap() * g.ps_norm(&rho).unwrap());
    }

    #[test]
    fn ps_norm_is_monotone_in_radius(m in models(), a in coeffs(8)) {
        let f = series(m, Basis::Monomial, &a);
        let rs = [q(1, 4), q(1, 2), q(1, 1), q(3, 2), q(4, 1)];
        for w in rs.windows(2) {
            prop_assert!(f.ps_norm(&w[0]).unwrap() <= f.ps_norm(&w[1]).unwrap());
        }
    }

    #[test]
    fn composition_is_associative(m in models(), a in coeffs(5), b in coeffs(4), c in coeffs(4)) {
        let mut b = b;
        let mut c = c;
        b.insert(0, 0);
        c.insert(0, 0);
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let h = series(m, Basis::Monomial, &c);
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn antipode_is_an_involution(m in models(), a in coeffs(10), n in 1usize..14) {
        let f = series(m, Basis::Monomial, &a);
        let twice = antipode(&antipode(&f, n).unwrap(), n).unwrap();
        prop_assert_eq!(twice.order(), n);
        prop_assert!(twice.agrees_with(&f.truncate(n)));
    }

    #[test]
    fn antipode_is_a_ring_map(m in models(), a in coeffs(6), b in coeffs(6), n in 1usize..12) {
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b);
        let lhs = antipode(&f.multiply(&g).unwrap(), n).unwrap();
        let rhs = antipode(&f, n).unwrap().multiply(&antipode(&g, n).unwrap()).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn truncated_results_never_claim_more_than_inputs(m in models(), a in coeffs(8), b in coeffs(8), n in 1usize..8) {
        let f = series(m, Basis::Monomial, &a);
        let g = series(m, Basis::Monomial, &b).truncate(n);
        let p = f.multiply(&g).unwrap();
        if !g.is_exact() {
            prop_assert!(!p.is_exact());
            prop_assert_eq!(p.order(), g.order());
        }
    }
}

#[test]
fn geometric_inverse_times_one_plus_s_is_one() {
    for model in [CoefficientModel::trivial_int(), CoefficientModel::arch_rational()] {
        for n in 1..20 {
            // (1+s)(1 + α(s)) = 1 modulo s^n
            let alpha = geometric_inverse(model, n).unwrap();
            let inv = alpha.add(&TruncatedSeries::one(model)).unwrap();
            let prod = series(model, Basis::Monomial, &[1, 1]).multiply(&inv).unwrap();
            assert!(prod.agrees_with(&TruncatedSeries::one(model)), "order {n}");
        }
    }
}

#[test]
fn norm_of_zero_series_is_zero() {
    let f = TruncatedSeries::zero(CoefficientModel::arch_rational(), Basis::Monomial);
    assert_eq!(f.ps_norm(&q(7, 1)).unwrap(), NormValue::zero());
}
