//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's combinatorics or evaluation code.

#![allow(dead_code)]

use amice_kit::coefficients::{CoefficientModel, RingElement};
use amice_kit::series::{Basis, TruncatedSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `x (x-1) ... (x-k+1) / k!` by direct multiplication.
pub fn falling_binomial(x: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// `Σ a_k binom(x, k)` at any integer `x`.
pub fn mahler_value(coeffs: &[i64], x: i64) -> BigInt {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, &a)| BigInt::from(a) * falling_binomial(&BigInt::from(x), k))
        .sum()
}

/// `B_0, ..., B_n` from `Σ_{k≤n} binom(n+1, k) B_k = 0`.
pub fn bernoulli_recurrence(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let s: BigRational = (0..m)
            .map(|k| BigRational::from_integer(falling_binomial(&BigInt::from(m + 1), k)) * &b[k])
            .sum();
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `B_0, ..., B_n` from the series inversion `t/(e^t - 1)`.
pub fn bernoulli_generating_function(n: usize) -> Vec<BigRational> {
    let mut fact = vec![BigInt::one()];
    for k in 1..=n + 1 {
        let next = &fact[k - 1] * BigInt::from(k);
        fact.push(next);
    }
    // (e^t - 1)/t = Σ t^k/(k+1)!
    let c: Vec<BigRational> = (0..=n)
        .map(|k| BigRational::new(BigInt::one(), fact[k + 1].clone()))
        .collect();
    let mut inv: Vec<BigRational> = vec![BigRational::one()];
    for m in 1..=n {
        let s: BigRational = (1..=m).map(|k| &c[k] * &inv[m - k]).sum();
        inv.push(-s);
    }
    inv.iter()
        .enumerate()
        .map(|(m, b)| b * BigRational::from_integer(fact[m].clone()))
        .collect()
}

pub fn series(model: CoefficientModel, basis: Basis, coeffs: &[i64]) -> TruncatedSeries {
    TruncatedSeries::from_i64s(model, basis, coeffs)
}

pub fn random_coeffs(rng: &mut impl Rng, max_len: usize, range: i64) -> Vec<i64> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(-range..=range)).collect()
}

pub fn as_rational(model: &CoefficientModel, x: &RingElement) -> BigRational {
    model.to_rational(x).expect("rational value")
}

pub fn is_zero_rational(x: &BigRational) -> bool {
    x.is_zero()
}
