//! Integer combinatorics shared by the series and Mahler code.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `binom(n, k)` for natural `n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Generalized binomial `a (a-1) ... (a-k+1) / k!` for an integer top.
pub fn binomial_int(a: &BigInt, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        // the running product of i+1 consecutive integers is divisible by (i+1)!
        acc = acc * (a - BigInt::from(i)) / BigInt::from(i + 1);
    }
    acc
}

/// Generalized binomial with a rational top.
pub fn binomial_rational(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc = acc * (a - BigRational::from_integer(BigInt::from(i))) / BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

/// `n! / (i! j! k!)` for `i + j + k = n`.
pub fn trinomial(i: u64, j: u64, k: u64) -> BigInt {
    binomial(i + j + k, i) * binomial(j + k, j)
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent of `p` in a nonzero integer; `None` for zero.
pub fn valuation(n: &BigInt, p: &BigInt) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// Trial-division factorization. Intended for desk-scale integers only.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    let mut n = n.clone();
    if n.is_zero() {
        return out;
    }
    let mut d = BigUint::from(2u32);
    while &d * &d <= n {
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&d);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

/// Pascal triangle rows `0..size`, row `n` holding `binom(n, 0..=n)`.
pub fn pascal(size: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(size);
    for n in 0..size {
        let mut row = vec![BigInt::one(); n + 1];
        for k in 1..n {
            row[k] = &rows[n - 1][k - 1] + &rows[n - 1][k];
        }
        rows.push(row);
    }
    rows
}
