//! Capped-relative-precision p-adic numbers.
//!
//! A nonzero element is `p^valuation · unit` where the unit is known modulo
//! `p^precision`; its absolute precision is `valuation + precision`. Zero is a
//! separate marker that is either exact or known modulo `p^abs_precision`.
//! Cancellation in a sum lowers the relative precision of the result and the
//! loss stays recorded in the element.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::combinatorics::valuation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Padic {
    Zero {
        abs_precision: Option<i64>,
    },
    Unit {
        valuation: i64,
        unit: BigInt,
        precision: u32,
    },
}

impl Padic {
    pub fn exact_zero() -> Self {
        Padic::Zero { abs_precision: None }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Padic::Zero { .. })
    }

    /// `None` means exact.
    pub fn abs_precision(&self) -> Option<i64> {
        match self {
            Padic::Zero { abs_precision } => *abs_precision,
            Padic::Unit {
                valuation, precision, ..
            } => Some(valuation + *precision as i64),
        }
    }

    pub fn valuation(&self) -> Option<i64> {
        match self {
            Padic::Zero { .. } => None,
            Padic::Unit { valuation, .. } => Some(*valuation),
        }
    }
}

/// Prime and relative-precision cap used for arithmetic.
#[derive(Debug, Clone)]
pub struct PadicContext {
    p: BigInt,
    cap: u32,
}

fn pow(p: &BigInt, e: i64) -> BigInt {
    debug_assert!(e >= 0);
    num_traits::pow(p.clone(), e as usize)
}

impl PadicContext {
    pub fn new(p: u64, cap: u32) -> Self {
        PadicContext {
            p: BigInt::from(p),
            cap,
        }
    }

    pub fn prime(&self) -> &BigInt {
        &self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Element known to be `p^v · r` modulo `p^abs`.
    fn reduce(&self, v: i64, r: BigInt, abs: Option<i64>) -> Padic {
        let abs = match abs {
            Some(a) => a,
            None => v + self.cap as i64,
        };
        if abs <= v {
            return Padic::Zero {
                abs_precision: Some(abs),
            };
        }
        let m = abs - v;
        let r = r.mod_floor(&pow(&self.p, m));
        let Some(w) = valuation(&r, &self.p) else {
            return Padic::Zero {
                abs_precision: Some(abs),
            };
        };
        let w = w as i64;
        let rel = (m - w).min(self.cap as i64);
        let unit = (r / pow(&self.p, w)).mod_floor(&pow(&self.p, rel));
        Padic::Unit {
            valuation: v + w,
            unit,
            precision: rel as u32,
        }
    }

    pub fn from_integer(&self, n: &BigInt) -> Padic {
        let Some(v) = valuation(n, &self.p) else {
            return Padic::exact_zero();
        };
        self.reduce(v as i64, n / pow(&self.p, v as i64), None)
    }

    pub fn from_rational(&self, q: &BigRational) -> Padic {
        if q.is_zero() {
            return Padic::exact_zero();
        }
        let vn = valuation(q.numer(), &self.p).unwrap() as i64;
        let vd = valuation(q.denom(), &self.p).unwrap() as i64;
        let modulus = pow(&self.p, self.cap as i64);
        let num = q.numer() / pow(&self.p, vn);
        let den = q.denom() / pow(&self.p, vd);
        let inv = mod_inverse(&den, &modulus);
        let unit = (num * inv).mod_floor(&modulus);
        Padic::Unit {
            valuation: vn - vd,
            unit,
            precision: self.cap,
        }
    }

    /// Drops digits beyond absolute precision `abs`.
    pub fn truncate(&self, x: &Padic, abs: i64) -> Padic {
        match x {
            Padic::Zero { abs_precision } => Padic::Zero {
                abs_precision: Some(abs_precision.map_or(abs, |a| a.min(abs))),
            },
            Padic::Unit { valuation, unit, .. } => {
                let cur = x.abs_precision().unwrap();
                self.reduce(*valuation, unit.clone(), Some(cur.min(abs)))
            }
        }
    }

    pub fn neg(&self, x: &Padic) -> Padic {
        match x {
            Padic::Zero { .. } => x.clone(),
            Padic::Unit {
                valuation,
                unit,
                precision,
            } => Padic::Unit {
                valuation: *valuation,
                unit: pow(&self.p, *precision as i64) - unit,
                precision: *precision,
            },
        }
    }

    pub fn add(&self, a: &Padic, b: &Padic) -> Padic {
        match (a, b) {
            (Padic::Zero { abs_precision: None }, x) | (x, Padic::Zero { abs_precision: None }) => x.clone(),
            (
                Padic::Zero {
                    abs_precision: Some(za),
                },
                Padic::Zero {
                    abs_precision: Some(zb),
                },
            ) => Padic::Zero {
                abs_precision: Some((*za).min(*zb)),
            },
            (Padic::Zero { abs_precision: Some(z) }, x @ Padic::Unit { .. })
            | (x @ Padic::Unit { .. }, Padic::Zero { abs_precision: Some(z) }) => self.truncate(x, *z),
            (
                Padic::Unit {
                    valuation: va,
                    unit: ua,
                    ..
                },
                Padic::Unit {
                    valuation: vb,
                    unit: ub,
                    ..
                },
            ) => {
                let abs = a.abs_precision().unwrap().min(b.abs_precision().unwrap());
                let v = (*va).min(*vb);
                let r = ua * pow(&self.p, va - v) + ub * pow(&self.p, vb - v);
                self.reduce(v, r, Some(abs))
            }
        }
    }

    pub fn sub(&self, a: &Padic, b: &Padic) -> Padic {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Padic, b: &Padic) -> Padic {
        match (a, b) {
            (Padic::Zero { abs_precision: None }, _) | (_, Padic::Zero { abs_precision: None }) => Padic::exact_zero(),
            (
                Padic::Zero {
                    abs_precision: Some(za),
                },
                Padic::Zero {
                    abs_precision: Some(zb),
                },
            ) => Padic::Zero {
                abs_precision: Some(za + zb),
            },
            (Padic::Zero { abs_precision: Some(z) }, Padic::Unit { valuation, .. })
            | (Padic::Unit { valuation, .. }, Padic::Zero { abs_precision: Some(z) }) => Padic::Zero {
                abs_precision: Some(z + valuation),
            },
            (
                Padic::Unit {
                    valuation: va,
                    unit: ua,
                    precision: ra,
                },
                Padic::Unit {
                    valuation: vb,
                    unit: ub,
                    precision: rb,
                },
            ) => {
                let rel = (*ra).min(*rb);
                let unit = (ua * ub).mod_floor(&pow(&self.p, rel as i64));
                Padic::Unit {
                    valuation: va + vb,
                    unit,
                    precision: rel,
                }
            }
        }
    }

    /// `None` when the divisor is (possibly inexact) zero.
    pub fn div(&self, a: &Padic, b: &Padic) -> Option<Padic> {
        let Padic::Unit {
            valuation: vb,
            unit: ub,
            precision: rb,
        } = b
        else {
            return None;
        };
        Some(match a {
            Padic::Zero { abs_precision: None } => Padic::exact_zero(),
            Padic::Zero { abs_precision: Some(z) } => Padic::Zero {
                abs_precision: Some(z - vb),
            },
            Padic::Unit {
                valuation: va,
                unit: ua,
                precision: ra,
            } => {
                let rel = (*ra).min(*rb);
                let modulus = pow(&self.p, rel as i64);
                let unit = (ua * mod_inverse(ub, &modulus)).mod_floor(&modulus);
                Padic::Unit {
                    valuation: va - vb,
                    unit,
                    precision: rel,
                }
            }
        })
    }

    /// Agreement modulo the smaller of the two absolute precisions.
    pub fn equivalent(&self, a: &Padic, b: &Padic) -> bool {
        self.sub(a, b).is_zero()
    }

    /// Integer representative `p^v · unit` for nonnegative valuation.
    pub fn representative(&self, x: &Padic) -> Option<BigRational> {
        match x {
            Padic::Zero { .. } => Some(BigRational::zero()),
            Padic::Unit { valuation, unit, .. } => {
                let p = BigRational::from_integer(self.p.clone());
                let scale = if *valuation >= 0 {
                    num_traits::pow(p, *valuation as usize)
                } else {
                    num_traits::pow(p, (-valuation) as usize).recip()
                };
                Some(scale * BigRational::from_integer(unit.clone()))
            }
        }
    }
}

pub(crate) fn mod_inverse(a: &BigInt, modulus: &BigInt) -> BigInt {
    if modulus.is_one() {
        return BigInt::zero();
    }
    let e = a.extended_gcd(modulus);
    debug_assert!(e.gcd.is_one(), "unit expected");
    e.x.mod_floor(modulus)
}

/// Text form used in JSON: `"0"`, `"O(p^a)"` or `"u*p^v+O(p^a)"`.
pub struct PadicDisplay<'a> {
    pub p: u64,
    pub value: &'a Padic,
}

impl fmt::Display for PadicDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match self.value {
            Padic::Zero { abs_precision: None } => write!(f, "0"),
            Padic::Zero { abs_precision: Some(a) } => write!(f, "O({p}^{a})"),
            Padic::Unit {
                valuation,
                unit,
                precision,
            } => {
                write!(f, "{unit}*{p}^{valuation}+O({p}^{})", valuation + *precision as i64)
            }
        }
    }
}

/// Parses the text form of [`PadicDisplay`]. Plain integers and rationals are
/// accepted too and embedded at the context's precision.
pub fn parse_padic(ctx: &PadicContext, s: &str) -> Option<Padic> {
    let s = s.trim();
    let p = ctx.prime().to_string();
    let parse_big_o = |t: &str| -> Option<i64> {
        let inner = t.strip_prefix("O(")?.strip_suffix(')')?;
        let (base, exp) = inner.split_once('^')?;
        if base != p {
            return None;
        }
        exp.parse().ok()
    };
    if let Some(a) = parse_big_o(s) {
        return Some(Padic::Zero { abs_precision: Some(a) });
    }
    if let Some((head, tail)) = s.split_once("+O(") {
        let abs = parse_big_o(&format!("O({tail}"))?;
        let (unit, rest) = head.split_once('*')?;
        let (base, v) = rest.split_once('^')?;
        if base != p {
            return None;
        }
        let unit: BigInt = unit.parse().ok()?;
        let v: i64 = v.parse().ok()?;
        if unit.is_negative() || abs <= v {
            return None;
        }
        if valuation(&unit, ctx.prime()) != Some(0) {
            return None;
        }
        return Some(ctx.reduce(v, unit, Some(abs.min(v + ctx.cap() as i64))));
    }
    let q = crate::io::parse_rational(s)?;
    Some(ctx.from_rational(&q))
}
