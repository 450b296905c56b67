//! Tables along primorial powers `n_k = (p_1 ... p_k)^e`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::mertens::mertens_constant;
use crate::arith::{first_primes, BigFactorization};
use crate::expfun::{p_tilde_big, phi_e_big};
use crate::{Error, Result};

pub const MAXIMAL_K_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MaximalKind {
    /// `P~(n) / (n ln ln n)` along `n_k = (p_1 ... p_k)^2`.
    Theorem4,
    /// `Omega(phi^(e)(n))` along `n_k = (p_1 ... p_k)^5`.
    Theorem7,
    /// `ln phi^(e)(n) ln ln n / ln n` along `n_k = (p_1 ... p_k)^5`.
    Sandor,
}

impl FromStr for MaximalKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem4" => Ok(Self::Theorem4),
            "theorem7" => Ok(Self::Theorem7),
            "sandor" => Ok(Self::Sandor),
            _ => Err(Error::Domain(format!("unknown report {s:?}"))),
        }
    }
}

impl fmt::Display for MaximalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Theorem4 => "theorem4",
            Self::Theorem7 => "theorem7",
            Self::Sandor => "sandor",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalRow {
    pub k: usize,
    pub ln_n: f64,
    pub value: f64,
    pub target: f64,
    pub ratio: f64,
    /// Result of the exact identity at this `k`, where one applies.
    pub exact: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaximalReport {
    pub kind: MaximalKind,
    pub rows: Vec<MaximalRow>,
    /// `None` for tabulation-only reports.
    pub exact_holds: Option<bool>,
    pub first_failure: Option<usize>,
}

/// Natural log of a big integer.
pub fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    (v >> shift).to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `Omega(v)` by trial division with primes up to `bound`.
pub fn big_omega_trial(v: &BigUint, bound: u64) -> Result<u64> {
    if v.is_zero() {
        return Err(Error::Zero);
    }
    let mut rest = v.clone();
    let twos = rest.trailing_zeros().unwrap_or(0);
    rest >>= twos;
    let mut count = twos;
    for p in first_primes(bound as usize).into_iter().skip(1).take_while(|&p| p <= bound) {
        let big_p = BigUint::from(p);
        loop {
            let (q, r) = (&rest / &big_p, &rest % &big_p);
            if !r.is_zero() {
                break;
            }
            rest = q;
            count += 1;
        }
        if rest.is_one() {
            break;
        }
    }
    if !rest.is_one() {
        return Err(Error::Domain(format!("cofactor with no prime factor up to {bound}")));
    }
    Ok(count)
}

pub fn maximal_order_report(kind: MaximalKind, k_max: usize) -> Result<MaximalReport> {
    if k_max == 0 || k_max > MAXIMAL_K_CAP {
        return Err(Error::CapExceeded { what: "maximal_order_report k", n: k_max as u64, cap: MAXIMAL_K_CAP as u64 });
    }
    let exponent = match kind {
        MaximalKind::Theorem4 => 2,
        MaximalKind::Theorem7 | MaximalKind::Sandor => 5,
    };
    let primes = first_primes(k_max);
    let mertens = mertens_constant().to_f64();
    let mut n = BigFactorization::one();
    // prod p and prod (p + 1) over the first k primes, for theorem4
    let mut prod_p = BigUint::one();
    let mut prod_p1 = BigUint::one();
    let mut rows = Vec::with_capacity(k_max);
    let mut first_failure = None;
    for (i, &p) in primes.iter().enumerate() {
        let k = i + 1;
        n.push(p, exponent)?;
        let ln_n = n.ln_value();
        let lnln = ln_n.ln();
        let row = match kind {
            MaximalKind::Theorem4 => {
                prod_p *= p;
                prod_p1 *= p + 1;
                let pt = p_tilde_big(&n);
                // P~(n)/n = prod (1 + 1/p), cross-multiplied
                let exact = &pt * &prod_p == n.value() * &prod_p1;
                let value = (ln_big(&pt) - ln_n).exp() / lnln;
                MaximalRow { k, ln_n, value, target: mertens, ratio: value / mertens, exact: Some(exact) }
            }
            MaximalKind::Theorem7 => {
                let omega = big_omega_trial(&phi_e_big(&n), 1000)?;
                let target = 2.0 * ln_n / (5.0 * lnln);
                let value = omega as f64;
                MaximalRow { k, ln_n, value, target, ratio: value / target, exact: Some(omega == 2 * k as u64) }
            }
            MaximalKind::Sandor => {
                let target = 4f64.ln() / 5.0;
                let value = ln_big(&phi_e_big(&n)) * lnln / ln_n;
                MaximalRow { k, ln_n, value, target, ratio: value / target, exact: None }
            }
        };
        if row.exact == Some(false) && first_failure.is_none() {
            first_failure = Some(k);
        }
        rows.push(row);
    }
    let exact_holds = match kind {
        MaximalKind::Sandor => None,
        _ => Some(first_failure.is_none()),
    };
    Ok(MaximalReport { kind, rows, exact_holds, first_failure })
}
