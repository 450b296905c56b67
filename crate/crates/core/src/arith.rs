//! Exact integer substrate: canonical factorizations, prime tables and the
//! classical multiplicative functions.
//!
//! Everything here works on `u64`. The only place arbitrary precision is
//! needed is the value of a primorial power, which lives in
//! [`BigFactorization`]; the prime/exponent list itself always fits.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::{Error, Result};

/// Trial division covers every prime below this bound before falling back to
/// Miller-Rabin and Pollard rho.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Largest table [`primes_up_to`] accepts. The smallest-prime-factor array
/// costs four bytes per entry, so this is about 1.2 GB.
pub const PRIME_TABLE_CAP: u64 = 300_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimePower {
    pub prime: u64,
    pub exponent: u32,
}

impl PrimePower {
    pub fn new(prime: u64, exponent: u32) -> Self {
        Self { prime, exponent }
    }
}

/// Anything carrying a canonical form `prod p_i^{a_i}` with strictly
/// increasing primes.
pub trait CanonicalForm {
    fn parts(&self) -> &[PrimePower];

    fn is_one(&self) -> bool {
        self.parts().is_empty()
    }

    fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.parts().iter().map(|pp| pp.exponent)
    }
}

/// Canonical factorization of a 64-bit integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    value: u64,
    parts: Vec<PrimePower>,
}

impl Factorization {
    pub fn one() -> Self {
        Self { value: 1, parts: Vec::new() }
    }

    /// Builds a factorization from prime/exponent pairs, validating order
    /// and primality and computing the value. Zero exponents are dropped.
    pub fn from_parts(parts: impl IntoIterator<Item = (u64, u32)>) -> Result<Self> {
        let mut out = Vec::new();
        let mut value: u64 = 1;
        for (p, a) in parts {
            if a == 0 {
                continue;
            }
            if !is_prime_u64(p) {
                return Err(Error::Domain(format!("{p} is not prime")));
            }
            if out.last().is_some_and(|last: &PrimePower| last.prime >= p) {
                return Err(Error::Domain("primes must be strictly increasing".into()));
            }
            let pa = checked_pow(p, a).ok_or(Error::Overflow("Factorization::from_parts"))?;
            value = value.checked_mul(pa).ok_or(Error::Overflow("Factorization::from_parts"))?;
            out.push(PrimePower::new(p, a));
        }
        Ok(Self { value, parts: out })
    }

    /// Trusted constructor for callers that already hold a canonical form.
    pub(crate) fn from_sorted_parts(value: u64, parts: Vec<PrimePower>) -> Self {
        debug_assert_eq!(parts.iter().map(|pp| pp.prime.pow(pp.exponent)).product::<u64>(), value);
        Self { value, parts }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|pp| pp.prime)
    }

    pub fn same_primes(&self, other: &Factorization) -> bool {
        self.parts.len() == other.parts.len() && self.primes().eq(other.primes())
    }

    pub fn kappa(&self) -> u64 {
        self.primes().product()
    }

    pub fn mobius(&self) -> i8 {
        if self.parts.iter().any(|pp| pp.exponent > 1) {
            0
        } else if self.parts.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `(omega, Omega)`: distinct prime count and prime count with multiplicity.
    pub fn omega_counts(&self) -> (u32, u32) {
        (self.parts.len() as u32, self.parts.iter().map(|pp| pp.exponent).sum())
    }

    pub fn euler_phi(&self) -> u64 {
        self.parts.iter().map(|pp| (pp.prime - 1) * pp.prime.pow(pp.exponent - 1)).product()
    }

    /// All positive divisors in increasing order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for pp in &self.parts {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..pp.exponent {
                pk *= pp.prime;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

impl CanonicalForm for Factorization {
    fn parts(&self) -> &[PrimePower] {
        &self.parts
    }
}

/// Canonical form whose value may exceed 64 bits. Used for the primorial
/// powers `(p_1 ... p_k)^e` that realize maximal orders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BigFactorization {
    value: BigUint,
    parts: Vec<PrimePower>,
}

impl BigFactorization {
    pub fn one() -> Self {
        Self { value: BigUint::one(), parts: Vec::new() }
    }

    /// Appends `p^a` with `p` larger than every prime already present.
    pub fn push(&mut self, p: u64, a: u32) -> Result<()> {
        if a == 0 {
            return Ok(());
        }
        if self.parts.last().is_some_and(|last| last.prime >= p) {
            return Err(Error::Domain("primes must be strictly increasing".into()));
        }
        if !is_prime_u64(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        self.value *= BigUint::from(p).pow(a);
        self.parts.push(PrimePower::new(p, a));
        Ok(())
    }

    /// `(p_1 p_2 ... p_k)^exponent`.
    pub fn primorial_power(k: usize, exponent: u32) -> Self {
        let mut out = Self::one();
        for p in first_primes(k) {
            out.push(p, exponent).expect("first_primes yields increasing primes");
        }
        out
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn parts(&self) -> &[PrimePower] {
        &self.parts
    }

    /// `ln` of the value, summed from the parts.
    pub fn ln_value(&self) -> f64 {
        self.parts.iter().map(|pp| pp.exponent as f64 * (pp.prime as f64).ln()).sum()
    }
}

impl CanonicalForm for BigFactorization {
    fn parts(&self) -> &[PrimePower] {
        &self.parts
    }
}

fn checked_pow(p: u64, a: u32) -> Option<u64> {
    p.checked_pow(a)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| eratosthenes(TRIAL_DIVISION_BOUND))
}

fn eratosthenes(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// First `k` primes, extending the trial-division table if needed.
pub fn first_primes(k: usize) -> Vec<u64> {
    let table = small_primes();
    if k <= table.len() {
        return table[..k].iter().map(|&p| p as u64).collect();
    }
    let mut out: Vec<u64> = table.iter().map(|&p| p as u64).collect();
    let mut candidate = *out.last().unwrap() + 2;
    while out.len() < k {
        if is_prime_u64(candidate) {
            out.push(candidate);
        }
        candidate += 2;
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for all 64-bit inputs (first twelve prime
/// bases suffice below 3.3 * 10^24).
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        let mut q = 1u64;
        let mut ys = 2u64;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

/// Canonical factorization of `n`.
pub fn factor(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let mut parts = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m.is_multiple_of(p) {
            let mut a = 0;
            while m.is_multiple_of(p) {
                m /= p;
                a += 1;
            }
            parts.push(PrimePower::new(p, a));
        }
    }
    if m > 1 {
        let bound = TRIAL_DIVISION_BOUND as u64;
        if m < bound * bound {
            parts.push(PrimePower::new(m, 1));
        } else {
            let mut large = Vec::new();
            split_large(m, &mut large);
            large.sort_unstable();
            for p in large {
                match parts.last_mut() {
                    Some(last) if last.prime == p => last.exponent += 1,
                    _ => parts.push(PrimePower::new(p, 1)),
                }
            }
        }
    }
    Ok(Factorization::from_sorted_parts(n, parts))
}

pub fn euler_phi(a: u64) -> Result<u64> {
    Ok(factor(a)?.euler_phi())
}

pub fn mobius(n: u64) -> Result<i8> {
    Ok(factor(n)?.mobius())
}

pub fn kappa(n: u64) -> Result<u64> {
    Ok(factor(n)?.kappa())
}

/// True iff no prime `q` has `q^k | a`.
pub fn is_k_free(a: u64, k: u32) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(factor(a)?.parts.iter().all(|pp| pp.exponent < k))
}

pub fn omega_counts(n: u64) -> Result<(u32, u32)> {
    Ok(factor(n)?.omega_counts())
}

/// Smallest-prime-factor table with the list of primes up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
    spf: Vec<u32>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Number of primes `<= x` for `x <= limit`.
    pub fn prime_count(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| (p as u64) <= x)
    }

    pub fn spf(&self, n: u64) -> u32 {
        self.spf[n as usize]
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] as u64 == n
    }

    /// Factorization by repeated smallest-prime-factor lookups.
    pub fn factor(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(Error::Zero);
        }
        if n > self.limit {
            return Err(Error::CapExceeded { what: "PrimeTable::factor", n, cap: self.limit });
        }
        let mut parts: Vec<PrimePower> = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = self.spf[m as usize] as u64;
            let mut a = 0;
            while m.is_multiple_of(p) {
                m /= p;
                a += 1;
            }
            parts.push(PrimePower::new(p, a));
        }
        Ok(Factorization::from_sorted_parts(n, parts))
    }
}

/// Linear sieve producing the smallest-prime-factor table up to `limit`.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("prime table limit must be >= 2, got {limit}")));
    }
    if limit > PRIME_TABLE_CAP {
        return Err(Error::CapExceeded { what: "primes_up_to", n: limit, cap: PRIME_TABLE_CAP });
    }
    let n = limit as usize;
    let mut spf = vec![0u32; n + 1];
    let mut primes: Vec<u32> = Vec::with_capacity(estimate_prime_count(limit));
    spf[1] = 1;
    for i in 2..=n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let m = i * p as usize;
            if p > si || m > n {
                break;
            }
            spf[m] = p;
        }
    }
    Ok(PrimeTable { limit, primes, spf })
}

fn estimate_prime_count(x: u64) -> usize {
    let xf = x as f64;
    (1.3 * xf / xf.ln().max(1.0)) as usize + 16
}
