//! Functions defined through exponential divisors.
//!
//! Each function has a formula path (multiplicative, evaluated on prime
//! powers) and, in [`oracle`] or alongside it, a definitional path that
//! enumerates the objects being counted. The two paths share nothing but
//! [`factor`](crate::arith::factor).

use std::ops::{Add, Mul};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{factor, BigFactorization, CanonicalForm, Factorization};
use crate::{Error, Result};

/// Largest `n` accepted by [`p_tilde_oracle`].
pub const P_TILDE_ORACLE_CAP: u64 = 100_000;
/// Largest `n` accepted by [`phi_e_sandor`].
pub const SANDOR_CAP: u64 = 1_000_000;

/// Euler's phi for an exponent. Exponents never exceed 64 here, but the
/// function is total on `u64`.
pub fn phi_exponent(a: u64) -> u64 {
    if a == 0 {
        // phi^(e)(p^0) = 1 is the natural value inside prime-power recurrences.
        return 1;
    }
    factor(a).expect("a > 0").euler_phi()
}

/// Positive divisors of `a`, increasing.
pub fn divisors_u64(a: u64) -> Vec<u64> {
    factor(a).map(|f| f.divisors()).unwrap_or_default()
}

fn power<T>(p: u64, e: u64) -> T
where
    T: From<u64> + One + Clone + Mul<Output = T>,
{
    let base = T::from(p);
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc * base.clone();
    }
    acc
}

/// `d |_e n`: same primes as `n` (or both 1), exponents dividing exponents.
pub fn is_exp_divisor(d: &Factorization, n: &Factorization) -> bool {
    d.same_primes(n) && d.parts().iter().zip(n.parts()).all(|(dc, na)| na.exponent % dc.exponent == 0)
}

/// Every exponential divisor of `n`, sorted. For `n = 1` this is `[1]`.
pub fn exponential_divisors(n: &Factorization) -> Vec<u64> {
    let mut out = vec![1u64];
    for pp in n.parts() {
        let choices: Vec<u64> = divisors_u64(pp.exponent as u64).into_iter().map(|c| pp.prime.pow(c as u32)).collect();
        out = out.iter().flat_map(|&d| choices.iter().map(move |&q| d * q)).collect();
    }
    out.sort_unstable();
    out
}

/// `tau^(e)(p^a)`: the number of divisors of `a`.
pub fn tau_e_prime_power(a: u32) -> u64 {
    divisors_u64(a as u64).len() as u64
}

/// `sigma^(e)(p^a) = sum_{c | a} p^c`.
pub fn sigma_e_prime_power<T>(p: u64, a: u32) -> T
where
    T: From<u64> + Zero + One + Clone + Add<Output = T> + Mul<Output = T>,
{
    divisors_u64(a as u64).into_iter().fold(T::zero(), |acc, c| acc + power::<T>(p, c))
}

pub fn tau_e(n: &Factorization) -> u64 {
    n.exponents().map(tau_e_prime_power).product()
}

pub fn sigma_e(n: &Factorization) -> u128 {
    n.parts().iter().map(|pp| sigma_e_prime_power::<u128>(pp.prime, pp.exponent)).product()
}

/// Greatest common exponential divisor `prod p^{gcd(a_i, b_i)}`.
///
/// Exists only when both arguments are 1 or both exceed 1 with the same
/// prime factors.
pub fn gcd_exponential(n: &Factorization, m: &Factorization) -> Result<u64> {
    if !n.same_primes(m) {
        return Err(Error::NoCommonStructure(n.value(), m.value()));
    }
    Ok(n.parts().iter().zip(m.parts()).map(|(x, y)| x.prime.pow(x.exponent.gcd(&y.exponent))).product())
}

/// Exponential coprimality. Total: mismatched prime sets give `false`.
pub fn is_exp_coprime(n: &Factorization, m: &Factorization) -> bool {
    n.same_primes(m) && n.parts().iter().zip(m.parts()).all(|(x, y)| x.exponent.gcd(&y.exponent) == 1)
}

/// `phi^(e)(n) = prod phi(a_i)`.
pub fn phi_e(n: &Factorization) -> u64 {
    n.exponents().map(|a| phi_exponent(a as u64)).product()
}

/// `phi^(e)` for canonical forms with arbitrarily large value.
pub fn phi_e_big(n: &BigFactorization) -> BigUint {
    n.exponents().map(|a| BigUint::from(phi_exponent(a as u64))).product()
}

/// `sigma~(p^a) = sum_{1 <= c <= a, gcd(c, a) = 1} p^c`.
pub fn sigma_tilde_prime_power<T>(p: u64, a: u32) -> T
where
    T: From<u64> + Zero + One + Clone + Add<Output = T> + Mul<Output = T>,
{
    let mut acc = T::zero();
    let mut pc = T::one();
    let base = T::from(p);
    for c in 1..=a {
        pc = pc * base.clone();
        if c.gcd(&a) == 1 {
            acc = acc + pc.clone();
        }
    }
    acc
}

pub fn sigma_tilde(n: &Factorization) -> u128 {
    n.parts().iter().map(|pp| sigma_tilde_prime_power::<u128>(pp.prime, pp.exponent)).product()
}

/// `P~(p^a) = sum_{d | a} p^d phi(a/d)`.
pub fn p_tilde_prime_power<T>(p: u64, a: u32) -> T
where
    T: From<u64> + Zero + One + Clone + Add<Output = T> + Mul<Output = T>,
{
    let a = a as u64;
    divisors_u64(a).into_iter().fold(T::zero(), |acc, d| acc + power::<T>(p, d) * T::from(phi_exponent(a / d)))
}

/// `P~(p^a) = sum_{1 <= c <= a} p^{gcd(c, a)}`, the gcd form.
pub fn p_tilde_prime_power_gcd_form<T>(p: u64, a: u32) -> T
where
    T: From<u64> + Zero + One + Clone + Add<Output = T> + Mul<Output = T>,
{
    (1..=a).fold(T::zero(), |acc, c| acc + power::<T>(p, c.gcd(&a) as u64))
}

pub fn p_tilde(n: &Factorization) -> u128 {
    n.parts().iter().map(|pp| p_tilde_prime_power::<u128>(pp.prime, pp.exponent)).product()
}

pub fn p_tilde_big(n: &BigFactorization) -> BigUint {
    n.parts().iter().map(|pp| p_tilde_prime_power::<BigUint>(pp.prime, pp.exponent)).product()
}

/// `P~(n)` summed over `j` sharing the kernel of `n`, with `(j, n)_(e)`
/// computed from the factorizations.
///
/// `j` runs over the multiples of `kappa(n)` up to `n` that divide `n`, so
/// every exponent of `j` is at most the matching exponent of `n`. Without the
/// divisibility condition the sum is not multiplicative: at `n = 18` it picks
/// up `j = 12` and gives 30, while the prime-power formula gives 24.
pub fn p_tilde_oracle(n: u64) -> Result<u128> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n > P_TILDE_ORACLE_CAP {
        return Err(Error::CapExceeded { what: "p_tilde_oracle", n, cap: P_TILDE_ORACLE_CAP });
    }
    let nf = factor(n)?;
    let kn = nf.kappa();
    let mut total = 0u128;
    for j in (kn..=n).step_by(kn as usize) {
        if !n.is_multiple_of(j) {
            continue;
        }
        let jf = factor(j)?;
        if jf.kappa() == kn {
            total += gcd_exponential(&jf, &nf)? as u128;
        }
    }
    Ok(total)
}

/// Indicator of exponentially k-free integers: every exponent is k-free.
pub fn q_k_e(n: &Factorization, k: u32) -> Result<u8> {
    if k < 2 {
        return Err(Error::InvalidK(k));
    }
    Ok(n.exponents().all(|a| exponent_is_k_free(a, k)) as u8)
}

/// `q_k(a)` on exponents, without going through a full factorization when
/// `a < 2^k` (every such `a` is k-free).
pub fn exponent_is_k_free(a: u32, k: u32) -> bool {
    if k >= 32 || a < (1u32 << k) {
        return true;
    }
    factor(a as u64).expect("a > 0").parts().iter().all(|pp| pp.exponent < k)
}

/// Sandor's `phi_e`: the number of `a` with `1 < a <= n` exponentially
/// coprime to `n`, and `phi_e(1) = 1`.
///
/// The count includes `a = n` (coprime to itself exactly when `n` is
/// squarefree), so that `phi_e(p^a) = phi(a)` holds for `a = 1` as well and
/// `phi_e(n) >= phi^(e)(n)` everywhere. The function is not multiplicative.
pub fn phi_e_sandor(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n > SANDOR_CAP {
        return Err(Error::CapExceeded { what: "phi_e_sandor", n, cap: SANDOR_CAP });
    }
    if n == 1 {
        return Ok(1);
    }
    let nf = factor(n)?;
    let kn = nf.kappa();
    let mut count = 0u64;
    for a in (kn..=n).step_by(kn as usize) {
        if is_exp_coprime(&factor(a)?, &nf) {
            count += 1;
        }
    }
    Ok(count)
}

/// Definitional evaluations that enumerate ordinary divisors and test the
/// exponential relations directly.
pub mod oracle {
    use super::*;

    fn divisors_by_trial(n: u64) -> Vec<u64> {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                small.push(d);
                if d * d != n {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Exponential divisors of `n` found by testing every ordinary divisor.
    pub fn exponential_divisors(n: u64) -> Result<Vec<u64>> {
        let nf = factor(n)?;
        let mut out = Vec::new();
        for d in divisors_by_trial(n) {
            if is_exp_divisor(&factor(d)?, &nf) {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Divisors `d` of `n` with `d` and `n` exponentially coprime.
    pub fn exp_coprime_divisors(n: u64) -> Result<Vec<u64>> {
        let nf = factor(n)?;
        let mut out = Vec::new();
        for d in divisors_by_trial(n) {
            if is_exp_coprime(&factor(d)?, &nf) {
                out.push(d);
            }
        }
        Ok(out)
    }

    pub fn tau_e(n: u64) -> Result<u64> {
        Ok(exponential_divisors(n)?.len() as u64)
    }

    pub fn sigma_e(n: u64) -> Result<u128> {
        Ok(exponential_divisors(n)?.iter().map(|&d| d as u128).sum())
    }

    pub fn phi_e(n: u64) -> Result<u64> {
        Ok(exp_coprime_divisors(n)?.len() as u64)
    }

    pub fn sigma_tilde(n: u64) -> Result<u128> {
        Ok(exp_coprime_divisors(n)?.iter().map(|&d| d as u128).sum())
    }

    pub fn p_tilde(n: u64) -> Result<u128> {
        super::p_tilde_oracle(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_k_free;
    use proptest::prelude::*;

    fn f(n: u64) -> Factorization {
        factor(n).unwrap()
    }

    #[test]
    fn exponential_divisor_examples() {
        assert_eq!(exponential_divisors(&f(1)), vec![1]);
        assert_eq!(exponential_divisors(&f(12)), vec![6, 12]);
        assert_eq!(exponential_divisors(&f(101)), vec![101]);
        assert_eq!(exponential_divisors(&f(16)), vec![2, 4, 16]);
        for n in 2..=2000u64 {
            assert_eq!(exponential_divisors(&f(n))[0], f(n).kappa());
        }
    }

    #[test]
    fn tau_sigma_examples() {
        assert_eq!((tau_e(&f(1)), sigma_e(&f(1))), (1, 1));
        assert_eq!((tau_e(&f(12)), sigma_e(&f(12))), (2, 18));
        assert_eq!(tau_e(&f(3u64.pow(4))), 3);
    }

    #[test]
    fn gcd_exponential_examples() {
        assert_eq!(gcd_exponential(&f(1), &f(1)), Ok(1));
        assert_eq!(gcd_exponential(&f(1), &f(5)), Err(Error::NoCommonStructure(1, 5)));
        assert_eq!(gcd_exponential(&f(5), &f(1)), Err(Error::NoCommonStructure(5, 1)));
        assert_eq!(gcd_exponential(&f(16 * 9), &f(4 * 27)), Ok(12));
        assert!(gcd_exponential(&f(12), &f(10)).is_err());
    }

    #[test]
    fn exp_coprime_examples() {
        assert!(is_exp_coprime(&f(1), &f(1)));
        assert!(!is_exp_coprime(&f(1), &f(7)));
        assert!(is_exp_coprime(&f(8 * 9), &f(4 * 27)));
        assert!(is_exp_coprime(&f(4), &f(8)));
        assert!(!is_exp_coprime(&f(4), &f(16)));
    }

    #[test]
    fn phi_e_examples() {
        assert_eq!(phi_e(&f(72)), 2);
        assert_eq!(phi_e(&f(2 * 3 * 5 * 7 * 11)), 1);
        assert_eq!(phi_e(&f(3u64.pow(5))), 4);
    }

    #[test]
    fn sigma_tilde_examples() {
        assert_eq!(sigma_tilde(&f(8)), 6);
        assert_eq!(sigma_tilde(&f(4)), 2);
        assert_eq!(sigma_tilde(&f(12)), 6);
        for p in [2u64, 3, 5, 7] {
            assert_eq!(sigma_tilde_prime_power::<u128>(p, 1), p as u128);
            assert_eq!(sigma_tilde_prime_power::<u128>(p, 2), p as u128);
            assert_eq!(sigma_tilde_prime_power::<u128>(p, 4), (p + p.pow(3)) as u128);
        }
    }

    #[test]
    fn sigma_tilde_bounded_by_n() {
        for n in 1..=20_000u64 {
            let fact = f(n);
            let s = sigma_tilde(&fact);
            assert!(s <= n as u128);
            let squarefree = fact.exponents().all(|a| a == 1);
            assert_eq!(s == n as u128, squarefree, "n = {n}");
        }
    }

    #[test]
    fn p_tilde_examples() {
        assert_eq!(p_tilde(&f(16)), 24);
        assert_eq!(p_tilde(&f(12)), 18);
        assert_eq!(p_tilde(&f(97)), 97);
        assert_eq!(p_tilde_oracle(12), Ok(18));
        assert_eq!(p_tilde_oracle(97), Ok(97));
        assert_eq!(p_tilde_oracle(1), Ok(1));
        assert!(matches!(p_tilde_oracle(P_TILDE_ORACLE_CAP + 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn p_tilde_forms_agree_exactly() {
        for p in (2u64..=50).filter(|&p| crate::arith::is_prime_u64(p)) {
            for a in 1..=30u32 {
                let divisor_form: BigUint = p_tilde_prime_power(p, a);
                let gcd_form: BigUint = p_tilde_prime_power_gcd_form(p, a);
                assert_eq!(divisor_form, gcd_form, "p = {p}, a = {a}");
            }
        }
    }

    #[test]
    fn q_k_e_examples() {
        assert_eq!(q_k_e(&f(16), 2), Ok(0));
        assert_eq!(q_k_e(&f(16), 3), Ok(1));
        assert_eq!(q_k_e(&f(2 * 3 * 5 * 7 * 11 * 13), 9), Ok(1));
        assert_eq!(q_k_e(&f(12), 1), Err(Error::InvalidK(1)));
        for k in 2..=5u32 {
            for a in 1..(1u32 << k) {
                assert_eq!(q_k_e(&f(3u64.pow(a)), k), Ok(1));
            }
            assert_eq!(q_k_e(&f(2u64.pow(1 << k)), k), Ok(0));
        }
    }

    #[test]
    fn q2_matches_squarefree_exponents() {
        for n in 1..=20_000u64 {
            let fact = f(n);
            let expected = fact.exponents().all(|a| is_k_free(a as u64, 2).unwrap()) as u8;
            assert_eq!(q_k_e(&fact, 2), Ok(expected));
        }
    }

    #[test]
    fn sandor_examples() {
        // a in {6, 12, 48, 54}: 54 = 2 * 3^3 has gcd(3, 1) = gcd(2, 3) = 1.
        assert_eq!(phi_e_sandor(72), Ok(4));
        assert_eq!(phi_e_sandor(1), Ok(1));
        for p in [2u64, 3, 5] {
            for a in 1..=8u32 {
                assert_eq!(phi_e_sandor(p.pow(a)), Ok(phi_exponent(a as u64)));
            }
        }
        assert!(matches!(phi_e_sandor(SANDOR_CAP + 1), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn sandor_not_multiplicative() {
        assert_ne!(phi_e_sandor(72).unwrap(), phi_e_sandor(8).unwrap() * phi_e_sandor(9).unwrap());
    }

    #[test]
    fn oracles_agree_small() {
        for n in 1..=3000u64 {
            let fact = f(n);
            assert_eq!(oracle::exponential_divisors(n).unwrap(), exponential_divisors(&fact));
            assert_eq!(oracle::phi_e(n).unwrap(), phi_e(&fact));
            assert_eq!(oracle::sigma_tilde(n).unwrap(), sigma_tilde(&fact));
            assert_eq!(oracle::p_tilde(n).unwrap(), p_tilde(&fact));
        }
    }

    proptest! {
        #[test]
        fn gcd_exponential_commutes_and_divides(
            primes in proptest::sample::subsequence(vec![2u64, 3, 5, 7, 11], 1..=3),
            ea in proptest::collection::vec(1u32..6, 3),
            eb in proptest::collection::vec(1u32..6, 3),
        ) {
            let n = Factorization::from_parts(primes.iter().copied().zip(ea.iter().copied())).unwrap();
            let m = Factorization::from_parts(primes.iter().copied().zip(eb.iter().copied())).unwrap();
            let g = gcd_exponential(&n, &m).unwrap();
            prop_assert_eq!(g, gcd_exponential(&m, &n).unwrap());
            let gf = factor(g).unwrap();
            prop_assert!(is_exp_divisor(&gf, &n));
            prop_assert!(is_exp_divisor(&gf, &m));
        }

        #[test]
        fn multiplicative_on_coprime_pairs(a in 1u64..5000, b in 1u64..5000) {
            prop_assume!(a.gcd(&b) == 1);
            let (fa, fb, fab) = (f(a), f(b), f(a * b));
            prop_assert_eq!(phi_e(&fab), phi_e(&fa) * phi_e(&fb));
            prop_assert_eq!(sigma_tilde(&fab), sigma_tilde(&fa) * sigma_tilde(&fb));
            prop_assert_eq!(p_tilde(&fab), p_tilde(&fa) * p_tilde(&fb));
            prop_assert_eq!(tau_e(&fab), tau_e(&fa) * tau_e(&fb));
        }
    }
}
