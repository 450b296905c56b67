//! `zeta(s)` for real `s > 0`, Euler's constant and Bernoulli numbers.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::real::Real;
use crate::{Error, Result};

/// Number of directly summed terms in Euler-Maclaurin.
const EM_TERMS: u64 = 64;
/// Number of Bernoulli correction terms in Euler-Maclaurin.
const EM_CORRECTIONS: usize = 50;
/// Terms of the accelerated alternating series.
const CVZ_TERMS: u64 = 140;

/// Two evaluations of `zeta(s)` must agree this closely.
pub const DUAL_METHOD_TOLERANCE: f64 = 1e-10;

/// `B_0, B_1, ..., B_n` with `B_1 = -1/2`, exact.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let mut acc = BigRational::zero();
        let mut binom = BigInt::one();
        for (k, bk) in b.iter().enumerate() {
            acc += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b
}

/// `B_{2j} / (2j)!` for `j = 1..=EM_CORRECTIONS`, at working precision.
fn em_coefficients() -> &'static [Real] {
    static COEFFS: OnceLock<Vec<Real>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let b = bernoulli_numbers(2 * EM_CORRECTIONS);
        let mut fact = BigInt::one();
        let mut out = Vec::with_capacity(EM_CORRECTIONS);
        for (j, bj) in b.iter().enumerate().take(2 * EM_CORRECTIONS + 1).skip(1) {
            fact *= BigInt::from(j);
            if j % 2 == 0 {
                out.push(Real::from_big_rational(&(bj.clone() / BigRational::from_integer(fact.clone()))));
            }
        }
        out
    })
}

fn ln_table() -> &'static [Real] {
    static LN: OnceLock<Vec<Real>> = OnceLock::new();
    LN.get_or_init(|| (0..=EM_TERMS.max(CVZ_TERMS + 1)).map(|k| Real::from_u64(k.max(1)).ln()).collect())
}

fn check_domain(s: &Real) -> Result<()> {
    let sf = s.to_f64();
    if sf.is_nan() || sf <= 0.0 {
        return Err(Error::Domain(format!("zeta needs s > 0, got {sf}")));
    }
    if (sf - 1.0).abs() <= 1e-6 {
        return Err(Error::NearPole(sf));
    }
    Ok(())
}

/// Euler-Maclaurin summation with `N = 64` and 50 Bernoulli corrections.
pub fn zeta_euler_maclaurin(s: &Real) -> Result<Real> {
    check_domain(s)?;
    let ln = ln_table();
    let n = EM_TERMS;
    let mut total = Real::zero();
    for k in 1..n {
        total = total + (-(s * &ln[k as usize])).exp();
    }
    let ln_n = &ln[n as usize];
    let n_pow_minus_s = (-(s * ln_n)).exp();
    let one = Real::one();
    let n_real = Real::from_u64(n);
    total = total + &n_pow_minus_s * &n_real / (s - &one);
    total = total + &n_pow_minus_s / Real::from_u64(2);
    // term_j = B_{2j}/(2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}
    let n2 = &n_real * &n_real;
    let mut rising = s.clone();
    let mut n_pow = &n_pow_minus_s / &n_real;
    for (j, c) in em_coefficients().iter().enumerate() {
        if j > 0 {
            let base = Real::from_u64(2 * j as u64 - 1);
            rising = rising * (s + &base) * (s + &base + &one);
            n_pow = n_pow / &n2;
        }
        total = total + c * &rising * &n_pow;
    }
    Ok(total)
}

/// Alternating-series route: `eta(s)` by the Cohen-Villegas-Zagier
/// acceleration, then `zeta(s) = eta(s) / (1 - 2^{1-s})`.
pub fn zeta_alternating(s: &Real) -> Result<Real> {
    check_domain(s)?;
    let ln = ln_table();
    let n = CVZ_TERMS;
    let one = Real::one();
    let d0 = (Real::from_u64(3) + Real::from_u64(8).sqrt()).powi(n);
    let d = (&d0 + d0.recip()) / Real::from_u64(2);
    let mut b = -one.clone();
    let mut c = -d.clone();
    let mut sum = Real::zero();
    let n_i = n as i128;
    for k in 0..n {
        c = &b - &c;
        let a_k = (-(s * &ln[(k + 1) as usize])).exp();
        sum = sum + &c * &a_k;
        let k_i = k as i128;
        b = b * Real::from_i128(2 * (k_i + n_i) * (k_i - n_i)) / Real::from_i128((2 * k_i + 1) * (k_i + 1));
    }
    let eta = sum / d;
    let factor = one.clone() - (&(&one - s) * &ln[2]).exp();
    Ok(eta / factor)
}

/// `zeta(s)` for real `s > 0`, `|s - 1| > 1e-6`.
///
/// Both evaluation routes run and must agree within `max(tol, 1e-10)`;
/// the Euler-Maclaurin value is returned.
pub fn zeta_real(s: &Real, tol: f64) -> Result<Real> {
    let em = zeta_euler_maclaurin(s)?;
    let alt = zeta_alternating(s)?;
    let gap = (&em - &alt).abs().to_f64();
    if gap > tol.max(DUAL_METHOD_TOLERANCE) {
        return Err(Error::ZetaDisagreement { s: s.to_f64(), gap });
    }
    Ok(em)
}

/// `zeta(1/3)`, checked by both routes and kept for the process lifetime.
pub fn zeta_one_third() -> Result<Real> {
    static Z: OnceLock<std::result::Result<Real, Error>> = OnceLock::new();
    Z.get_or_init(|| zeta_real(&Real::ratio(1, 3), DUAL_METHOD_TOLERANCE)).clone()
}

/// Euler's constant from Euler-Maclaurin on the harmonic numbers:
/// `gamma = H_N - ln N - 1/(2N) + sum_j B_{2j} / (2j N^{2j})`.
pub fn euler_gamma() -> Real {
    static G: OnceLock<Real> = OnceLock::new();
    G.get_or_init(|| {
        let n = 128u64;
        let h: Real = (1..=n).map(|k| Real::from_u64(k).recip()).sum();
        let n_real = Real::from_u64(n);
        let mut g = h - n_real.ln() - (Real::from_u64(2) * &n_real).recip();
        let b = bernoulli_numbers(2 * EM_CORRECTIONS);
        let n2 = &n_real * &n_real;
        let mut n_pow = n2.clone();
        for j in 1..=EM_CORRECTIONS {
            let term = Real::from_big_rational(&b[2 * j]) / (Real::from_u64(2 * j as u64) * &n_pow);
            g = g + term;
            n_pow = n_pow * &n2;
        }
        g
    })
    .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA_50: &str = "0.57721566490153286060651209008240243104215933593992";

    fn close(a: &Real, b: &Real, tol: &str) -> bool {
        (a - b).abs() < Real::parse(tol).unwrap()
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(12);
        let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn gamma_matches_literal() {
        assert!(close(&euler_gamma(), &Real::parse(GAMMA_50).unwrap(), "1e-49"));
    }

    #[test]
    fn even_values() {
        let pi = Real::pi();
        let z2 = zeta_real(&Real::from_u64(2), 1e-12).unwrap();
        assert!(close(&z2, &(&pi * &pi / Real::from_u64(6)), "1e-80"));
        let z4 = zeta_real(&Real::from_u64(4), 1e-12).unwrap();
        assert!(close(&z4, &(pi.powi(4) / Real::from_u64(90)), "1e-80"));
    }

    #[test]
    fn zeta3_against_partial_sums() {
        // sum_{n <= M} n^{-3} + tail, with the tail pinned between the
        // integrals over [M+1, inf) and [M, inf).
        let m = 20_000u64;
        let partial: f64 = (1..=m).rev().map(|n| (n as f64).powi(-3)).sum();
        let lower = partial + 0.5 / ((m + 1) as f64).powi(2);
        let upper = partial + 0.5 / (m as f64).powi(2);
        let z3 = zeta_real(&Real::from_u64(3), 1e-12).unwrap().to_f64();
        assert!(lower - 1e-15 <= z3 && z3 <= upper + 1e-15, "{lower} {z3} {upper}");
    }

    #[test]
    fn one_third_methods_agree() {
        let s = Real::ratio(1, 3);
        let em = zeta_euler_maclaurin(&s).unwrap();
        let alt = zeta_alternating(&s).unwrap();
        assert!(close(&em, &alt, "1e-60"), "{em} vs {alt}");
        let z = zeta_one_third().unwrap();
        assert!(z.is_negative());
        assert!((z.to_f64() + 0.9733602483507827).abs() < 1e-6, "{z}");
    }

    #[test]
    fn methods_agree_across_range() {
        for (num, den) in [(1, 10), (1, 2), (9, 10), (11, 10), (5, 3), (7, 2), (26, 1), (45, 1)] {
            let s = Real::ratio(num, den);
            let em = zeta_euler_maclaurin(&s).unwrap();
            let alt = zeta_alternating(&s).unwrap();
            assert!(close(&em, &alt, "1e-60"), "s = {num}/{den}: {em} vs {alt}");
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(zeta_real(&Real::from_u64(1), 1e-10), Err(Error::NearPole(_))));
        assert!(matches!(zeta_real(&Real::zero(), 1e-10), Err(Error::Domain(_))));
        assert!(matches!(zeta_real(&Real::from_i64(-2), 1e-10), Err(Error::Domain(_))));
        assert!(zeta_real(&(Real::one() + Real::parse("1e-5").unwrap()), 1e-10).is_ok());
    }
}
