use super::{MultiplicativeSpec, SIEVE_HARD_CAP};
use crate::dirichlet::ArithSeq;
use crate::{Error, Result};

/// Largest dense table: `u64` values plus a `u32` prime-power part and a
/// `u8` exponent per entry.
pub const DENSE_CAP: u64 = 200_000_000;

/// `f(0..=n)` with `f(0) = 0`, by a linear sieve that carries the largest
/// power of the smallest prime factor alongside each entry.
pub fn sieve_values_u64(spec: &MultiplicativeSpec, n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::Zero);
    }
    let cap = DENSE_CAP.min(SIEVE_HARD_CAP);
    if n > cap {
        return Err(Error::CapExceeded { what: "sieve_values", n, cap });
    }
    let n = n as usize;
    let mut values = vec![0u64; n + 1];
    // spf_power[m] = p^a, the full power of spf(m) dividing m; exps[m] = a.
    let mut spf_power = vec![0u32; n + 1];
    let mut exps = vec![0u8; n + 1];
    let mut primes: Vec<u32> = Vec::new();
    values[1] = 1;
    for i in 2..=n {
        if spf_power[i] == 0 {
            primes.push(i as u32);
            spf_power[i] = i as u32;
            exps[i] = 1;
            values[i] = spec.prime_power_value(i as u64, 1);
        }
        for &p in &primes {
            let p_us = p as usize;
            let m = i * p_us;
            if m > n {
                break;
            }
            if i % p_us == 0 {
                let pk = spf_power[i] as usize * p_us;
                let a = exps[i] + 1;
                spf_power[m] = pk as u32;
                exps[m] = a;
                values[m] = values[m / pk] * spec.prime_power_value(p as u64, a as u32);
                break;
            }
            spf_power[m] = p;
            exps[m] = 1;
            values[m] = values[i] * spec.prime_power_value(p as u64, 1);
        }
    }
    Ok(values)
}

/// Dense exact values `f(1..=n)`.
pub fn sieve_values(spec: &MultiplicativeSpec, n: u64) -> Result<ArithSeq> {
    let values = sieve_values_u64(spec, n)?;
    Ok(ArithSeq::from_fn(n as usize, |i| values[i] as i128))
}
