use super::real::Real;
use super::zeta::euler_gamma;
use crate::arith::primes_up_to;
use crate::{Error, Result};

/// `(6 / pi^2) e^gamma`.
pub fn mertens_constant() -> Real {
    let pi = Real::pi();
    Real::from_u64(6) / (&pi * &pi) * euler_gamma().exp()
}

/// `prod_{p <= y} (1 + 1/p)`.
pub fn mertens_product(y: u64) -> Result<Real> {
    let table = primes_up_to(y.max(2))?;
    Ok(table.primes().iter().map(|&p| Real::ratio(p as i128 + 1, p as i128)).product())
}

/// `prod_{p <= y} (1 + 1/p) / ((6/pi^2) e^gamma ln y)`, for `y >= 3`.
pub fn mertens_ratio(y: u64) -> Result<Real> {
    if y < 3 {
        return Err(Error::Domain(format!("mertens_ratio needs y >= 3, got {y}")));
    }
    Ok(mertens_product(y)? / (mertens_constant() * Real::from_u64(y).ln()))
}
