//! Principal-value logarithmic integral.

use super::real::Real;
use super::zeta::euler_gamma;
use crate::{Error, Result};

/// `li(x) = gamma + ln ln x + sum_{k >= 1} (ln x)^k / (k k!)` for `x >= 2`.
///
/// The series has positive terms; it is summed until a term falls below
/// `1e-90` of the partial sum, far inside the `1e-9` relative target.
pub fn li(x: &Real) -> Result<Real> {
    if *x < Real::from_u64(2) {
        return Err(Error::Domain(format!("li needs x >= 2, got {}", x.to_sci(6))));
    }
    let l = x.ln();
    let cutoff = Real::parse("1e-90").expect("literal");
    let mut term = Real::one();
    let mut sum = Real::zero();
    for k in 1u64.. {
        term = term * &l / Real::from_u64(k);
        let contribution = &term / Real::from_u64(k);
        sum = sum + &contribution;
        if k as f64 > l.to_f64() && contribution < &sum * &cutoff {
            break;
        }
    }
    Ok(euler_gamma() + l.ln() + sum)
}

pub fn li_u64(x: u64) -> Result<Real> {
    li(&Real::from_u64(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Gauss-Legendre (5 nodes) on `n` panels.
    fn gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        const X: [f64; 5] =
            [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
        const W: [f64; 5] = [
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
            0.236_926_885_056_189,
        ];
        let h = (b - a) / n as f64;
        (0..n)
            .map(|i| {
                let mid = a + (i as f64 + 0.5) * h;
                X.iter().zip(W).map(|(x, w)| w * f(mid + 0.5 * h * x)).sum::<f64>() * 0.5 * h
            })
            .sum()
    }

    #[test]
    fn li2_by_quadrature() {
        // li(2) = int_0^2 (1/ln t - 1/(t - 1)) dt; the integrand is smooth
        // (value 1/2 at t = 1, 1 at t = 0).
        let f = |t: f64| {
            if (t - 1.0).abs() < 1e-6 {
                0.5 - (t - 1.0) / 12.0
            } else if t == 0.0 {
                1.0
            } else {
                1.0 / t.ln() - 1.0 / (t - 1.0)
            }
        };
        // The integrand has a log singularity in its derivative at 0, so
        // grade the mesh towards it with t = 2 u^4.
        let quad = gauss(|u| f(2.0 * u.powi(4)) * 8.0 * u.powi(3), 0.0, 1.0, 400);
        let v = li_u64(2).unwrap().to_f64();
        assert!(v > 1.0 && v < 1.1);
        assert!((v - quad).abs() < 1e-9 * v, "{v} vs {quad}");
    }

    #[test]
    fn additivity_by_quadrature() {
        for (a, b) in [(2.0, 10.0), (100.0, 5000.0), (1e5, 1e6)] {
            let q = gauss(|t: f64| 1.0 / t.ln(), a, b, 2000);
            let d = (li(&Real::from_f64(b)).unwrap() - li(&Real::from_f64(a)).unwrap()).to_f64();
            assert!((q - d).abs() < 1e-9 * d, "[{a}, {b}]: {q} vs {d}");
        }
    }

    #[test]
    fn prime_count_magnitude() {
        let v = li_u64(1_000_000).unwrap().to_f64();
        assert!((v / 78_498.0 - 1.0).abs() < 0.002, "{v}");
    }

    #[test]
    fn rejects_small_x() {
        assert!(li(&Real::ratio(3, 2)).is_err());
    }
}
