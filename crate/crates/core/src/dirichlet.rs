//! Dense Dirichlet-convolution algebra over exact integers.
//!
//! Coefficient sequences are stored as `i128` with checked arithmetic: a
//! result is either exact or an [`Error::Overflow`], never silently wrapped.
//!
//! Named coefficient sequences:
//!
//! | constructor              | Dirichlet series            |
//! |--------------------------|-----------------------------|
//! | [`ArithSeq::ones`]       | `zeta(s)`                   |
//! | [`ArithSeq::cube_indicator`] | `zeta(3s)`              |
//! | [`ArithSeq::mobius`]     | `1/zeta(s)`                 |
//! | [`mu3_seq`]              | `1/zeta(3s)`                |
//! | [`ArithSeq::identity`]   | `zeta(s-1)`                 |
//! | [`ArithSeq::root_on_squares`] | `zeta(2s-1)`           |
//! | [`ArithSeq::mu_twisted_cubes`] | `1/zeta(3s-2)`        |
//! | [`tau13_seq`]            | `zeta(s) zeta(3s)`          |
//! | [`h_seq`]                | `zeta(s-1) zeta(2s-1) / zeta(3s-2)` |

use num_integer::Roots;

use crate::arith::{primes_up_to, Factorization, PrimeTable};
use crate::expfun::{self, phi_exponent};
use crate::{Error, Result};

/// Default ceiling on sequence length.
pub const DEFAULT_SEQ_CAP: usize = 1_000_000;

/// Exact sequence `f(1), ..., f(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithSeq {
    // values[0] is unused padding so that values[n] = f(n).
    values: Vec<i128>,
}

impl ArithSeq {
    pub fn zeros(limit: usize) -> Self {
        Self { values: vec![0; limit + 1] }
    }

    pub fn from_fn(limit: usize, mut f: impl FnMut(usize) -> i128) -> Self {
        let mut values = vec![0; limit + 1];
        for (n, v) in values.iter_mut().enumerate().skip(1) {
            *v = f(n);
        }
        Self { values }
    }

    /// Takes `f(1..=N)` from a slice.
    pub fn from_values(values: &[i128]) -> Self {
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(0);
        v.extend_from_slice(values);
        Self { values: v }
    }

    /// Multiplicative sequence from its prime-power values.
    pub fn multiplicative(limit: usize, table: &PrimeTable, mut g: impl FnMut(u64, u32) -> i128) -> Result<Self> {
        if (limit as u64) > table.limit().max(1) && limit > 1 {
            return Err(Error::CapExceeded { what: "ArithSeq::multiplicative", n: limit as u64, cap: table.limit() });
        }
        let mut values = vec![0i128; limit + 1];
        if limit >= 1 {
            values[1] = 1;
        }
        for n in 2..=limit {
            let p = table.spf(n as u64) as usize;
            let mut m = n / p;
            let mut a = 1u32;
            while m.is_multiple_of(p) {
                m /= p;
                a += 1;
            }
            values[n] = values[m].checked_mul(g(p as u64, a)).ok_or(Error::Overflow("ArithSeq::multiplicative"))?;
        }
        Ok(Self { values })
    }

    pub fn limit(&self) -> usize {
        self.values.len() - 1
    }

    /// `f(n)` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> i128 {
        assert!(n >= 1, "sequences are indexed from 1");
        self.values[n]
    }

    pub fn values(&self) -> &[i128] {
        &self.values[1..]
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i128)> + '_ {
        self.values.iter().copied().enumerate().skip(1)
    }

    /// First index where the two sequences differ.
    pub fn first_difference(&self, other: &ArithSeq) -> Option<usize> {
        self.iter().zip(other.iter()).find(|((_, a), (_, b))| a != b).map(|((n, _), _)| n)
    }

    pub fn delta(limit: usize) -> Self {
        Self::from_fn(limit, |n| (n == 1) as i128)
    }

    pub fn ones(limit: usize) -> Self {
        Self::from_fn(limit, |_| 1)
    }

    /// `n -> n`.
    pub fn identity(limit: usize) -> Self {
        Self::from_fn(limit, |n| n as i128)
    }

    /// 1 on perfect cubes, 0 elsewhere.
    pub fn cube_indicator(limit: usize) -> Self {
        let mut s = Self::zeros(limit);
        let mut b = 1usize;
        while b * b * b <= limit {
            s.values[b * b * b] = 1;
            b += 1;
        }
        s
    }

    /// 1 on perfect squares, 0 elsewhere.
    pub fn square_indicator(limit: usize) -> Self {
        let mut s = Self::zeros(limit);
        let mut b = 1usize;
        while b * b <= limit {
            s.values[b * b] = 1;
            b += 1;
        }
        s
    }

    /// `b` at `n = b^2`, 0 elsewhere.
    pub fn root_on_squares(limit: usize) -> Self {
        let mut s = Self::zeros(limit);
        let mut b = 1usize;
        while b * b <= limit {
            s.values[b * b] = b as i128;
            b += 1;
        }
        s
    }

    /// `c^2 mu(c)` at `n = c^3`, 0 elsewhere.
    pub fn mu_twisted_cubes(limit: usize) -> Self {
        let mu = Self::mobius(limit.cbrt().max(1));
        let mut s = Self::zeros(limit);
        let mut c = 1usize;
        while c * c * c <= limit {
            s.values[c * c * c] = (c * c) as i128 * mu.get(c);
            c += 1;
        }
        s
    }

    /// Mobius function by linear sieve.
    pub fn mobius(limit: usize) -> Self {
        let mut mu = vec![0i128; limit + 1];
        let mut primes: Vec<usize> = Vec::new();
        let mut composite = vec![false; limit + 1];
        if limit >= 1 {
            mu[1] = 1;
        }
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i);
                mu[i] = -1;
            }
            for &p in &primes {
                let m = i * p;
                if m > limit {
                    break;
                }
                composite[m] = true;
                if i % p == 0 {
                    mu[m] = 0;
                    break;
                }
                mu[m] = -mu[i];
            }
        }
        Self { values: mu }
    }

    /// Dirichlet convolution `(f * g)(n) = sum_{de = n} f(d) g(e)`.
    pub fn convolve(&self, other: &ArithSeq) -> Result<ArithSeq> {
        let n = self.limit();
        if n != other.limit() {
            return Err(Error::MismatchedLimits(n, other.limit()));
        }
        let mut out = vec![0i128; n + 1];
        for d in 1..=n {
            let fd = self.values[d];
            if fd == 0 {
                continue;
            }
            for e in 1..=n / d {
                let ge = other.values[e];
                if ge == 0 {
                    continue;
                }
                let term = fd.checked_mul(ge).ok_or(Error::Overflow("convolve"))?;
                let slot = &mut out[d * e];
                *slot = slot.checked_add(term).ok_or(Error::Overflow("convolve"))?;
            }
        }
        Ok(ArithSeq { values: out })
    }

    /// Dirichlet inverse, defined over the integers when `f(1) = +-1`.
    pub fn dirichlet_inverse(&self) -> Result<ArithSeq> {
        let n = self.limit();
        let f1 = self.values.get(1).copied().unwrap_or(0);
        if f1 != 1 && f1 != -1 {
            return Err(Error::NotInvertible(f1));
        }
        // acc[m] accumulates sum_{d | m, d > 1} f(d) g(m / d) as g fills in.
        let mut acc = vec![0i128; n + 1];
        let mut g = vec![0i128; n + 1];
        for i in 1..=n {
            let rhs = (i == 1) as i128 - acc[i];
            g[i] = rhs * f1; // division by +-1
            if g[i] == 0 {
                continue;
            }
            for d in 2..=n / i {
                let fd = self.values[d];
                if fd == 0 {
                    continue;
                }
                let term = fd.checked_mul(g[i]).ok_or(Error::Overflow("dirichlet_inverse"))?;
                let slot = &mut acc[i * d];
                *slot = slot.checked_add(term).ok_or(Error::Overflow("dirichlet_inverse"))?;
            }
        }
        Ok(ArithSeq { values: g })
    }

    pub fn checked_sub(&self, other: &ArithSeq) -> Result<ArithSeq> {
        if self.limit() != other.limit() {
            return Err(Error::MismatchedLimits(self.limit(), other.limit()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.checked_sub(*b).ok_or(Error::Overflow("checked_sub")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ArithSeq { values })
    }

    pub fn sum(&self) -> Result<i128> {
        self.values.iter().try_fold(0i128, |acc, &v| acc.checked_add(v)).ok_or(Error::Overflow("ArithSeq::sum"))
    }

    /// Partial sums `S(x) = sum_{n <= x} f(n)` at every `x`.
    pub fn prefix_sums(&self) -> Result<Vec<i128>> {
        let mut out = Vec::with_capacity(self.limit());
        let mut acc = 0i128;
        for &v in &self.values[1..] {
            acc = acc.checked_add(v).ok_or(Error::Overflow("prefix_sums"))?;
            out.push(acc);
        }
        Ok(out)
    }
}

fn check_limit(limit: usize) -> Result<()> {
    if limit == 0 {
        return Err(Error::Zero);
    }
    if limit > DEFAULT_SEQ_CAP {
        return Err(Error::CapExceeded { what: "sequence length", n: limit as u64, cap: DEFAULT_SEQ_CAP as u64 });
    }
    Ok(())
}

fn table_for(limit: usize) -> Result<PrimeTable> {
    primes_up_to(limit.max(2) as u64)
}

/// `mu_3(n) = mu(m)` if `n = m^3`, else 0.
pub fn mu3_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    let mu = ArithSeq::mobius(limit.cbrt().max(1));
    let mut s = ArithSeq::zeros(limit);
    let mut m = 1usize;
    while m * m * m <= limit {
        s.values[m * m * m] = mu.get(m);
        m += 1;
    }
    Ok(s)
}

/// `f = mu_3 * mu`, computed by convolution.
pub fn f_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    mu3_seq(limit)?.convolve(&ArithSeq::mobius(limit))
}

/// Closed prime-power values of `f = mu_3 * mu`: `f(p) = f(p^3) = -1`,
/// `f(p^4) = 1`, zero otherwise.
pub fn f_prime_power(a: u32) -> i128 {
    match a {
        1 | 3 => -1,
        4 => 1,
        _ => 0,
    }
}

/// `f` built multiplicatively from [`f_prime_power`].
pub fn f_closed_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    ArithSeq::multiplicative(limit, &table_for(limit)?, |_, a| f_prime_power(a))
}

/// `v(p^a) = phi(a) - phi(a-1) - phi(a-3) + phi(a-4)` for `a >= 5`, zero for
/// `1 <= a <= 4`.
pub fn v_prime_power(a: u32) -> i128 {
    if a <= 4 {
        return 0;
    }
    let phi = |x: u32| phi_exponent(x as u64) as i128;
    phi(a) - phi(a - 1) - phi(a - 3) + phi(a - 4)
}

/// `phi^(e)` as a dense sequence.
pub fn phi_e_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    ArithSeq::multiplicative(limit, &table_for(limit)?, |_, a| phi_exponent(a as u64) as i128)
}

/// `P~` as a dense sequence.
pub fn p_tilde_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    ArithSeq::multiplicative(limit, &table_for(limit)?, |p, a| expfun::p_tilde_prime_power::<u128>(p, a) as i128)
}

/// The two independent constructions of `v`.
#[derive(Debug, Clone)]
pub struct VSeq {
    /// `phi^(e) * f`.
    pub by_convolution: ArithSeq,
    /// Multiplicative from [`v_prime_power`].
    pub by_formula: ArithSeq,
}

impl VSeq {
    pub fn agree(&self) -> bool {
        self.by_convolution == self.by_formula
    }
}

pub fn v_seq(limit: usize) -> Result<VSeq> {
    check_limit(limit)?;
    let by_convolution = phi_e_seq(limit)?.convolve(&f_seq(limit)?)?;
    let by_formula = ArithSeq::multiplicative(limit, &table_for(limit)?, |_, a| v_prime_power(a))?;
    Ok(VSeq { by_convolution, by_formula })
}

/// `tau(1, 3, n)`: the number of ways to write `n = a b^3`.
pub fn tau13_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    ArithSeq::ones(limit).convolve(&ArithSeq::cube_indicator(limit))
}

/// `h(n) = sum_{a b^2 c^3 = n} a b c^2 mu(c)`, as a three-fold convolution.
pub fn h_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    ArithSeq::identity(limit).convolve(&ArithSeq::root_on_squares(limit))?.convolve(&ArithSeq::mu_twisted_cubes(limit))
}

/// `w` with `P~ = h * w`, by triangular solve (`h(1) = 1`).
pub fn w_seq(limit: usize) -> Result<ArithSeq> {
    check_limit(limit)?;
    p_tilde_seq(limit)?.convolve(&h_seq(limit)?.dirichlet_inverse()?)
}

/// `max_{n <= N} |w(n)| / n^{exponent}` for each `N` in `limits`.
pub fn w_growth(w: &ArithSeq, limits: &[usize], exponent: f64) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    let mut running = 0.0f64;
    let mut next = 0;
    let mut sorted = limits.to_vec();
    sorted.sort_unstable();
    for (n, v) in w.iter() {
        running = running.max((v as f64).abs() / (n as f64).powf(exponent));
        while next < sorted.len() && sorted[next] == n {
            out.push((n, running));
            next += 1;
        }
    }
    out
}

/// Convenience: `f(n)` of a multiplicative function given its factorization.
pub fn eval_multiplicative(n: &Factorization, g: impl Fn(u64, u32) -> i128) -> i128 {
    n.parts().iter().map(|pp| g(pp.prime, pp.exponent)).product()
}
