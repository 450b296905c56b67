//! Multiplicative sieves and summatory functions.
//!
//! Dense value tables come from a linear smallest-prime-factor sieve
//! ([`sieve_values`]). Partial sums over a grid of cut points come from a
//! segmented sieve that never materializes more than one segment per worker
//! ([`summatory`]). The closed-form auxiliary sums live in [`sums`].

mod grid;
mod linear;
mod segmented;
pub mod sums;

use std::fmt;
use std::sync::Arc;

use num_integer::Roots;

use crate::expfun;
use crate::{Error, Result};

pub use grid::{parse_count, Grid, SummatoryGrid, SummatoryPoint};
pub use linear::{sieve_values, sieve_values_u64};
pub use segmented::{summatory, summatory_with};
pub use sums::{petermann_wu_sum, shifted_prime_sum, shifted_prime_summatory, tau13_summatory};

/// No sieve runs past this point.
pub const SIEVE_HARD_CAP: u64 = 1_000_000_000;

/// Default ceiling for [`summatory`].
pub const DEFAULT_CAPACITY: u64 = 10_000_000;

pub const DEFAULT_SEGMENT_LEN: usize = 1 << 22;

/// Largest `x` for which a `u128` accumulator cannot overflow when every
/// value satisfies `f(n) <= n^2` (true for all built-in specs), since then
/// `S(x) <= x^3`.
pub fn accumulator_limit() -> u64 {
    let c = u128::MAX.cbrt();
    u64::try_from(c).unwrap_or(u64::MAX)
}

type DependentFn = Arc<dyn Fn(u64, u32) -> u64 + Send + Sync>;

#[derive(Clone)]
enum Rule {
    /// `table[a]` for `0 <= a <= 64`.
    Independent(Arc<[u64; 65]>),
    Dependent(DependentFn),
}

/// A multiplicative function given by its values on prime powers.
///
/// Values must fit in `u64` for every `n <= SIEVE_HARD_CAP`; all built-in
/// specs satisfy `f(n) <= n^2` there.
#[derive(Clone)]
pub struct MultiplicativeSpec {
    name: String,
    rule: Rule,
}

impl fmt::Debug for MultiplicativeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplicativeSpec")
            .field("name", &self.name)
            .field("prime_independent", &self.is_prime_independent())
            .finish()
    }
}

impl MultiplicativeSpec {
    /// Function whose value on `p^a` depends only on `a`.
    pub fn prime_independent(name: impl Into<String>, g: impl Fn(u32) -> u64) -> Self {
        let mut table = [0u64; 65];
        table[0] = 1;
        for (a, slot) in table.iter_mut().enumerate().skip(1) {
            *slot = g(a as u32);
        }
        Self { name: name.into(), rule: Rule::Independent(Arc::new(table)) }
    }

    pub fn prime_dependent(name: impl Into<String>, g: impl Fn(u64, u32) -> u64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), rule: Rule::Dependent(Arc::new(g)) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_prime_independent(&self) -> bool {
        matches!(self.rule, Rule::Independent(_))
    }

    /// `g(p, a)`; `g(p, 0) = 1`.
    #[inline]
    pub fn prime_power_value(&self, p: u64, a: u32) -> u64 {
        match &self.rule {
            Rule::Independent(t) => t[a as usize],
            Rule::Dependent(g) => {
                if a == 0 {
                    1
                } else {
                    g(p, a)
                }
            }
        }
    }

    /// Pointwise evaluation through a factorization.
    pub fn eval(&self, n: &crate::Factorization) -> u64 {
        n.parts().iter().map(|pp| self.prime_power_value(pp.prime, pp.exponent)).product()
    }

    pub fn phi_e() -> Self {
        Self::prime_independent("phi_e", |a| expfun::phi_exponent(a as u64))
    }

    pub fn tau_e() -> Self {
        Self::prime_independent("tau_e", expfun::tau_e_prime_power)
    }

    pub fn q_e(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidK(k));
        }
        Ok(Self::prime_independent(format!("q{k}e"), move |a| expfun::exponent_is_k_free(a, k) as u64))
    }

    pub fn sigma_tilde() -> Self {
        Self::prime_dependent("sigma_tilde", |p, a| expfun::sigma_tilde_prime_power::<u128>(p, a) as u64)
    }

    pub fn p_tilde() -> Self {
        Self::prime_dependent("p_tilde", |p, a| expfun::p_tilde_prime_power::<u128>(p, a) as u64)
    }

    pub fn sigma_e() -> Self {
        Self::prime_dependent("sigma_e", |p, a| expfun::sigma_e_prime_power::<u128>(p, a) as u64)
    }

    /// Built-in specs by name: `phi_e`, `tau_e`, `sigma_e`, `sigma_tilde`,
    /// `p_tilde`, and `q<k>e` for the exponentially k-free indicator.
    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "phi_e" => Some(Self::phi_e()),
            "tau_e" => Some(Self::tau_e()),
            "sigma_e" => Some(Self::sigma_e()),
            "sigma_tilde" => Some(Self::sigma_tilde()),
            "p_tilde" => Some(Self::p_tilde()),
            _ => {
                let k = name.strip_prefix('q')?.strip_suffix('e')?.parse().ok()?;
                Self::q_e(k).ok()
            }
        }
    }

    pub fn builtins() -> Vec<Self> {
        vec![
            Self::phi_e(),
            Self::sigma_tilde(),
            Self::p_tilde(),
            Self::q_e(2).unwrap(),
            Self::q_e(3).unwrap(),
            Self::tau_e(),
            Self::sigma_e(),
        ]
    }
}

/// Limits for one summatory run.
#[derive(Debug, Clone)]
pub struct SieveConfig {
    pub capacity: u64,
    pub segment_len: usize,
    pub parallel: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self { capacity: DEFAULT_CAPACITY, segment_len: DEFAULT_SEGMENT_LEN, parallel: true }
    }
}

impl SieveConfig {
    pub fn with_capacity(capacity: u64) -> Self {
        Self { capacity, ..Self::default() }
    }

    pub(crate) fn check(&self, x: u64) -> Result<()> {
        let cap = self.capacity.min(SIEVE_HARD_CAP).min(accumulator_limit());
        if x > cap {
            return Err(Error::CapExceeded { what: "sieve capacity", n: x, cap });
        }
        if self.segment_len == 0 {
            return Err(Error::Domain("segment length must be positive".into()));
        }
        Ok(())
    }
}
