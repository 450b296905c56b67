//! Arithmetic functions built on exponential divisors.
//!
//! An integer `d = p_1^{c_1} ... p_r^{c_r}` is an exponential divisor of
//! `n = p_1^{a_1} ... p_r^{a_r}` when every `c_i` divides `a_i`. This crate
//! evaluates the functions defined through that relation (`tau_e`, `sigma_e`,
//! `phi_e`, `sigma_tilde`, `p_tilde`, the exponentially k-free indicator),
//! checks their Dirichlet-series factorizations coefficient by coefficient,
//! computes the Euler-product constants of their summatory functions to
//! fifty digits, and fits the residuals of those summatory functions against
//! the predicted main terms.
//!
//! Layout:
//!
//! * [`arith`]: factorization, prime tables and the classical functions.
//! * [`expfun`]: the exponential-divisor functions, each with a formula path
//!   and a definitional oracle.
//! * [`dirichlet`]: exact Dirichlet convolution over dense sequences.
//! * [`sieve`]: multiplicative sieves and summatory functions.
//! * [`analysis`]: high-precision reals, `zeta`, `li`, Euler products,
//!   residual fits and maximal-order reports.
//! * [`checks`]: the identity suites exposed by the command-line tool.

pub mod analysis;
pub mod arith;
pub mod checks;
pub mod dirichlet;
mod error;
pub mod expfun;
pub mod sieve;

pub use arith::{factor, primes_up_to, BigFactorization, Factorization, PrimePower, PrimeTable};
pub use dirichlet::ArithSeq;
pub use error::{Error, Result};
pub use sieve::{Grid, MultiplicativeSpec, SummatoryGrid};
