//! Identity suites: exact checks that stop at the first counterexample.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{maximal_order_report, MaximalKind};
use crate::arith::{primes_up_to, CanonicalForm};
use crate::dirichlet::{self, ArithSeq, DEFAULT_SEQ_CAP};
use crate::expfun::{self, oracle, P_TILDE_ORACLE_CAP};
use crate::sieve::petermann_wu_sum;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    /// Formula values against the definitional oracles.
    Oracle,
    /// `phi^(e) = 1 * cube * v`, `v` from its closed form, and `f = mu_3 * mu`.
    Lemma1,
    /// `P~ = h * w`, with `w` supported on cube-full integers.
    Lemma3,
    /// The `O(sqrt x)` lattice sum against prefix sums of its coefficients.
    PetermannWu,
    /// `P~(n_k) / n_k = prod (1 + 1/p)` along squared primorials.
    Theorem4Exact,
    /// `Omega(phi^(e)(n_k)) = 2k` along fifth powers of primorials.
    Theorem7Exact,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Oracle, Suite::Lemma1, Suite::Lemma3, Suite::PetermannWu, Suite::Theorem4Exact, Suite::Theorem7Exact];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Oracle => "oracle",
            Suite::Lemma1 => "lemma1",
            Suite::Lemma3 => "lemma3",
            Suite::PetermannWu => "petermann-wu",
            Suite::Theorem4Exact => "theorem4-exact",
            Suite::Theorem7Exact => "theorem7-exact",
        }
    }

    /// Largest accepted `N`. For the maximal-order suites `N` counts primes.
    pub fn cap(self) -> u64 {
        match self {
            Suite::Oracle => P_TILDE_ORACLE_CAP,
            Suite::Lemma1 | Suite::Lemma3 | Suite::PetermannWu => DEFAULT_SEQ_CAP as u64,
            Suite::Theorem4Exact => 2_000,
            Suite::Theorem7Exact => 10_000,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub n: u64,
    pub what: String,
    pub expected: String,
    pub got: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub suite: Suite,
    pub n: u64,
    pub passed: bool,
    /// Number of identities compared.
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl CheckReport {
    fn new(suite: Suite, n: u64, checked: u64, counterexample: Option<Counterexample>) -> Self {
        Self { suite, n, passed: counterexample.is_none(), checked, counterexample }
    }
}

fn mismatch(n: u64, what: &str, expected: impl ToString, got: impl ToString) -> Counterexample {
    Counterexample { n, what: what.into(), expected: expected.to_string(), got: got.to_string() }
}

fn seq_mismatch(what: &str, expected: &ArithSeq, got: &ArithSeq) -> Option<Counterexample> {
    expected.first_difference(got).map(|n| mismatch(n as u64, what, expected.get(n), got.get(n)))
}

pub fn run_suite(suite: Suite, n: u64) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n > suite.cap() {
        return Err(Error::CapExceeded { what: "check N", n, cap: suite.cap() });
    }
    match suite {
        Suite::Oracle => oracle_suite(n),
        Suite::Lemma1 => lemma1_suite(n as usize),
        Suite::Lemma3 => lemma3_suite(n as usize),
        Suite::PetermannWu => petermann_wu_suite(n as usize),
        Suite::Theorem4Exact => maximal_suite(suite, MaximalKind::Theorem4, n as usize),
        Suite::Theorem7Exact => maximal_suite(suite, MaximalKind::Theorem7, n as usize),
    }
}

/// Compares `tau_e`, `sigma_e`, `phi^(e)`, `sigma~` and `P~` at one `n`.
fn oracle_at(table: &crate::PrimeTable, n: u64) -> Result<Option<Counterexample>> {
    let f = table.factor(n)?;
    let pairs: [(&str, u128, u128); 5] = [
        ("tau_e", oracle::tau_e(n)? as u128, expfun::tau_e(&f) as u128),
        ("sigma_e", oracle::sigma_e(n)?, expfun::sigma_e(&f)),
        ("phi_e", oracle::phi_e(n)? as u128, expfun::phi_e(&f) as u128),
        ("sigma_tilde", oracle::sigma_tilde(n)?, expfun::sigma_tilde(&f)),
        ("p_tilde", oracle::p_tilde(n)?, expfun::p_tilde(&f)),
    ];
    Ok(pairs.into_iter().find(|(_, a, b)| a != b).map(|(what, a, b)| mismatch(n, what, a, b)))
}

fn oracle_suite(n: u64) -> Result<CheckReport> {
    let table = primes_up_to(n.max(2))?;
    let found = (1..=n)
        .into_par_iter()
        .map(|m| oracle_at(&table, m))
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    let first = found.into_iter().min_by_key(|c| c.n);
    Ok(CheckReport::new(Suite::Oracle, n, 5 * n, first))
}

fn lemma1_suite(n: usize) -> Result<CheckReport> {
    let v = dirichlet::v_seq(n)?;
    let phi = dirichlet::phi_e_seq(n)?;
    let rebuilt = ArithSeq::ones(n).convolve(&ArithSeq::cube_indicator(n))?.convolve(&v.by_formula)?;
    let (f, f_closed) = (dirichlet::f_seq(n)?, dirichlet::f_closed_seq(n)?);
    let found = seq_mismatch("phi_e = 1 * cube * v", &phi, &rebuilt)
        .or_else(|| seq_mismatch("v by convolution", &v.by_formula, &v.by_convolution))
        .or_else(|| seq_mismatch("f = mu_3 * mu", &f_closed, &f));
    Ok(CheckReport::new(Suite::Lemma1, n as u64, 3 * n as u64, found))
}

/// True when every prime exponent of `n` is at least 3.
fn is_cube_full(table: &crate::PrimeTable, n: usize) -> Result<bool> {
    Ok(table.factor(n as u64)?.exponents().all(|a| a >= 3))
}

fn lemma3_suite(n: usize) -> Result<CheckReport> {
    let p_tilde = dirichlet::p_tilde_seq(n)?;
    let w = dirichlet::w_seq(n)?;
    let rebuilt = dirichlet::h_seq(n)?.convolve(&w)?;
    let mut found = seq_mismatch("P~ = h * w", &p_tilde, &rebuilt);
    if found.is_none() {
        let table = primes_up_to(n.max(2) as u64)?;
        for (m, wm) in w.iter() {
            if wm != 0 && !is_cube_full(&table, m)? {
                found = Some(mismatch(m as u64, "w vanishes off cube-full n", 0, wm));
                break;
            }
        }
    }
    Ok(CheckReport::new(Suite::Lemma3, n as u64, 2 * n as u64, found))
}

fn petermann_wu_suite(n: usize) -> Result<CheckReport> {
    // coefficient of k^{-s}: sum_{m j^2 = k} m j
    let coeffs = ArithSeq::identity(n).convolve(&ArithSeq::root_on_squares(n))?;
    let prefix = coeffs.prefix_sums()?;
    let found = (1..=n as u64)
        .into_par_iter()
        .map(|x| -> Result<Option<Counterexample>> {
            let fast = petermann_wu_sum(x)?;
            let slow = prefix[x as usize - 1];
            Ok((fast as i128 != slow).then(|| mismatch(x, "sum_{m n^2 <= x} m n", slow, fast)))
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    let first = found.into_iter().min_by_key(|c| c.n);
    Ok(CheckReport::new(Suite::PetermannWu, n as u64, n as u64, first))
}

fn maximal_suite(suite: Suite, kind: MaximalKind, k: usize) -> Result<CheckReport> {
    let report = maximal_order_report(kind, k)?;
    let found = report.first_failure.map(|k| {
        let row = &report.rows[k - 1];
        let (what, expected) = match kind {
            MaximalKind::Theorem4 => ("P~(n_k) prod p = n_k prod (p + 1)", "equal".to_string()),
            _ => ("Omega(phi_e(n_k)) = 2k", (2 * k).to_string()),
        };
        mismatch(k as u64, what, expected, row.value)
    });
    Ok(CheckReport::new(suite, k as u64, k as u64, found))
}

/// First `n` in `2..=limit` with Sandor's `phi_e(n) < phi^(e)(n)`.
pub fn sandor_dominates(limit: u64) -> Result<Option<Counterexample>> {
    let found = (2..=limit)
        .into_par_iter()
        .map(|n| -> Result<Option<Counterexample>> {
            let s = expfun::phi_e_sandor(n)?;
            let e = expfun::phi_e(&crate::factor(n)?);
            Ok((s < e).then(|| mismatch(n, "phi_e_sandor >= phi_e", format!(">= {e}"), s)))
        })
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>>>()?;
    Ok(found.into_iter().min_by_key(|c| c.n))
}
