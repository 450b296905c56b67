//! Summatory functions paired with their predicted main terms.

use std::fmt;
use std::str::FromStr;

use super::constants::{named_constant, ConstantName, ConstantParams, Exponent};
use super::euler::ConstantResult;
use super::fit::{residual_fit, FitReport, MainModel, Normalization};
use super::real::Real;
use super::zeta::{zeta_one_third, zeta_real};
use crate::sieve::{
    petermann_wu_sum, shifted_prime_summatory, summatory_with, tau13_summatory, Grid, MultiplicativeSpec, SieveConfig,
    SummatoryGrid, SummatoryPoint,
};
use crate::{Error, Result};

/// Largest `x` accepted by the closed-form lattice sums.
pub const CLOSED_FORM_CAP: u64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitTarget {
    /// `sum phi^(e)(n)` against `C1 x + C2 x^{1/3}`.
    PhiE,
    /// `sum sigma~(n)^u` against `C3(u) x^{u+1}`.
    SigmaTilde(Exponent),
    /// `sum P~(n)` against `C4 x^2`, residual over `x (ln x)^{5/3}`.
    PTilde,
    /// `sum q_k^(e)(n)` against `D_k x`.
    KFree(u32),
    /// `sum_{p <= x} phi^(e)(p - 1)` against `C5 li(x)`.
    ShiftedPrimes,
    /// `sum_{m n^2 <= x} m n` against `zeta(3) x^2 / 2`, residual over
    /// `x (ln x)^{2/3}`.
    PetermannWu,
    /// `sum tau(1, 3, n)` against `zeta(3) x + zeta(1/3) x^{1/3}`.
    Tau13,
}

impl FitTarget {
    /// Maps the theorem numbers accepted by the command line.
    pub fn from_theorem(theorem: u32, k: u32, u: Exponent) -> Result<Self> {
        match theorem {
            1 => Ok(Self::PhiE),
            2 => Ok(Self::SigmaTilde(u)),
            3 => Ok(Self::PTilde),
            5 => {
                if !(2..=31).contains(&k) {
                    return Err(Error::InvalidK(k));
                }
                Ok(Self::KFree(k))
            }
            6 => Ok(Self::ShiftedPrimes),
            _ => Err(Error::Domain(format!("no fit for theorem {theorem}; expected 1, 2, 3, 5 or 6"))),
        }
    }

    pub fn constants(&self) -> Vec<ConstantName> {
        match self {
            Self::PhiE => vec![ConstantName::C1, ConstantName::C2],
            Self::SigmaTilde(u) => vec![ConstantName::C3(*u)],
            Self::PTilde => vec![ConstantName::C4],
            Self::KFree(k) => vec![ConstantName::D(*k)],
            Self::ShiftedPrimes => vec![ConstantName::C5],
            Self::PetermannWu | Self::Tau13 => Vec::new(),
        }
    }

    /// Exact sums at every grid point.
    pub fn sums(&self, grid: &Grid, config: &SieveConfig) -> Result<SummatoryGrid> {
        match self {
            Self::PhiE => summatory_with(&MultiplicativeSpec::phi_e(), grid, config),
            Self::SigmaTilde(u) => {
                if *u != Exponent::new(1, 1)? {
                    return Err(Error::Domain(format!("exact sums of sigma~^u need u = 1, got {u}")));
                }
                summatory_with(&MultiplicativeSpec::sigma_tilde(), grid, config)
            }
            Self::PTilde => summatory_with(&MultiplicativeSpec::p_tilde(), grid, config),
            Self::KFree(k) => summatory_with(&MultiplicativeSpec::q_e(*k)?, grid, config),
            Self::ShiftedPrimes => shifted_prime_summatory(grid, config),
            Self::PetermannWu => closed_form("petermann_wu", grid, petermann_wu_sum),
            Self::Tau13 => closed_form("tau13", grid, |x| Ok(tau13_summatory(x))),
        }
    }

    /// The main term, given the constants listed by [`FitTarget::constants`]
    /// in the same order.
    pub fn model(&self, constants: &[ConstantResult]) -> Result<MainModel> {
        let c = |i: usize| {
            constants
                .get(i)
                .map(|r| r.value.clone())
                .ok_or_else(|| Error::Domain("missing constant for main term".into()))
        };
        let third = Real::ratio(1, 3);
        Ok(match self {
            Self::PhiE => MainModel::new("C1 x + C2 x^(1/3)", 0.2).power(c(0)?, Real::one()).power(c(1)?, third),
            Self::SigmaTilde(u) => {
                let e = u.to_real() + Real::one();
                MainModel::new(format!("C3 x^({u}+1)"), u.to_f64() + 0.5).power(c(0)?, e)
            }
            Self::PTilde => MainModel::new("C4 x^2 / x (ln x)^(5/3)", 0.0)
                .power(c(0)?, Real::from_u64(2))
                .normalized(Normalization::XLogPower(5.0 / 3.0)),
            Self::KFree(k) => MainModel::new(format!("D{k} x"), 1.0 / f64::from(1u32 << k)).power(c(0)?, Real::one()),
            Self::ShiftedPrimes => MainModel::new("C5 li(x)", 1.0).li(c(0)?),
            Self::PetermannWu => {
                let half_zeta3 = zeta_real(&Real::from_u64(3), 1e-60)? / Real::from_u64(2);
                MainModel::new("zeta(3) x^2 / 2 / x (ln x)^(2/3)", 0.0)
                    .power(half_zeta3, Real::from_u64(2))
                    .normalized(Normalization::XLogPower(2.0 / 3.0))
            }
            Self::Tau13 => MainModel::new("zeta(3) x + zeta(1/3) x^(1/3)", 0.2)
                .power(zeta_real(&Real::from_u64(3), 1e-60)?, Real::one())
                .power(zeta_one_third()?, third),
        })
    }
}

impl fmt::Display for FitTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PhiE => f.write_str("phi_e"),
            Self::SigmaTilde(u) => write!(f, "sigma_tilde^{u}"),
            Self::PTilde => f.write_str("p_tilde"),
            Self::KFree(k) => write!(f, "q{k}e"),
            Self::ShiftedPrimes => f.write_str("phi_e(p-1)"),
            Self::PetermannWu => f.write_str("petermann_wu"),
            Self::Tau13 => f.write_str("tau13"),
        }
    }
}

impl FromStr for FitTarget {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "petermann_wu" => Ok(Self::PetermannWu),
            "tau13" => Ok(Self::Tau13),
            "phi_e_shifted" => Ok(Self::ShiftedPrimes),
            _ => Err(Error::Domain(format!("unknown fit target {s:?}"))),
        }
    }
}

fn closed_form(label: &'static str, grid: &Grid, f: impl Fn(u64) -> Result<u128>) -> Result<SummatoryGrid> {
    if grid.max() > CLOSED_FORM_CAP {
        return Err(Error::CapExceeded { what: label, n: grid.max(), cap: CLOSED_FORM_CAP });
    }
    let points = grid.points().iter().map(|&x| Ok(SummatoryPoint { x, sum: f(x)? })).collect::<Result<Vec<_>>>()?;
    Ok(SummatoryGrid { label: label.into(), points })
}

/// A finished fit together with the constants behind its main term.
#[derive(Debug, Clone)]
pub struct TheoremFit {
    pub report: FitReport,
    pub constants: Vec<ConstantResult>,
}

/// Sums, main term and residual fit for `target`; `constant` supplies each
/// named constant (computed or read from a cache).
pub fn fit_target(
    target: &FitTarget,
    grid: &Grid,
    config: &SieveConfig,
    constant: &mut dyn FnMut(&ConstantName) -> Result<ConstantResult>,
) -> Result<TheoremFit> {
    let sums = target.sums(grid, config)?;
    let constants = target.constants().iter().map(&mut *constant).collect::<Result<Vec<_>>>()?;
    let model = target.model(&constants)?;
    Ok(TheoremFit { report: residual_fit(&sums, &model)?, constants })
}

/// [`fit_target`] with freshly computed constants at default cuts.
pub fn fit_target_default(target: &FitTarget, grid: &Grid) -> Result<TheoremFit> {
    let params = ConstantParams::default();
    fit_target(target, grid, &SieveConfig::default(), &mut |name| named_constant(name, &params))
}
