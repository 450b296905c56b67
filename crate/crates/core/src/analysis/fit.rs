//! Residuals of summatory functions against predicted main terms.

use serde::Serialize;

use super::li::li;
use super::real::Real;
use crate::sieve::SummatoryGrid;
use crate::{Error, Result};

pub const MIN_FIT_POINTS: usize = 8;
pub const MIN_FIT_DECADES: f64 = 3.0;
pub const EXPONENT_SLACK: f64 = 0.1;

/// A predicted main term and the exponent its error term is claimed to have.
pub trait MainTerm {
    fn label(&self) -> String;
    fn eval(&self, x: u64) -> Real;
    fn claimed_exponent(&self) -> f64;
    /// Residuals are divided by this before fitting.
    fn normalization(&self, _x: u64) -> f64 {
        1.0
    }
}

#[derive(Debug, Clone)]
pub enum Term {
    /// `c x^e`
    Power { coeff: Real, exponent: Real },
    /// `c li(x)`
    Li { coeff: Real },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Normalization {
    None,
    /// `x (ln x)^k`
    XLogPower(f64),
}

/// Sum of power and `li` terms.
#[derive(Debug, Clone)]
pub struct MainModel {
    pub label: String,
    pub terms: Vec<Term>,
    pub claimed: f64,
    pub normalization: Normalization,
}

impl MainModel {
    pub fn new(label: impl Into<String>, claimed: f64) -> Self {
        Self { label: label.into(), terms: Vec::new(), claimed, normalization: Normalization::None }
    }

    pub fn power(mut self, coeff: Real, exponent: Real) -> Self {
        self.terms.push(Term::Power { coeff, exponent });
        self
    }

    pub fn li(mut self, coeff: Real) -> Self {
        self.terms.push(Term::Li { coeff });
        self
    }

    pub fn normalized(mut self, n: Normalization) -> Self {
        self.normalization = n;
        self
    }
}

impl MainTerm for MainModel {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn eval(&self, x: u64) -> Real {
        let xr = Real::from_u64(x);
        let ln_x = xr.ln();
        self.terms
            .iter()
            .map(|t| match t {
                Term::Power { coeff, exponent } => coeff * (exponent * &ln_x).exp(),
                Term::Li { coeff } => coeff * li(&xr).expect("li needs x >= 2"),
            })
            .sum()
    }

    fn claimed_exponent(&self) -> f64 {
        self.claimed
    }

    fn normalization(&self, x: u64) -> f64 {
        match self.normalization {
            Normalization::None => 1.0,
            Normalization::XLogPower(k) => x as f64 * (x as f64).ln().powf(k),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FitPoint {
    pub x: u64,
    #[serde(serialize_with = "ser_u128")]
    pub sum: u128,
    #[serde(serialize_with = "ser_real")]
    pub main: Real,
    #[serde(serialize_with = "ser_real")]
    pub residual: Real,
    #[serde(serialize_with = "ser_real")]
    pub ratio: Real,
    /// `|residual| / normalization(x)`.
    pub normalized: f64,
}

fn ser_real<S: serde::Serializer>(r: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_sci(20))
}

fn ser_u128<S: serde::Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub label: String,
    pub model: String,
    pub points: Vec<FitPoint>,
    /// Least-squares slope of `ln |r|` against `ln x`; `None` when fewer
    /// than two residuals are nonzero.
    pub fitted_exponent: Option<f64>,
    pub claimed_exponent: f64,
    pub threshold: f64,
    pub degenerate: bool,
    pub verdict: bool,
}

impl FitReport {
    /// Re-judges against a different threshold.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.verdict = self.fitted_exponent.is_none_or(|e| e <= threshold);
        self
    }
}

/// Ordinary least-squares slope through `(x_i, y_i)`.
pub fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Residuals `S(x) - main(x)` and the slope of `ln |r|` against `ln x`.
pub fn residual_fit(grid: &SummatoryGrid, model: &dyn MainTerm) -> Result<FitReport> {
    let got = grid.points.len();
    let (lo, hi) = match (grid.points.first(), grid.points.last()) {
        (Some(a), Some(b)) => (a.x as f64, b.x as f64),
        _ => (1.0, 1.0),
    };
    let span = (hi / lo).log10();
    if got < MIN_FIT_POINTS || span < MIN_FIT_DECADES - 1e-9 {
        return Err(Error::InsufficientGrid { need: MIN_FIT_POINTS, decades: MIN_FIT_DECADES, got, span });
    }
    let points: Vec<FitPoint> = grid
        .points
        .iter()
        .map(|pt| {
            let s = Real::from_u128(pt.sum);
            let main = model.eval(pt.x);
            let residual = &s - &main;
            let ratio = if main.is_zero() { Real::zero() } else { &s / &main };
            let normalized = residual.abs().to_f64() / model.normalization(pt.x);
            FitPoint { x: pt.x, sum: pt.sum, main, residual, ratio, normalized }
        })
        .collect();
    let samples: Vec<(f64, f64)> =
        points.iter().filter(|p| p.normalized > 0.0).map(|p| ((p.x as f64).ln(), p.normalized.ln())).collect();
    let fitted = least_squares_slope(&samples);
    let claimed = model.claimed_exponent();
    let threshold = claimed + EXPONENT_SLACK;
    Ok(FitReport {
        label: grid.label.clone(),
        model: model.label(),
        points,
        fitted_exponent: fitted,
        claimed_exponent: claimed,
        threshold,
        degenerate: fitted.is_none(),
        verdict: fitted.is_none_or(|e| e <= threshold),
    })
}
