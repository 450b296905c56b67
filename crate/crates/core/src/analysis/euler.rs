//! Euler products `prod_p F_p` with controlled truncation error.
//!
//! The head runs over `p <= P_max`, each local factor truncated at the first
//! exponent whose geometric tail bound drops below the target (capped at
//! `A_max`). Primes above `P_max` are handled in one of two ways:
//!
//! * If the local factor is a fixed power series `G(Y)` in `Y = p^{-1/den}`,
//!   then `sum_{p > P} ln G(p^{-1/den}) = sum_j l_j P_>(j/den)` where `l_j`
//!   are the coefficients of `ln G` and `P_>(s) = sum_{p > P} p^{-s}`. The
//!   prime tails come from `ln zeta` by Moebius inversion, with the primes
//!   up to `P` divided out.
//! * Otherwise the tail contributes nothing to the value and a bound
//!   `2 K' P^{1 - alpha} / (alpha - 1)` to the error.

use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::real::{Real, WORKING_BITS};
use super::zeta::zeta_euler_maclaurin;
use crate::arith::{mobius, primes_up_to};
use crate::{Error, Result};

/// Decimal digits the truncation targets aim for.
pub const TARGET_DIGITS: u32 = 70;
pub const DEFAULT_P_MAX: u64 = 10_000;
pub const DEFAULT_A_MAX: u32 = 1024;
pub const P_MAX_CAP: u64 = 10_000_000;
/// Primes per parallel work unit; partial products merge left to right.
const CHUNK: usize = 64;

/// Powers of `r = p^{-theta}` at one prime.
pub struct LocalContext {
    pub p: u64,
    powers: Vec<Real>,
}

impl LocalContext {
    /// Powers `r^0, ..., r^top`.
    pub fn new(p: u64, r: &Real, top: usize) -> Self {
        let mut powers = Vec::with_capacity(top + 1);
        powers.push(Real::one());
        for i in 1..=top {
            powers.push(&powers[i - 1] * r);
        }
        Self { p, powers }
    }

    /// `r^i`.
    pub fn r_pow(&self, i: usize) -> &Real {
        &self.powers[i]
    }
}

type LocalTerm = Arc<dyn Fn(&LocalContext, u32) -> Real + Send + Sync>;
type SeriesBuilder = Arc<dyn Fn(usize) -> Vec<Real> + Send + Sync>;

/// The local factor written as `1 + sum_{j >= 1} g_j Y^j`, `Y = p^{-1/den}`,
/// with `g_j` independent of `p`.
#[derive(Clone)]
pub struct LocalSeries {
    pub den: u32,
    builder: SeriesBuilder,
}

impl LocalSeries {
    /// `builder(n)` returns `g_0, ..., g_n` with `g_0 = 1`.
    pub fn new(den: u32, builder: impl Fn(usize) -> Vec<Real> + Send + Sync + 'static) -> Self {
        Self { den, builder: Arc::new(builder) }
    }

    pub fn coefficients(&self, n: usize) -> Vec<Real> {
        (self.builder)(n)
    }
}

/// `F_p = 1 + sum_{a >= a0} t(p, a)` with `|t(p, a)| <= K a r^a`,
/// `r = p^{-theta}`.
#[derive(Clone)]
pub struct EulerProductSpec {
    pub name: String,
    local: LocalTerm,
    pub start_exponent: u32,
    /// `theta = num / den`.
    pub theta: (u32, u32),
    /// `K` in the coefficient bound.
    pub growth: f64,
    /// Term `a` may read powers of `r` up to `span * a`.
    pub power_span: u32,
    pub exponent_cut: u32,
    pub prime_cut: u64,
    pub series: Option<LocalSeries>,
}

impl EulerProductSpec {
    pub fn new(
        name: impl Into<String>,
        start_exponent: u32,
        theta: (u32, u32),
        growth: f64,
        local: impl Fn(&LocalContext, u32) -> Real + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            local: Arc::new(local),
            start_exponent,
            theta,
            growth,
            power_span: 1,
            exponent_cut: DEFAULT_A_MAX,
            prime_cut: DEFAULT_P_MAX,
            series: None,
        }
    }

    pub fn with_cuts(mut self, prime_cut: u64, exponent_cut: u32) -> Self {
        self.prime_cut = prime_cut;
        self.exponent_cut = exponent_cut;
        self
    }

    pub fn with_series(mut self, series: LocalSeries) -> Self {
        self.series = Some(series);
        self
    }

    pub fn with_power_span(mut self, span: u32) -> Self {
        self.power_span = span;
        self
    }

    /// The term `t(p, a)`.
    pub fn eval_local(&self, ctx: &LocalContext, a: u32) -> Real {
        (self.local)(ctx, a)
    }

    fn theta_f64(&self) -> f64 {
        self.theta.0 as f64 / self.theta.1 as f64
    }

    /// Decay rate of `|F_p - 1|` in `p`: `theta * a0`.
    pub fn tail_exponent(&self) -> f64 {
        self.theta_f64() * self.start_exponent as f64
    }

    /// `K (A+1) r^{A+1} / (1-r)^2`, which dominates `sum_{a > A} K a r^a`.
    fn exponent_tail_bound(&self, rf: f64, last: u32) -> f64 {
        if self.growth == 0.0 {
            return 0.0;
        }
        let next = last as f64 + 1.0;
        self.growth * next * rf.powf(next) / (1.0 - rf).powi(2)
    }

    fn exponent_cut_for(&self, rf: f64) -> u32 {
        let target = 10f64.powi(-(TARGET_DIGITS as i32) - 5);
        let a0 = self.start_exponent;
        if self.growth == 0.0 || self.exponent_cut < a0 {
            return a0.saturating_sub(1).min(self.exponent_cut);
        }
        let mut a = a0;
        while a < self.exponent_cut && self.exponent_tail_bound(rf, a) >= target {
            a += 1;
        }
        a
    }

    /// `F_p` truncated at the adaptive exponent cut, with its truncation
    /// bound and the cut used.
    pub fn local_factor(&self, p: u64) -> Result<(Real, f64, u32)> {
        let rf = (p as f64).powf(-self.theta_f64());
        let cut = self.exponent_cut_for(rf);
        let mut total = Real::one();
        if cut >= self.start_exponent {
            let (num, den) = self.theta;
            let r = if num == den {
                Real::from_u64(p).recip()
            } else {
                (Real::from_u64(p).ln() * Real::ratio(-(num as i128), den as i128)).exp()
            };
            let ctx = LocalContext::new(p, &r, (self.power_span * cut) as usize + 1);
            for a in self.start_exponent..=cut {
                total = total + (self.local)(&ctx, a);
            }
        }
        if !total.is_finite() || total.is_negative() || total.is_zero() {
            return Err(Error::NonPositiveFactor(p));
        }
        Ok((total, self.exponent_tail_bound(rf, cut), cut))
    }
}

/// A constant with its error bound and the cuts that produced it.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantResult {
    pub name: String,
    pub params: String,
    #[serde(serialize_with = "ser_real")]
    pub value: Real,
    #[serde(serialize_with = "ser_real")]
    pub error_bound: Real,
    pub prime_cut: u64,
    pub exponent_cut: u32,
    /// Largest exponent any local factor actually used.
    pub max_exponent_used: u32,
    pub precision_bits: usize,
}

fn ser_real<S: serde::Serializer>(r: &Real, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_sci(60))
}

impl ConstantResult {
    /// Multiplies by an exact-enough prefactor.
    pub fn scaled(mut self, factor: &Real) -> Self {
        self.value = &self.value * factor;
        self.error_bound = &self.error_bound * factor.abs();
        self
    }
}

/// `ln G` from `G = 1 + sum g_j Y^j`: `l_j = g_j - (1/j) sum_{i<j} i l_i g_{j-i}`.
pub fn log_series(g: &[Real]) -> Vec<Real> {
    let mut l = vec![Real::zero(); g.len()];
    for j in 1..g.len() {
        let mut acc = Real::zero();
        for i in 1..j {
            if !l[i].is_zero() && !g[j - i].is_zero() {
                acc = acc + Real::from_u64(i as u64) * &l[i] * &g[j - i];
            }
        }
        l[j] = &g[j] - acc / Real::from_u64(j as u64);
    }
    l
}

/// `ln zeta_{>P}(m / den)` for `m = 0..=m_max` (entries with `m <= den` are
/// unused and left zero), where `zeta_{>P}(s) = zeta(s) prod_{p <= P}(1 - p^{-s})`.
fn tail_zeta_logs(primes: &[u32], den: u32, m_max: usize) -> Result<Vec<Real>> {
    let den_real = Real::from_u64(den as u64);
    let partials: Vec<Vec<Real>> = primes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut prod = vec![Real::one(); m_max + 1];
            for &p in chunk {
                let y = (-(Real::from_u64(p as u64).ln() / &den_real)).exp();
                let mut pw = Real::one();
                for slot in prod.iter_mut().skip(1) {
                    pw = pw * &y;
                    *slot = &*slot * (Real::one() - &pw);
                }
            }
            prod
        })
        .collect();
    let mut prod = vec![Real::one(); m_max + 1];
    for part in partials {
        for (acc, v) in prod.iter_mut().zip(part) {
            *acc = &*acc * v;
        }
    }
    let first = den as usize + 1;
    let logs: Vec<Real> = (first..=m_max)
        .into_par_iter()
        .map(|m| {
            let s = Real::ratio(m as i128, den as i128);
            Ok((zeta_euler_maclaurin(&s)? * &prod[m]).ln())
        })
        .collect::<Result<_>>()?;
    let mut out = vec![Real::zero(); m_max + 1];
    for (m, v) in (first..=m_max).zip(logs) {
        out[m] = v;
    }
    Ok(out)
}

/// Tail `sum_{p > P} ln F_p` from the local series, with an error estimate.
fn series_tail(series: &LocalSeries, primes: &[u32], p_cut: u64) -> Result<(Real, f64)> {
    let den = series.den as usize;
    let log10_p = (p_cut as f64).log10();
    let m_max = (den as f64 * (1.0 + TARGET_DIGITS as f64 / log10_p)).ceil() as usize;
    let n = m_max + den;
    let g = series.coefficients(n);
    let l = log_series(&g);
    let negligible = Real::parse("1e-60").expect("literal");
    for (j, lj) in l.iter().enumerate().take(den + 1).skip(1) {
        if lj.abs() > negligible {
            return Err(Error::NonSummableTail(j as f64 / den as f64));
        }
    }
    let lz = tail_zeta_logs(primes, series.den, m_max)?;
    let pf = p_cut as f64;
    // sum_{n > P} n^{-s} <= P^{1-s} / (s - 1)
    let tail_bound = |s: f64| pf.powf(1.0 - s) / (s - 1.0);

    let mut total = Real::zero();
    let mut err = 0.0;
    for j in den + 1..=m_max {
        if l[j].is_zero() {
            continue;
        }
        let mut prime_tail = Real::zero();
        let mut k = 1;
        while k * j <= m_max {
            let mu = mobius(k as u64)?;
            if mu != 0 {
                prime_tail = prime_tail + Real::from_i64(mu as i64) * &lz[k * j] / Real::from_u64(k as u64);
            }
            k += 1;
        }
        total = total + &l[j] * prime_tail;
        // Moebius terms with k j > m_max: |ln zeta_{>P}(s)| <= 2 P^{1-s}/(s-1).
        let s_cut = (k * j) as f64 / den as f64;
        err += l[j].abs().to_f64() * 2.0 * tail_bound(s_cut) * 2.0;
    }
    // The first omitted block of log coefficients, doubled for the rest.
    for (j, lj) in l.iter().enumerate().skip(m_max + 1) {
        err += 2.0 * lj.abs().to_f64() * tail_bound(j as f64 / den as f64);
    }
    Ok((total, err))
}

/// Bound on `sum_{p > P} |ln F_p|` from `|F_p - 1| <= K' p^{-alpha}`.
fn crude_tail_bound(spec: &EulerProductSpec) -> Result<f64> {
    if spec.growth == 0.0 {
        return Ok(0.0);
    }
    let alpha = spec.tail_exponent();
    let pf = spec.prime_cut as f64;
    let rf = pf.powf(-spec.theta_f64());
    let k = spec.growth * (spec.start_exponent as f64 + 1.0) / (1.0 - rf).powi(2);
    if k * pf.powf(-alpha) > 0.5 {
        return Err(Error::Domain(format!(
            "prime cut {} too small for the tail bound of {}",
            spec.prime_cut, spec.name
        )));
    }
    Ok(2.0 * k * pf.powf(1.0 - alpha) / (alpha - 1.0))
}

/// `prod_p F_p` with a bound covering exponent truncation, the prime tail and
/// rounding.
pub fn euler_product(spec: &EulerProductSpec) -> Result<ConstantResult> {
    let alpha = spec.tail_exponent();
    if spec.growth > 0.0 && alpha <= 1.0 {
        return Err(Error::NonSummableTail(alpha));
    }
    if spec.prime_cut < 2 || spec.prime_cut > P_MAX_CAP {
        return Err(Error::CapExceeded { what: "prime cut", n: spec.prime_cut, cap: P_MAX_CAP });
    }
    let table = primes_up_to(spec.prime_cut)?;
    let primes = table.primes();

    let chunks: Vec<(Real, f64, u32)> = primes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut prod = Real::one();
            let mut rel = 0.0;
            let mut used = 0;
            for &p in chunk {
                let (f, bound, cut) = spec.local_factor(p as u64)?;
                rel += bound / f.to_f64();
                used = used.max(cut);
                prod = prod * f;
            }
            Ok((prod, rel, used))
        })
        .collect::<Result<_>>()?;
    let mut head = Real::one();
    let mut rel_head = 0.0;
    let mut max_used = 0;
    for (prod, rel, used) in chunks {
        head = head * prod;
        rel_head += rel;
        max_used = max_used.max(used);
    }

    let (tail_log, tail_err) = match &spec.series {
        Some(series) if spec.growth > 0.0 => series_tail(series, primes, spec.prime_cut)?,
        _ => (Real::zero(), crude_tail_bound(spec)?),
    };
    let value = head * tail_log.exp();
    let rel = (rel_head + tail_err).exp_m1() + if spec.growth > 0.0 { 1e-80 } else { 0.0 };
    let error_bound = value.abs() * Real::from_f64(rel);
    Ok(ConstantResult {
        name: spec.name.clone(),
        params: format!("P={};A={}", spec.prime_cut, spec.exponent_cut),
        value,
        error_bound,
        prime_cut: spec.prime_cut,
        exponent_cut: spec.exponent_cut,
        max_exponent_used: max_used,
        precision_bits: WORKING_BITS,
    })
}
