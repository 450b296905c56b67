//! The named Euler-product constants and their on-disk cache.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use super::euler::{
    euler_product, ConstantResult, EulerProductSpec, LocalContext, LocalSeries, DEFAULT_A_MAX, DEFAULT_P_MAX,
};
use super::real::{Real, WORKING_BITS};
use super::zeta::zeta_one_third;
use crate::dirichlet::v_prime_power;
use crate::expfun::{divisors_u64, exponent_is_k_free, phi_exponent};
use crate::{Error, Result};

/// Local series with denominators above this fall back to the crude tail bound.
pub const MAX_SERIES_DEN: u64 = 24;

/// A positive rational exponent, parsed from `1`, `0.75` or `2/3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent(Ratio<u64>);

impl Exponent {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num == 0 {
            return Err(Error::Domain(format!("exponent {num}/{den} must be positive")));
        }
        Ok(Self(Ratio::new(num, den)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn to_real(&self) -> Real {
        Real::ratio(self.numer() as i128, self.denom() as i128)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("not a positive rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            return Self::new(n.trim().parse().map_err(|_| bad())?, d.trim().parse().map_err(|_| bad())?);
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if frac_part.len() > 12 || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let scale = 10u64.pow(frac_part.len() as u32);
        let int: u64 = if int_part.is_empty() { 0 } else { int_part.parse().map_err(|_| bad())? };
        let frac: u64 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| bad())? };
        let num = int.checked_mul(scale).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
        Self::new(num, scale)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstantName {
    C1,
    C2,
    C3(Exponent),
    C4,
    C5,
    /// `D_k`, `k >= 2`.
    D(u32),
}

impl ConstantName {
    /// Parses `C1`, `C2`, `C4`, `C5`, `D<k>`; `C3` needs `u`.
    pub fn parse(name: &str, u: Option<Exponent>) -> Result<Self> {
        let upper = name.trim().to_ascii_uppercase();
        let named = match upper.as_str() {
            "C1" => Self::C1,
            "C2" => Self::C2,
            "C3" => Self::C3(u.unwrap_or(Exponent::new(1, 1)?)),
            "C4" => Self::C4,
            "C5" => Self::C5,
            other => {
                let k = other
                    .strip_prefix('D')
                    .and_then(|k| k.parse().ok())
                    .ok_or_else(|| Error::Domain(format!("unknown constant {name:?}")))?;
                Self::D(k)
            }
        };
        named.validate()?;
        Ok(named)
    }

    fn validate(&self) -> Result<()> {
        match self {
            Self::C3(u) if u.0 <= Ratio::new(1, 3) => Err(Error::Domain(format!("C3 needs u > 1/3, got {u}"))),
            Self::D(k) if !(2..=31).contains(k) => Err(Error::InvalidK(*k)),
            _ => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::C1 => "C1".into(),
            Self::C2 => "C2".into(),
            Self::C3(_) => "C3".into(),
            Self::C4 => "C4".into(),
            Self::C5 => "C5".into(),
            Self::D(k) => format!("D{k}"),
        }
    }

    /// Parameters beyond the cuts that identify the value.
    pub fn extra_params(&self) -> String {
        match self {
            Self::C3(u) => format!(";u={u}"),
            _ => String::new(),
        }
    }

    pub fn all_defaults() -> Vec<Self> {
        vec![Self::C1, Self::C2, Self::C3(Exponent::new(1, 1).unwrap()), Self::C4, Self::C5, Self::D(2), Self::D(3)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantParams {
    pub prime_cut: u64,
    pub exponent_cut: u32,
}

impl Default for ConstantParams {
    fn default() -> Self {
        Self { prime_cut: DEFAULT_P_MAX, exponent_cut: DEFAULT_A_MAX }
    }
}

impl ConstantParams {
    pub fn doubled(&self) -> Self {
        Self { prime_cut: 2 * self.prime_cut, exponent_cut: 2 * self.exponent_cut }
    }
}

fn integer_series(den: u32, start: u32, coeff: impl Fn(u32) -> i64 + Send + Sync + 'static) -> LocalSeries {
    LocalSeries::new(den, move |n| {
        (0..=n)
            .map(|j| match j {
                0 => Real::one(),
                j if (j as u32) < start => Real::zero(),
                j => Real::from_i64(coeff(j as u32)),
            })
            .collect()
    })
}

fn simple_spec(
    name: &str,
    start: u32,
    den: u32,
    growth: f64,
    coeff: impl Fn(u32) -> i64 + Send + Sync + Clone + 'static,
) -> EulerProductSpec {
    let c = coeff.clone();
    EulerProductSpec::new(name, start, (1, den), growth, move |ctx, a| {
        let k = c(a);
        if k == 0 {
            Real::zero()
        } else {
            Real::from_i64(k) * ctx.r_pow(a as usize)
        }
    })
    .with_series(integer_series(den, start, coeff))
}

fn phi(a: u32) -> i64 {
    phi_exponent(a as u64) as i64
}

/// `f^u` for a power series with `f_0 = 1`, through degree `n`:
/// `n h_n = sum_{k=1}^n ((u+1) k - n) f_k h_{n-k}`.
fn series_pow(f: &[Real], u: &Real, n: usize) -> Vec<Real> {
    let mut h = vec![Real::zero(); n + 1];
    h[0] = Real::one();
    let u1 = u + Real::one();
    for m in 1..=n {
        let mut acc = Real::zero();
        for k in 1..=m.min(f.len() - 1) {
            if f[k].is_zero() {
                continue;
            }
            acc = acc + (&u1 * Real::from_u64(k as u64) - Real::from_u64(m as u64)) * &f[k] * &h[m - k];
        }
        h[m] = acc / Real::from_u64(m as u64);
    }
    h
}

/// `rho_a = sigma~(p^a) / p^a = sum_{c < a, (c, a) = 1} r^{a - c}` for `a >= 2`.
fn rho(ctx: &LocalContext, a: u32) -> Real {
    if a <= 1 {
        return Real::one();
    }
    (1..a).filter(|c| c.gcd(&a) == 1).map(|c| ctx.r_pow((a - c) as usize).clone()).sum()
}

fn c3_spec(u: Exponent) -> EulerProductSpec {
    let u_real = u.to_real();
    let int_u = (u.denom() == 1).then(|| u.numer());
    let powu = move |x: Real| -> Real {
        match int_u {
            Some(k) => x.powi(k),
            None => x.pow(&u_real),
        }
    };
    // t(p, a) = p^{-a} (rho_a^u - rho_{a-1}^u)
    let mut spec = EulerProductSpec::new("C3", 2, (1, 1), 1.0, move |ctx, a| {
        ctx.r_pow(a as usize) * (powu(rho(ctx, a)) - powu(rho(ctx, a - 1)))
    });
    if u.denom() <= MAX_SERIES_DEN {
        spec = spec.with_series(c3_series(u));
    }
    spec
}

/// C3's local factor in `Y = p^{-1/q}` for `u = r/q`. With `X = Y^q = 1/p`,
/// `rho_a = X (1 + R_a(X))` where `R_a = sum_{c <= a-2, (c,a)=1} X^{a-1-c}`,
/// so `rho_a^u = Y^r (1 + R_a)^u` for `a >= 2`.
fn c3_series(u: Exponent) -> LocalSeries {
    let q = u.denom() as usize;
    let r = u.numer() as usize;
    LocalSeries::new(q as u32, move |n| {
        let u_real = u.to_real();
        let mut g = vec![Real::zero(); n + 1];
        g[0] = Real::one();
        let powered = |a: usize, degree: usize| -> Vec<Real> {
            let mut f = vec![Real::zero(); a.max(2)];
            for c in 1..=a.saturating_sub(2) {
                if c.gcd(&a) == 1 {
                    f[a - 1 - c] = Real::one();
                }
            }
            series_pow(&f, &u_real, degree)
        };
        let mut a = 2usize;
        while q * a <= n {
            let base = q * a;
            // - rho_{a-1}^u, which is 1 at a = 2
            if a == 2 {
                g[base] = &g[base] - Real::one();
            }
            if base + r <= n {
                let degree = (n - base - r) / q;
                let plus = powered(a, degree);
                for (i, c) in plus.iter().enumerate() {
                    let e = base + r + q * i;
                    g[e] = &g[e] + c;
                }
                if a > 2 {
                    let minus = powered(a - 1, degree);
                    for (i, c) in minus.iter().enumerate() {
                        let e = base + r + q * i;
                        g[e] = &g[e] - c;
                    }
                }
            }
            a += 1;
        }
        g
    })
}

/// `t(p, a) = (P~(p^a) - p P~(p^{a-1})) / p^{2a}`, expanded in `r = 1/p`.
/// The two leading `r^a` terms cancel exactly.
fn c4_spec() -> EulerProductSpec {
    let local = |ctx: &LocalContext, a: u32| {
        let a = a as u64;
        let plus: Real = divisors_u64(a)
            .into_iter()
            .map(|d| Real::from_u64(phi_exponent(a / d)) * ctx.r_pow((2 * a - d) as usize))
            .sum();
        let minus: Real = divisors_u64(a - 1)
            .into_iter()
            .map(|d| Real::from_u64(phi_exponent((a - 1) / d)) * ctx.r_pow((2 * a - 1 - d) as usize))
            .sum();
        plus - minus
    };
    let series = LocalSeries::new(1, |n| {
        let mut g = vec![0i64; n + 1];
        g[0] = 1;
        for a in 2..=n as u64 {
            for d in divisors_u64(a) {
                if let Some(slot) = g.get_mut((2 * a - d) as usize) {
                    *slot += phi_exponent(a / d) as i64;
                }
            }
            for d in divisors_u64(a - 1) {
                if let Some(slot) = g.get_mut((2 * a - 1 - d) as usize) {
                    *slot -= phi_exponent((a - 1) / d) as i64;
                }
            }
        }
        g.into_iter().map(Real::from_i64).collect()
    });
    EulerProductSpec::new("C4", 2, (1, 1), 2.0, local).with_power_span(2).with_series(series)
}

/// The Euler product behind a named constant, without its prefactor.
pub fn constant_spec(name: &ConstantName, params: &ConstantParams) -> Result<EulerProductSpec> {
    name.validate()?;
    let spec = match name {
        ConstantName::C1 => simple_spec("C1", 3, 1, 1.0, |a| phi(a) - phi(a - 1)),
        ConstantName::C2 => simple_spec("C2", 5, 3, 4.0, |a| v_prime_power(a) as i64),
        ConstantName::C3(u) => c3_spec(*u),
        ConstantName::C4 => c4_spec(),
        ConstantName::C5 => simple_spec("C5", 3, 1, 1.0, |k| phi(k) - 1),
        ConstantName::D(k) => {
            let k = *k;
            simple_spec(&format!("D{k}"), 1 << k, 1, 1.0, move |a| {
                exponent_is_k_free(a, k) as i64 - exponent_is_k_free(a - 1, k) as i64
            })
        }
    };
    Ok(spec.with_cuts(params.prime_cut, params.exponent_cut))
}

/// Prefactor in front of the product: `zeta(1/3)` for C2, `1/(u+1)` for
/// C3, `1/2` for C4.
pub fn prefactor(name: &ConstantName) -> Result<Real> {
    Ok(match name {
        ConstantName::C2 => zeta_one_third()?,
        ConstantName::C3(u) => (u.to_real() + Real::one()).recip(),
        ConstantName::C4 => Real::ratio(1, 2),
        _ => Real::one(),
    })
}

pub fn named_constant(name: &ConstantName, params: &ConstantParams) -> Result<ConstantResult> {
    let spec = constant_spec(name, params)?;
    let mut result = euler_product(&spec)?.scaled(&prefactor(name)?);
    result.name = name.label();
    result.params = format!("{}{}", result.params, name.extra_params());
    Ok(result)
}

pub const CACHE_HEADER: &str = "# expdiv constants v1";

/// Text cache of constants: one `name, params, value, error_bound` line each.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConstantsCache {
    entries: BTreeMap<(String, String), (String, String)>,
}

impl ConstantsCache {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        match lines.next() {
            Some(h) if h.trim() == CACHE_HEADER => {}
            other => return Err(Error::Cache(format!("missing header, found {other:?}"))),
        }
        let mut entries = BTreeMap::new();
        for (i, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with("name,") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(Error::Cache(format!("line {}: expected 4 fields", i + 2)));
            }
            for f in &fields[2..] {
                Real::parse(f).map_err(|_| Error::Cache(format!("line {}: bad number {f:?}", i + 2)))?;
            }
            entries.insert((fields[0].into(), fields[1].into()), (fields[2].into(), fields[3].into()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        match std::fs::read_to_string(path) {
            Ok(text) => Self::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!("{CACHE_HEADER}\nname, params, value, error_bound\n");
        for ((name, params), (value, err)) in &self.entries {
            out.push_str(&format!("{name}, {params}, {value}, {err}\n"));
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }

    pub fn insert(&mut self, r: &ConstantResult) {
        self.entries.insert((r.name.clone(), r.params.clone()), (r.value.to_sci(60), r.error_bound.to_sci(3)));
    }

    pub fn get(&self, name: &ConstantName, params: &ConstantParams) -> Option<ConstantResult> {
        let key = (name.label(), format!("P={};A={}{}", params.prime_cut, params.exponent_cut, name.extra_params()));
        let (value, err) = self.entries.get(&key)?;
        Some(ConstantResult {
            name: key.0,
            params: key.1,
            value: Real::parse(value).ok()?,
            error_bound: Real::parse(err).ok()?,
            prime_cut: params.prime_cut,
            exponent_cut: params.exponent_cut,
            max_exponent_used: 0,
            precision_bits: WORKING_BITS,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> ConstantParams {
        ConstantParams { prime_cut: 1000, exponent_cut: 1024 }
    }

    #[test]
    fn exponent_parsing() {
        assert_eq!("1".parse::<Exponent>().unwrap(), Exponent::new(1, 1).unwrap());
        assert_eq!("1.0".parse::<Exponent>().unwrap(), Exponent::new(1, 1).unwrap());
        assert_eq!("0.75".parse::<Exponent>().unwrap(), Exponent::new(3, 4).unwrap());
        assert_eq!("2/6".parse::<Exponent>().unwrap().to_string(), "1/3");
        assert!("-1".parse::<Exponent>().is_err());
        assert!("0".parse::<Exponent>().is_err());
    }

    #[test]
    fn domain_checks() {
        assert!(ConstantName::parse("C3", Some("0.2".parse().unwrap())).is_err());
        assert!(ConstantName::parse("C3", Some("1/3".parse().unwrap())).is_err());
        assert!(ConstantName::parse("C3", Some("0.34".parse().unwrap())).is_ok());
        assert!(matches!(ConstantName::parse("D1", None), Err(Error::InvalidK(1))));
        assert_eq!(ConstantName::parse("d2", None).unwrap(), ConstantName::D(2));
        assert!(ConstantName::parse("C9", None).is_err());
    }

    #[test]
    fn c3_local_term_at_two() {
        // ((sigma~(p^2))^u - p^u sigma~(p)^u) / p^{2(u+1)} = (p^u - p^{2u}) / p^{2(u+1)}
        for u in ["1", "0.5", "2"] {
            let u: Exponent = u.parse().unwrap();
            let spec = constant_spec(&ConstantName::C3(u), &quick()).unwrap();
            let p = 7u64;
            let (pf, uf) = (p as f64, u.to_f64());
            let expected = (pf.powf(uf) - pf.powf(2.0 * uf)) / pf.powf(2.0 * (uf + 1.0));
            let ctx = LocalContext::new(p, &Real::from_u64(p).recip(), 8);
            let got = spec.eval_local(&ctx, 2).to_f64();
            assert!(expected < 0.0);
            assert!((got - expected).abs() < 1e-15 * expected.abs(), "{got} {expected}");
        }
    }

    #[test]
    fn series_match_direct_local_factors() {
        // Evaluating the local series at Y = p^{-1/den} must reproduce F_p.
        let names = vec![
            ConstantName::C1,
            ConstantName::C2,
            ConstantName::C3("1".parse().unwrap()),
            ConstantName::C3("0.75".parse().unwrap()),
            ConstantName::C3("2".parse().unwrap()),
            ConstantName::C4,
            ConstantName::C5,
            ConstantName::D(2),
        ];
        for name in names {
            let spec = constant_spec(&name, &quick()).unwrap();
            let series = spec.series.clone().unwrap();
            let g = series.coefficients(60 * series.den as usize);
            for p in [101u64, 997] {
                let (direct, _, _) = spec.local_factor(p).unwrap();
                let y = (-(Real::from_u64(p).ln() / Real::from_u64(series.den as u64))).exp();
                let mut pw = Real::one();
                let mut via_series = Real::zero();
                for c in &g {
                    via_series = via_series + c * &pw;
                    pw = pw * &y;
                }
                let gap = (&direct - &via_series).abs().to_f64();
                assert!(gap < 1e-40, "{name:?} at {p}: gap {gap}");
            }
        }
    }

    #[test]
    fn local_factor_directions() {
        // C1, C2, C4, C5 factors exceed 1; C3(1) and D_k factors are below 1.
        let above = [ConstantName::C1, ConstantName::C2, ConstantName::C4, ConstantName::C5];
        let below = [ConstantName::C3("1".parse().unwrap()), ConstantName::D(2), ConstantName::D(3)];
        for p in [2u64, 3, 5, 7, 11, 101, 997] {
            for name in &above {
                let (f, _, _) = constant_spec(name, &quick()).unwrap().local_factor(p).unwrap();
                assert!(f > Real::one() && f < Real::from_u64(2), "{name:?} at {p}: {f:.6}");
            }
            for name in &below {
                let (f, _, _) = constant_spec(name, &quick()).unwrap().local_factor(p).unwrap();
                assert!(f < Real::one() && !f.is_negative(), "{name:?} at {p}: {f:.6}");
            }
        }
    }

    #[test]
    fn v_growth_bound_used_for_c2() {
        for a in 1..=10_000u32 {
            assert!((v_prime_power(a).unsigned_abs() as f64) < 4.0 * a as f64);
        }
    }

    #[test]
    fn d2_first_defect() {
        // F_p = 1 - p^{-4} + p^{-5} - ..., so
        // 1 - exp(-sum (p^{-4} - p^{-5})) < 1 - D_2 < sum p^{-4}.
        let d2 = named_constant(&ConstantName::D(2), &quick()).unwrap();
        let v = d2.value.to_f64();
        assert!(v > 0.0 && v < 1.0);
        let primes = crate::arith::first_primes(5000);
        let p4: f64 = primes.iter().map(|&p| (p as f64).powi(-4)).sum();
        let p45: f64 = primes.iter().map(|&p| (p as f64).powi(-4) - (p as f64).powi(-5)).sum();
        assert!(1.0 - v < p4, "{v} {p4}");
        assert!(1.0 - v > 1.0 - (-p45).exp(), "{v} {p45}");
    }

    #[test]
    fn c2_is_negative_and_scaled() {
        let c2 = named_constant(&ConstantName::C2, &quick()).unwrap();
        assert!(c2.value.is_negative());
        let bare = euler_product(&constant_spec(&ConstantName::C2, &quick()).unwrap()).unwrap();
        let z = zeta_one_third().unwrap();
        assert!((&bare.value * &z - &c2.value).abs().is_zero());
        assert!(c2.error_bound < Real::parse("1e-30").unwrap(), "{}", c2.error_bound.to_sci(3));
    }

    #[test]
    fn c1_equals_zeta3_times_v1() {
        // Residue form: C1 = zeta(3) prod_p (1 + sum_{a >= 5} v(a) p^{-a}).
        let v1 = EulerProductSpec::new("V(1)", 5, (1, 1), 4.0, |ctx, a| {
            Real::from_i64(v_prime_power(a) as i64) * ctx.r_pow(a as usize)
        })
        .with_series(integer_series(1, 5, |a| v_prime_power(a) as i64))
        .with_cuts(1000, 1024);
        let v1 = euler_product(&v1).unwrap();
        let z3 = crate::analysis::zeta::zeta_real(&Real::from_u64(3), 1e-12).unwrap();
        let c1 = named_constant(&ConstantName::C1, &quick()).unwrap();
        let gap = (&z3 * &v1.value - &c1.value).abs();
        assert!(gap < Real::parse("1e-40").unwrap(), "gap {}", gap.to_sci(3));
    }

    #[test]
    fn doubling_moves_less_than_bound() {
        for name in [ConstantName::C1, ConstantName::C5] {
            let a = named_constant(&name, &quick()).unwrap();
            let b = named_constant(&name, &quick().doubled()).unwrap();
            assert!((&a.value - &b.value).abs() < a.error_bound, "{name:?}: {} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn cache_roundtrip() {
        let r = named_constant(&ConstantName::D(3), &quick()).unwrap();
        let mut cache = ConstantsCache::default();
        cache.insert(&r);
        let text = cache.render();
        assert!(text.starts_with(CACHE_HEADER));
        let again = ConstantsCache::parse(&text).unwrap();
        assert_eq!(again, cache);
        let got = again.get(&ConstantName::D(3), &quick()).unwrap();
        assert_eq!(got.value.to_sci(50), r.value.to_sci(50));
        assert!(again.get(&ConstantName::D(2), &quick()).is_none());
        assert!(ConstantsCache::parse("garbage").is_err());
        assert!(ConstantsCache::parse(&format!("{CACHE_HEADER}\nC1, P=1, x, 1\n")).is_err());
    }
}
