//! Fixed-precision binary floating point for constant work.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::{Error, Result};

/// Working precision in bits, roughly 96 decimal digits.
pub const WORKING_BITS: usize = 320;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_cc<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// A real number held at [`WORKING_BITS`] of binary precision.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn zero() -> Self {
        Self::from_u64(0)
    }

    pub fn one() -> Self {
        Self::from_u64(1)
    }

    pub fn from_u64(v: u64) -> Self {
        Real(BigFloat::from_u64(v, WORKING_BITS))
    }

    pub fn from_i64(v: i64) -> Self {
        Real(BigFloat::from_i64(v, WORKING_BITS))
    }

    pub fn from_u128(v: u128) -> Self {
        Real(BigFloat::from_u128(v, WORKING_BITS))
    }

    pub fn from_i128(v: i128) -> Self {
        Real(BigFloat::from_i128(v, WORKING_BITS))
    }

    /// Exact conversion of a binary double.
    pub fn from_f64(v: f64) -> Self {
        Real(BigFloat::from_f64(v, WORKING_BITS))
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        Self::from_i128(num) / Self::from_i128(den)
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        if let Ok(small) = i128::try_from(v) {
            return Self::from_i128(small);
        }
        Self::parse(&v.to_string()).expect("integer literal parses")
    }

    pub fn from_big_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    /// Parses a decimal literal such as `-1.25e-3`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let v = with_cc(|cc| BigFloat::parse(s, Radix::Dec, WORKING_BITS, RM, cc));
        if v.is_nan() || v.is_inf() || s.is_empty() {
            return Err(Error::Domain(format!("not a decimal number: {s:?}")));
        }
        Ok(Real(v))
    }

    pub fn pi() -> Self {
        Real(with_cc(|cc| cc.pi(WORKING_BITS, RM)))
    }

    pub fn ln(&self) -> Self {
        Real(with_cc(|cc| self.0.ln(WORKING_BITS, RM, cc)))
    }

    pub fn exp(&self) -> Self {
        Real(with_cc(|cc| self.0.exp(WORKING_BITS, RM, cc)))
    }

    /// `self^y` for `self > 0`.
    pub fn pow(&self, y: &Real) -> Self {
        (y * &self.ln()).exp()
    }

    pub fn powi(&self, n: u64) -> Self {
        Real(self.0.powi(n as usize, WORKING_BITS, RM))
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.sqrt(WORKING_BITS, RM))
    }

    pub fn recip(&self) -> Self {
        Real(self.0.reciprocal(WORKING_BITS, RM))
    }

    pub fn abs(&self) -> Self {
        Real(self.0.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !self.0.is_nan() && !self.0.is_inf()
    }

    /// Nearest double; saturates to infinity outside the double range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.0.to_string().parse().unwrap_or(f64::NAN)
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Scientific notation with `digits` significant digits, rounded half
    /// away from zero: `-1.2345e-7`.
    pub fn to_sci(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return format!("{}e0", if digits > 1 { format!("0.{}", "0".repeat(digits - 1)) } else { "0".into() });
        }
        let (negative, mantissa, exp) = decompose(&self.0.to_string());
        let (mut kept, mut exp) = round_digits(&mantissa, digits, exp);
        if kept.len() > digits {
            kept.truncate(digits);
            exp += 1;
        }
        let sign = if negative { "-" } else { "" };
        let frac = if kept.len() > 1 { format!(".{}", &kept[1..]) } else { String::new() };
        format!("{sign}{}{frac}e{exp}", &kept[..1])
    }
}

/// Splits astro-float's `d.ddde±x` output into sign, digit string and the
/// decimal exponent of the leading digit.
fn decompose(s: &str) -> (bool, String, i64) {
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (mant, exp) = body.split_once(['e', 'E']).unwrap_or((body, "0"));
    let exp: i64 = exp.trim_start_matches('+').parse().expect("decimal exponent");
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let mut digits = format!("{int_part}{frac_part}");
    let mut exp = exp + int_part.len() as i64 - 1;
    while digits.starts_with('0') && digits.len() > 1 {
        digits.remove(0);
        exp -= 1;
    }
    (negative, digits, exp)
}

/// Rounds a digit string to `n` digits; the result may gain one digit on carry.
fn round_digits(digits: &str, n: usize, exp: i64) -> (String, i64) {
    if digits.len() <= n {
        return (format!("{digits:0<n$}"), exp);
    }
    let mut kept: Vec<u8> = digits.as_bytes()[..n].to_vec();
    if digits.as_bytes()[n] >= b'5' {
        let mut i = n;
        loop {
            if i == 0 {
                kept.insert(0, b'1');
                break;
            }
            i -= 1;
            if kept[i] == b'9' {
                kept[i] = b'0';
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    (String::from_utf8(kept).expect("ascii digits"), exp)
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_sci(p.max(1))),
            None => f.write_str(&self.to_sci(60)),
        }
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                Real(self.0.$method(&rhs.0, WORKING_BITS, RM))
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &Real) -> Real {
                (&self).$method(rhs)
            }
        }
        impl $trait<Real> for &Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(BigFloat::neg(&self.0))
    }
}

impl Sum for Real {
    fn sum<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::zero(), |a, b| a + b)
    }
}

impl Product for Real {
    fn product<I: Iterator<Item = Real>>(iter: I) -> Real {
        iter.fold(Real::one(), |a, b| a * b)
    }
}

impl From<u64> for Real {
    fn from(v: u64) -> Self {
        Real::from_u64(v)
    }
}

impl From<i64> for Real {
    fn from(v: i64) -> Self {
        Real::from_i64(v)
    }
}
