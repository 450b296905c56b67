use std::str::FromStr;

use serde::Serialize;

use crate::{Error, Result};

/// Strictly increasing list of cut points `x >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grid {
    points: Vec<u64>,
}

impl Grid {
    pub fn new(mut points: Vec<u64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Grid("grid is empty".into()));
        }
        if points.contains(&0) {
            return Err(Error::Grid("grid points must be >= 1".into()));
        }
        points.sort_unstable();
        points.dedup();
        Ok(Self { points })
    }

    /// `start * ratio^k` (rounded) while below `stop`, then `stop` itself.
    pub fn geometric(start: u64, stop: u64, ratio: f64) -> Result<Self> {
        if start == 0 || stop < start {
            return Err(Error::Grid(format!("need 1 <= start <= stop, got {start}:{stop}")));
        }
        if ratio.is_nan() || ratio <= 1.0 || !ratio.is_finite() {
            return Err(Error::Grid(format!("ratio must exceed 1, got {ratio}")));
        }
        let mut points = Vec::new();
        let mut k = 0i32;
        loop {
            let x = (start as f64 * ratio.powi(k)).round();
            if x >= stop as f64 {
                break;
            }
            points.push(x as u64);
            k += 1;
        }
        points.push(stop);
        Self::new(points)
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    pub fn max(&self) -> u64 {
        *self.points.last().expect("grid is never empty")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Integer literal that may be written as `1e7` or `2.5e6`.
pub fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let (mantissa, exp) = s.split_once(['e', 'E']).ok_or_else(|| Error::Grid(format!("not an integer: {s:?}")))?;
    let exp: u32 = exp.parse().map_err(|_| Error::Grid(format!("bad exponent in {s:?}")))?;
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac_part.len() as u32 > exp {
        return Err(Error::Grid(format!("{s:?} is not an integer")));
    }
    let digits = format!("{int_part}{frac_part}");
    let base: u64 = digits.parse().map_err(|_| Error::Grid(format!("not an integer: {s:?}")))?;
    10u64
        .checked_pow(exp - frac_part.len() as u32)
        .and_then(|scale| base.checked_mul(scale))
        .ok_or_else(|| Error::Grid(format!("{s:?} overflows u64")))
}

impl FromStr for Grid {
    type Err = Error;

    /// `start:stop:ratio` or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(':') {
            let fields: Vec<&str> = s.split(':').collect();
            if fields.len() != 3 {
                return Err(Error::Grid(format!("expected start:stop:ratio, got {s:?}")));
            }
            let ratio: f64 = fields[2].trim().parse().map_err(|_| Error::Grid(format!("bad ratio {:?}", fields[2])))?;
            Grid::geometric(parse_count(fields[0])?, parse_count(fields[1])?, ratio)
        } else {
            let points = s.split(',').map(parse_count).collect::<Result<Vec<_>>>()?;
            Grid::new(points)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SummatoryPoint {
    pub x: u64,
    pub sum: u128,
}

/// Exact partial sums at the grid points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummatoryGrid {
    pub label: String,
    pub points: Vec<SummatoryPoint>,
}

impl SummatoryGrid {
    pub fn sum_at(&self, x: u64) -> Option<u128> {
        self.points.iter().find(|pt| pt.x == x).map(|pt| pt.sum)
    }

    pub fn xs(&self) -> impl Iterator<Item = u64> + '_ {
        self.points.iter().map(|pt| pt.x)
    }
}
