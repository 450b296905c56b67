use num_integer::Roots;
use rayon::prelude::*;

use super::{Grid, MultiplicativeSpec, SieveConfig, SummatoryGrid, SummatoryPoint};
use crate::arith::primes_up_to;
use crate::{Error, Result};

/// Reusable per-worker buffers.
#[derive(Default)]
pub(crate) struct SegmentBuffers {
    pub values: Vec<u64>,
    rest: Vec<u64>,
}

/// Fills `buf.values[i] = f(lo + i)` for `lo + i` in `[lo, hi)`, `lo >= 1`.
///
/// `primes` must contain every prime up to `sqrt(hi - 1)`. After dividing
/// out those primes, what remains of each entry is 1 or a single prime.
pub(crate) fn fill_segment(spec: &MultiplicativeSpec, primes: &[u32], lo: u64, hi: u64, buf: &mut SegmentBuffers) {
    let len = (hi - lo) as usize;
    buf.values.clear();
    buf.values.resize(len, 1);
    buf.rest.clear();
    buf.rest.extend(lo..hi);
    for &p in primes {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < hi {
            let idx = (m - lo) as usize;
            let mut r = buf.rest[idx] / p;
            let mut a = 1u32;
            while r.is_multiple_of(p) {
                r /= p;
                a += 1;
            }
            buf.rest[idx] = r;
            buf.values[idx] *= spec.prime_power_value(p, a);
            m += p;
        }
    }
    for (v, &r) in buf.values.iter_mut().zip(&buf.rest) {
        if r > 1 {
            *v *= spec.prime_power_value(r, 1);
        }
    }
}

struct SegmentSums {
    total: u128,
    /// (grid index, partial sum within the segment up to that point)
    marks: Vec<(usize, u128)>,
}

/// Exact `S(x) = sum_{n <= x} f(n)` at each grid point, default limits.
pub fn summatory(spec: &MultiplicativeSpec, grid: &Grid) -> Result<SummatoryGrid> {
    summatory_with(spec, grid, &SieveConfig::default())
}

pub fn summatory_with(spec: &MultiplicativeSpec, grid: &Grid, config: &SieveConfig) -> Result<SummatoryGrid> {
    let x_max = grid.max();
    config.check(x_max)?;
    let primes = primes_up_to(x_max.sqrt().max(2))?;
    let primes = primes.primes();
    let seg = config.segment_len as u64;
    let segments: Vec<(u64, u64)> =
        (0..).map(|i| 1 + i * seg).take_while(|&lo| lo <= x_max).map(|lo| (lo, (lo + seg).min(x_max + 1))).collect();
    let points = grid.points();

    let work = |buf: &mut SegmentBuffers, &(lo, hi): &(u64, u64)| -> Result<SegmentSums> {
        fill_segment(spec, primes, lo, hi, buf);
        let mut total = 0u128;
        let mut marks = Vec::new();
        let mut gi = points.partition_point(|&x| x < lo);
        for (i, &v) in buf.values.iter().enumerate() {
            total = total.checked_add(v as u128).ok_or(Error::Overflow("summatory"))?;
            let n = lo + i as u64;
            while gi < points.len() && points[gi] == n {
                marks.push((gi, total));
                gi += 1;
            }
        }
        Ok(SegmentSums { total, marks })
    };

    let results: Vec<SegmentSums> = if config.parallel {
        segments.par_iter().map_init(SegmentBuffers::default, work).collect::<Result<_>>()?
    } else {
        let mut buf = SegmentBuffers::default();
        segments.iter().map(|s| work(&mut buf, s)).collect::<Result<_>>()?
    };

    let mut out = vec![SummatoryPoint { x: 0, sum: 0 }; points.len()];
    let mut before = 0u128;
    for seg in results {
        for (gi, partial) in seg.marks {
            out[gi] =
                SummatoryPoint { x: points[gi], sum: before.checked_add(partial).ok_or(Error::Overflow("summatory"))? };
        }
        before = before.checked_add(seg.total).ok_or(Error::Overflow("summatory"))?;
    }
    Ok(SummatoryGrid { label: spec.name().to_string(), points: out })
}
