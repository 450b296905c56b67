//! Closed-form lattice-point sums and the shifted-prime sum.

use num_integer::Roots;
use rayon::prelude::*;

use super::segmented::{fill_segment, SegmentBuffers};
use super::{Grid, MultiplicativeSpec, SieveConfig, SummatoryGrid, SummatoryPoint};
use crate::arith::primes_up_to;
use crate::{Error, Result};

/// `sum_{n <= x} tau(1, 3, n) = sum_{b^3 <= x} floor(x / b^3)`, in
/// `O(x^{1/3})` steps.
pub fn tau13_summatory(x: u64) -> u128 {
    let mut total = 0u128;
    let mut b = 1u64;
    while let Some(cube) = b.checked_pow(3).filter(|&c| c <= x) {
        total += (x / cube) as u128;
        b += 1;
    }
    total
}

/// `sum_{m n^2 <= x} m n = sum_{n <= sqrt x} n T(floor(x / n^2))` with
/// `T(k) = k (k + 1) / 2`, in `O(sqrt x)` steps.
pub fn petermann_wu_sum(x: u64) -> Result<u128> {
    let mut total = 0u128;
    for n in 1..=x.sqrt() {
        let k = (x / (n * n)) as u128;
        let term = (k * (k + 1) / 2).checked_mul(n as u128).ok_or(Error::Overflow("petermann_wu_sum"))?;
        total = total.checked_add(term).ok_or(Error::Overflow("petermann_wu_sum"))?;
    }
    Ok(total)
}

/// `sum_{p <= x} phi^(e)(p - 1)`.
pub fn shifted_prime_sum(x: u64) -> Result<u128> {
    let grid = Grid::new(vec![x.max(1)])?;
    Ok(shifted_prime_summatory(&grid, &SieveConfig::default())?.points[0].sum)
}

/// Marks composites in `[lo, hi)` using primes up to `sqrt(hi - 1)`.
fn primality_segment(primes: &[u32], lo: u64, hi: u64, composite: &mut Vec<bool>) {
    composite.clear();
    composite.resize((hi - lo) as usize, false);
    for &p in primes {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let mut m = (lo.div_ceil(p) * p).max(p * p);
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    if lo <= 1 && hi > 1 {
        composite[(1 - lo) as usize] = true;
    }
    if lo == 0 {
        composite[0] = true;
    }
}

/// `sum_{p <= x} phi^(e)(p - 1)` at every grid point, in one segmented pass
/// over `m = p - 1`.
pub fn shifted_prime_summatory(grid: &Grid, config: &SieveConfig) -> Result<SummatoryGrid> {
    let x_max = grid.max();
    config.check(x_max)?;
    let spec = MultiplicativeSpec::phi_e();
    let primes = primes_up_to((x_max + 1).sqrt().max(2))?;
    let primes = primes.primes();
    let seg = config.segment_len as u64;
    // m ranges over [1, x_max - 1]; p = m + 1.
    let m_max = x_max.saturating_sub(1);
    let segments: Vec<(u64, u64)> =
        (0..).map(|i| 1 + i * seg).take_while(|&lo| lo <= m_max).map(|lo| (lo, (lo + seg).min(m_max + 1))).collect();
    // A grid point x closes the running sum at m = x - 1.
    let closes: Vec<u64> = grid.points().iter().map(|&x| x - 1).collect();

    let results: Vec<(u128, Vec<(usize, u128)>)> = segments
        .par_iter()
        .map_init(
            || (SegmentBuffers::default(), Vec::new()),
            |(buf, composite), &(lo, hi)| {
                fill_segment(&spec, primes, lo, hi, buf);
                primality_segment(primes, lo + 1, hi + 1, composite);
                let mut total = 0u128;
                let mut marks = Vec::new();
                let mut gi = closes.partition_point(|&m| m < lo);
                for (i, (&is_composite, &v)) in composite.iter().zip(&buf.values).enumerate() {
                    if !is_composite {
                        total += v as u128;
                    }
                    let m = lo + i as u64;
                    while gi < closes.len() && closes[gi] == m {
                        marks.push((gi, total));
                        gi += 1;
                    }
                }
                (total, marks)
            },
        )
        .collect();

    let mut out: Vec<SummatoryPoint> = grid.points().iter().map(|&x| SummatoryPoint { x, sum: 0 }).collect();
    let mut before = 0u128;
    for (total, marks) in results {
        for (gi, partial) in marks {
            out[gi].sum = before + partial;
        }
        before += total;
    }
    Ok(SummatoryGrid { label: "phi_e(p-1)".into(), points: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{factor, is_prime_u64};
    use crate::dirichlet::tau13_seq;
    use crate::expfun::phi_e;

    #[test]
    fn tau13_examples() {
        assert_eq!(tau13_summatory(10), 11);
        assert_eq!(tau13_summatory(1), 1);
        assert_eq!(tau13_summatory(7), 7);
    }

    #[test]
    fn tau13_matches_sequence() {
        let seq = tau13_seq(100_000).unwrap();
        let prefix = seq.prefix_sums().unwrap();
        for x in 1..=100_000u64 {
            assert_eq!(tau13_summatory(x) as i128, prefix[x as usize - 1]);
        }
    }

    #[test]
    fn petermann_wu_examples() {
        assert_eq!(petermann_wu_sum(4).unwrap(), 12);
        assert_eq!(petermann_wu_sum(1).unwrap(), 1);
        assert_eq!(petermann_wu_sum(3).unwrap(), 6);
    }

    #[test]
    fn petermann_wu_matches_double_loop() {
        let mut brute = vec![0u128; 10_001];
        for n in 1..=100u64 {
            for m in 1..=10_000 / (n * n) {
                brute[(m * n * n) as usize] += (m * n) as u128;
            }
        }
        let mut acc = 0u128;
        for x in 1..=10_000u64 {
            acc += brute[x as usize];
            assert_eq!(petermann_wu_sum(x).unwrap(), acc, "x = {x}");
        }
    }

    #[test]
    fn shifted_prime_examples() {
        assert_eq!(shifted_prime_sum(10).unwrap(), 4);
        assert_eq!(shifted_prime_sum(2).unwrap(), 1);
        assert_eq!(shifted_prime_sum(13).unwrap(), 6);
        assert_eq!(shifted_prime_sum(1).unwrap(), 0);
    }

    #[test]
    fn shifted_prime_matches_brute_force() {
        let xs: Vec<u64> = vec![2, 3, 17, 1000, 4099, 65_537, 200_000];
        let cfg = SieveConfig { capacity: 200_000, segment_len: 1013, parallel: true };
        let got = shifted_prime_summatory(&Grid::new(xs.clone()).unwrap(), &cfg).unwrap();
        for (pt, &x) in got.points.iter().zip(&xs) {
            let brute: u128 =
                (2..=x).filter(|&p| is_prime_u64(p)).map(|p| phi_e(&factor(p - 1).unwrap()) as u128).sum();
            assert_eq!(pt.sum, brute, "x = {x}");
        }
    }
}
