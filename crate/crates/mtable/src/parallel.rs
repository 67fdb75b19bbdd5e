//! Rayon-backed versions of the core sweeps. Ranges are split into fixed
//! chunks and results are merged in argument order, so output does not
//! depend on scheduling.

use std::ops::RangeInclusive;

use mtable_core::bounds::{self, BoundConstants, BoundReport};
use mtable_core::distinct::SegmentPlan;
use mtable_core::divisor::{self, DivisorSieve};
use mtable_core::Result;
use rayon::prelude::*;

const CHUNK: u64 = 1 << 14;

fn chunks(lo: u64, hi: u64) -> Vec<RangeInclusive<u64>> {
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = start.saturating_add(CHUNK - 1).min(hi);
        out.push(start..=end);
        if end == u64::MAX {
            break;
        }
        start = end + 1;
    }
    out
}

/// Applies `check` to every argument in `lo..=hi` and keeps the reports
/// that do not clearly hold, in argument order.
pub fn sweep<F>(lo: u64, hi: u64, check: F) -> Result<Vec<BoundReport>>
where
    F: Fn(u64) -> Result<BoundReport> + Sync,
{
    let parts: Vec<Result<Vec<BoundReport>>> = chunks(lo, hi)
        .into_par_iter()
        .map(|range| {
            let mut out = Vec::new();
            for n in range {
                let report = check(n)?;
                if !report.holds() {
                    out.push(report);
                }
            }
            Ok(out)
        })
        .collect();
    let mut merged = Vec::new();
    for part in parts {
        merged.extend(part?);
    }
    Ok(merged)
}

pub fn divisor_bound_sweep(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    sweep(lo, hi, |n| bounds::divisor_bound_report(n, sieve.d(n), constants))
}

pub fn sigma_bound_sweep(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    sweep(lo, hi, |n| bounds::sigma_bound_report(n, sieve.sigma(n), constants))
}

pub fn integral_bracket_sweep(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    sweep(lo, hi, |k| {
        bounds::integral_bracket_report(k, sieve.d(k), sieve.sigma(k), constants)
    })
}

/// Arguments in `lo..=hi` where the divisor step sum disagrees with
/// `k·d(k) − σ(k)`.
pub fn integral_mismatches(lo: u64, hi: u64) -> Result<Vec<u64>> {
    let parts: Vec<Result<Vec<u64>>> = chunks(lo, hi)
        .into_par_iter()
        .map(|range| {
            let mut bad = Vec::new();
            for k in range {
                if !divisor::evaluate_integral(k)?.agrees() {
                    bad.push(k);
                }
            }
            Ok(bad)
        })
        .collect();
    let mut merged = Vec::new();
    for part in parts {
        merged.extend(part?);
    }
    Ok(merged)
}

/// `M(n)` by the segmented counter with windows counted concurrently.
pub fn count_distinct_segmented(n: u64, segment_bits: u64) -> Result<u64> {
    let plan = SegmentPlan::new(n, segment_bits)?;
    let counts: Vec<u64> = (0..plan.len())
        .into_par_iter()
        .map_init(
            || plan.scratch().expect("segment scratch allocation"),
            |scratch, i| plan.count_window(plan.window(i), scratch),
        )
        .collect();
    Ok(counts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use mtable_core::distinct;

    #[test]
    fn chunking_covers_range() {
        let c = chunks(3, 40_000);
        assert_eq!(*c[0].start(), 3);
        assert_eq!(*c.last().unwrap().end(), 40_000);
        assert!(c.windows(2).all(|w| *w[0].end() + 1 == *w[1].start()));
        assert!(chunks(10, 9).is_empty());
    }

    #[test]
    fn parallel_matches_sequential() {
        let sieve = DivisorSieve::new(50_000).unwrap();
        let constants = BoundConstants::default();
        assert_eq!(
            sigma_bound_sweep(&sieve, 3, 50_000, constants).unwrap(),
            bounds::sigma_bound_sweep(&sieve, 3, 50_000, constants).unwrap()
        );
        for n in [10, 700, 1500] {
            assert_eq!(
                count_distinct_segmented(n, 1 << 16).unwrap(),
                distinct::count_distinct_segmented(n, 1 << 16).unwrap()
            );
        }
    }
}
