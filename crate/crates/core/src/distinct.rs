//! `M(n) = #{ij : 1 <= i, j <= n}`, the number of distinct entries of the
//! `n × n` multiplication table.
//!
//! Products are enumerated over the upper triangle `i <= j` only. The dense
//! counter keeps one bit per value in `[1, n²]`; the segmented counter walks
//! `[1, n²]` in fixed-size windows and needs one window of bits at a time.

use core::ops::RangeInclusive;
use core::time::Duration;

use alloc::vec::Vec;

use crate::divisor::try_filled;
use crate::{Error, Result};

/// Largest `n` the dense counter accepts (a `2^34`-bit bitmap).
pub const DENSE_MAX_N: u64 = 1 << 17;

/// The default policy uses the dense counter up to this `n`.
pub const DENSE_POLICY_MAX_N: u64 = 8192;

/// Smallest accepted segment width.
pub const MIN_SEGMENT_BITS: u64 = 1 << 16;

/// Segment width used when none is requested.
pub const DEFAULT_SEGMENT_BITS: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dense,
    Segmented,
}

impl Algorithm {
    /// The default choice for `n`.
    pub fn for_n(n: u64) -> Self {
        if n <= DENSE_POLICY_MAX_N {
            Algorithm::Dense
        } else {
            Algorithm::Segmented
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dense => "dense",
            Algorithm::Segmented => "segmented",
        }
    }
}

fn square(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    n.checked_mul(n).ok_or(Error::Overflow {
        what: "n²",
        argument: n,
    })
}

struct Bitmap {
    words: Vec<u64>,
}

impl Bitmap {
    fn new(bits: u64) -> Result<Self> {
        let words = usize::try_from(bits.div_ceil(64)).map_err(|_| Error::Allocation {
            cells: usize::MAX,
        })?;
        Ok(Bitmap {
            words: try_filled(words, 0u64)?,
        })
    }

    fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    #[inline]
    fn set(&mut self, bit: u64) {
        self.words[(bit >> 6) as usize] |= 1 << (bit & 63);
    }

    fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }
}

/// Exact `M(n)` from a bitmap over `[1, n²]`.
pub fn count_distinct_dense(n: u64) -> Result<u64> {
    let n2 = square(n)?;
    if n > DENSE_MAX_N {
        return Err(Error::DenseBudget {
            n,
            limit: DENSE_MAX_N,
        });
    }
    // bit v - 1 stands for the value v
    let mut bits = Bitmap::new(n2)?;
    for i in 1..=n {
        for j in i..=n {
            bits.set(i * j - 1);
        }
    }
    Ok(bits.count_ones())
}

/// The windows `[lo, hi]` that partition `[1, n²]` into runs of
/// `segment_bits` values (the last one possibly shorter).
#[derive(Debug, Clone)]
pub struct SegmentPlan {
    n: u64,
    top: u64,
    width: u64,
}

impl SegmentPlan {
    pub fn new(n: u64, segment_bits: u64) -> Result<Self> {
        let top = square(n)?;
        if segment_bits < MIN_SEGMENT_BITS {
            return Err(Error::domain(
                "segmented count",
                "segment_bits >= 65536",
                segment_bits,
            ));
        }
        Ok(SegmentPlan {
            n,
            top,
            width: segment_bits,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn len(&self) -> u64 {
        self.top.div_ceil(self.width)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Window `index`, in `0..len()`.
    pub fn window(&self, index: u64) -> RangeInclusive<u64> {
        let lo = index * self.width + 1;
        let hi = lo.saturating_add(self.width - 1).min(self.top);
        lo..=hi
    }

    pub fn windows(&self) -> impl Iterator<Item = RangeInclusive<u64>> + '_ {
        (0..self.len()).map(|i| self.window(i))
    }

    /// A bitmap sized for one window of this plan.
    pub fn scratch(&self) -> Result<SegmentScratch> {
        Ok(SegmentScratch {
            bits: Bitmap::new(self.width.min(self.top))?,
        })
    }

    /// Distinct products `ij` (`1 <= i <= j <= n`) lying in `window`.
    pub fn count_window(&self, window: RangeInclusive<u64>, scratch: &mut SegmentScratch) -> u64 {
        count_window(self.n, window, &mut scratch.bits)
    }
}

/// Reusable working memory for [`SegmentPlan::count_window`].
pub struct SegmentScratch {
    bits: Bitmap,
}

fn count_window(n: u64, window: RangeInclusive<u64>, bits: &mut Bitmap) -> u64 {
    let (lo, hi) = window.into_inner();
    bits.clear();
    // i·n >= lo is needed for any product of row i to reach the window
    let first_row = lo.div_ceil(n).max(1);
    for i in first_row..=n {
        if i * i > hi {
            break;
        }
        let j_lo = lo.div_ceil(i).max(i);
        let j_hi = (hi / i).min(n);
        let mut v = i * j_lo;
        for _ in j_lo..=j_hi {
            bits.set(v - lo);
            v += i;
        }
    }
    bits.count_ones()
}

/// Exact `M(n)` by counting window after window of `segment_bits` values.
pub fn count_distinct_segmented(n: u64, segment_bits: u64) -> Result<u64> {
    let plan = SegmentPlan::new(n, segment_bits)?;
    let mut scratch = plan.scratch()?;
    Ok(plan
        .windows()
        .map(|w| plan.count_window(w, &mut scratch))
        .sum())
}

/// `M(n)` with the default algorithm choice.
pub fn count_distinct(n: u64) -> Result<(u64, Algorithm)> {
    let algorithm = Algorithm::for_n(n);
    let m = match algorithm {
        Algorithm::Dense => count_distinct_dense(n)?,
        Algorithm::Segmented => count_distinct_segmented(n, DEFAULT_SEGMENT_BITS)?,
    };
    Ok((m, algorithm))
}

/// One row of a census of `M(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableCensus {
    pub n: u64,
    pub distinct_count: u64,
    /// `M(n) / n²`.
    pub density: f64,
    /// `n² / M(n)`, the average multiplicity of a distinct product.
    pub mean_multiplicity: f64,
    pub algorithm: Algorithm,
    pub elapsed: Duration,
}

impl TableCensus {
    pub fn new(n: u64, distinct_count: u64, algorithm: Algorithm, elapsed: Duration) -> Result<Self> {
        let n2 = square(n)?;
        if distinct_count == 0 || distinct_count > n2 {
            return Err(Error::domain("census", "1 <= M(n) <= n²", distinct_count));
        }
        let (n2, m) = (n2 as f64, distinct_count as f64);
        Ok(TableCensus {
            n,
            distinct_count,
            density: m / n2,
            mean_multiplicity: n2 / m,
            algorithm,
            elapsed,
        })
    }

    /// Computes `M(n)` with the default algorithm. Elapsed time is left at
    /// zero; the caller owns the clock.
    pub fn compute(n: u64) -> Result<Self> {
        let (m, algorithm) = count_distinct(n)?;
        TableCensus::new(n, m, algorithm, Duration::ZERO)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn naive(n: u64) -> u64 {
        let mut set = BTreeSet::new();
        for i in 1..=n {
            for j in 1..=n {
                set.insert(i * j);
            }
        }
        set.len() as u64
    }

    #[test]
    fn small_tables() {
        assert_eq!(count_distinct_dense(1).unwrap(), 1);
        assert_eq!(count_distinct_dense(10).unwrap(), 42);
        assert_eq!(count_distinct_dense(100).unwrap(), 2906);
        assert_eq!(count_distinct_segmented(10, MIN_SEGMENT_BITS).unwrap(), 42);
        for n in 1..=80 {
            assert_eq!(count_distinct_dense(n).unwrap(), naive(n), "n = {n}");
        }
    }

    #[test]
    fn segment_edges() {
        // windows much smaller than n² so many products straddle edges
        for n in [256u64, 300, 511, 700] {
            let dense = count_distinct_dense(n).unwrap();
            for bits in [MIN_SEGMENT_BITS, MIN_SEGMENT_BITS + 1, 100_003] {
                assert_eq!(count_distinct_segmented(n, bits).unwrap(), dense, "n = {n}, bits = {bits}");
            }
        }
    }

    #[test]
    fn plan_partitions_range() {
        let plan = SegmentPlan::new(300, MIN_SEGMENT_BITS).unwrap();
        let mut next = 1;
        for w in plan.windows() {
            assert_eq!(*w.start(), next);
            next = w.end() + 1;
        }
        assert_eq!(next, 300 * 300 + 1);
        assert_eq!(plan.len(), 2);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(count_distinct_dense(0).is_err());
        assert!(matches!(
            count_distinct_dense(DENSE_MAX_N + 1),
            Err(Error::DenseBudget { .. })
        ));
        assert!(matches!(
            count_distinct_segmented(10, MIN_SEGMENT_BITS - 1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn census_fields() {
        let c = TableCensus::compute(1).unwrap();
        assert_eq!((c.distinct_count, c.density, c.mean_multiplicity), (1, 1.0, 1.0));
        let c = TableCensus::compute(10).unwrap();
        assert_eq!(c.distinct_count, 42);
        assert_eq!(c.algorithm, Algorithm::Dense);
        assert!((c.density * c.mean_multiplicity - 1.0).abs() <= f64::EPSILON);
        assert_eq!(Algorithm::for_n(DENSE_POLICY_MAX_N + 1), Algorithm::Segmented);
        assert!(TableCensus::new(3, 10, Algorithm::Dense, Duration::ZERO).is_err());
    }
}
