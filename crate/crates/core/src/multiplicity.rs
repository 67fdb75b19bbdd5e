//! How often `k` occurs in the `n × n` multiplication table:
//! `𝔐(n; k) = #{(a, b) : 1 <= a, b <= n, ab = k}`.

use alloc::vec::Vec;

use crate::divisor::{self, divisors_at_most, try_filled};
use crate::{Error, Result};

/// Below this `n`, [`table_sum_checks`] enumerates per value `k`; above it,
/// per grid cell `(i, j)`.
pub const DIVISOR_WISE_MAX_N: u64 = 64;

/// Largest `n` accepted by [`table_sum_checks`].
pub const TABLE_SUM_MAX_N: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityRecord {
    pub n: u64,
    pub k: u64,
    pub count: u64,
    pub method: Method,
}

impl MultiplicityRecord {
    pub fn compute(n: u64, k: u64, method: Method) -> Result<Self> {
        let count = match method {
            Method::Direct => multiplicity_direct(n, k)?,
            Method::Formula => multiplicity_formula(n, k)?,
        };
        Ok(MultiplicityRecord {
            n,
            k,
            count,
            method,
        })
    }
}

fn check_positive(n: u64, k: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    if k == 0 {
        return Err(Error::ZeroArgument { name: "k" });
    }
    Ok(())
}

/// `n²`, or `None` when it does not fit in `u64`.
fn square(n: u64) -> Option<u64> {
    n.checked_mul(n)
}

/// Counts divisors `m` of `k` with `m <= n` and `k / m <= n`.
pub fn multiplicity_direct(n: u64, k: u64) -> Result<u64> {
    check_positive(n, k)?;
    Ok(direct_in(&divisor::divisor_list(k)?, n, k))
}

/// [`multiplicity_direct`] over a precomputed ascending divisor list of `k`.
pub fn direct_in(divisors: &[u64], n: u64, k: u64) -> u64 {
    divisors
        .iter()
        .filter(|&&m| m <= n && k / m <= n)
        .count() as u64
}

/// `R(n; k) = ⌊k/n⌋ − ⌊(k−1)/n⌋`.
pub fn boundary_indicator_floor(n: u64, k: u64) -> u64 {
    k / n - (k - 1) / n
}

/// `1` if `n | k`, else `0`.
pub fn boundary_indicator_divides(n: u64, k: u64) -> u64 {
    u64::from(k % n == 0)
}

/// `R(n; k)`: 1 iff `n` divides `k`.
pub fn boundary_indicator(n: u64, k: u64) -> Result<u64> {
    check_positive(n, k)?;
    let r = boundary_indicator_divides(n, k);
    debug_assert_eq!(r, boundary_indicator_floor(n, k));
    Ok(r)
}

/// `d(k; k/n)` computed exactly: divisor `m` counts iff `m·n <= k`.
fn divisors_below_ratio(divisors: &[u64], n: u64, k: u64) -> u64 {
    divisors.partition_point(|&m| m.checked_mul(n).is_some_and(|mn| mn <= k)) as u64
}

/// `d(k; n) − d(k; k/n) + R(n; k)` evaluated with no domain restriction.
///
/// Only meaningful for `k <= n²`; at `(n, k) = (2, 12)` it yields −2.
pub fn multiplicity_formula_unchecked(n: u64, k: u64) -> Result<i64> {
    check_positive(n, k)?;
    Ok(formula_in(&divisor::divisor_list(k)?, n, k))
}

/// `d(k; n) − d(k; k/n) + R(n; k)` for `1 <= k <= n²`.
pub fn multiplicity_formula(n: u64, k: u64) -> Result<u64> {
    check_positive(n, k)?;
    check_formula_domain(n, k)?;
    let value = formula_in(&divisor::divisor_list(k)?, n, k);
    Ok(u64::try_from(value).expect("formula is non-negative for k <= n²"))
}

fn check_formula_domain(n: u64, k: u64) -> Result<()> {
    match square(n) {
        Some(n2) if k > n2 => Err(Error::domain("multiplicity formula", "k <= n²", k)),
        _ => Ok(()),
    }
}

/// The formula over a precomputed ascending divisor list of `k`.
pub fn formula_in(divisors: &[u64], n: u64, k: u64) -> i64 {
    let upto_n = divisors_at_most(divisors, n) as i64;
    let below_ratio = divisors_below_ratio(divisors, n, k) as i64;
    upto_n - below_ratio + boundary_indicator_divides(n, k) as i64
}

/// `𝔐(k)`, the multiplicity of `k` in the unbounded table, which is `d(k)`.
pub fn universal_multiplicity(k: u64) -> Result<u64> {
    divisor::divisor_count(k)
}

/// Checks that `𝔐(n; k)` has settled at `d(k)` for `n = k` and `n = k + 1`.
pub fn verify_stabilization(k: u64) -> Result<bool> {
    let divisors = divisor::divisor_list(k)?;
    let d = divisors.len() as u64;
    Ok(direct_in(&divisors, k, k) == d && direct_in(&divisors, k.saturating_add(1), k) == d)
}

/// `𝔐(n; k)` for every `0 <= k <= n²`, by enumerating pairs `a <= b`.
pub fn multiplicity_histogram(n: u64) -> Result<Vec<u32>> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    let n2 = square(n)
        .and_then(|v| usize::try_from(v).ok())
        .ok_or(Error::Allocation { cells: usize::MAX })?;
    let mut counts = try_filled(n2 + 1, 0u32)?;
    for a in 1..=n {
        counts[(a * a) as usize] += 1;
        for b in a + 1..=n {
            counts[(a * b) as usize] += 2;
        }
    }
    Ok(counts)
}

/// Values `k` in `1..=n²` where the formula and the direct count disagree
/// (expected: none).
///
/// Both routes only look at divisors `<= n`, so each window of `k` gets
/// lists of its divisors up to `n` from a local sieve instead of trial
/// division.
pub fn formula_mismatches(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    let top = square(n).ok_or(Error::Overflow {
        what: "n²",
        argument: n,
    })?;
    const WINDOW: u64 = 1 << 16;
    let mut mismatches = Vec::new();
    let mut lists: Vec<Vec<u64>> = Vec::new();
    let mut lo = 1;
    while lo <= top {
        let hi = lo.saturating_add(WINDOW - 1).min(top);
        lists.clear();
        lists.resize((hi - lo + 1) as usize, Vec::new());
        for m in 1..=n.min(hi) {
            let mut k = lo.div_ceil(m) * m;
            while k <= hi {
                lists[(k - lo) as usize].push(m);
                k += m;
            }
        }
        for (offset, small) in lists.iter().enumerate() {
            let k = lo + offset as u64;
            if formula_in(small, n, k) != direct_in(small, n, k) as i64 {
                mismatches.push(k);
            }
        }
        lo = hi + 1;
    }
    Ok(mismatches)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableSumMethod {
    /// `Σ_k 𝔐(n; k)·k` and `Σ_k 𝔐(n; k)` with `𝔐` from divisor enumeration.
    ByValue,
    /// Sums over the `n²` grid cells.
    ByCell,
}

/// `Σ_k k·𝔐(n; k)` and `Σ_k 𝔐(n; k)` over `1 <= k <= n²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableSums {
    pub weighted: u128,
    pub plain: u128,
}

impl TableSums {
    /// `((n(n+1)/2)², n²)`.
    pub fn closed_form(n: u64) -> Self {
        let n = u128::from(n);
        let t = n * (n + 1) / 2;
        TableSums {
            weighted: t * t,
            plain: n * n,
        }
    }
}

/// Both table sums by enumeration, choosing per-value enumeration for small
/// `n` and per-cell enumeration above [`DIVISOR_WISE_MAX_N`].
pub fn table_sum_checks(n: u64) -> Result<TableSums> {
    let method = if n <= DIVISOR_WISE_MAX_N {
        TableSumMethod::ByValue
    } else {
        TableSumMethod::ByCell
    };
    table_sums_with(n, method)
}

pub fn table_sums_with(n: u64, method: TableSumMethod) -> Result<TableSums> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    if n > TABLE_SUM_MAX_N {
        return Err(Error::domain("table sums", "n <= 100000", n));
    }
    let overflow = Error::Overflow {
        what: "table sum",
        argument: n,
    };
    let mut sums = TableSums {
        weighted: 0,
        plain: 0,
    };
    match method {
        TableSumMethod::ByValue => {
            for k in 1..=n * n {
                let m = u128::from(multiplicity_direct(n, k)?);
                sums.plain = sums.plain.checked_add(m).ok_or(overflow.clone())?;
                sums.weighted = (m * u128::from(k))
                    .checked_add(sums.weighted)
                    .ok_or(overflow.clone())?;
            }
        }
        TableSumMethod::ByCell => {
            for i in 1..=n {
                for j in 1..=n {
                    sums.plain += 1;
                    sums.weighted = sums
                        .weighted
                        .checked_add(u128::from(i * j))
                        .ok_or(overflow.clone())?;
                }
            }
        }
    }
    Ok(sums)
}
