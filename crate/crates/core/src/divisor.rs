//! Divisor arithmetic: `d(k)`, `σ(k)`, divisor lists and the incomplete
//! divisor function `d(k; x) = #{m | k : m <= x}`.
//!
//! Single values are handled by trial division up to `√k`; ranges by
//! accumulating over multiples. Every count and sum is an exact `u64` with
//! checked overflow.

use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest value of `d(m)` for `1 <= m <= 114` (attained at 60, 72, 84, 90, 96).
pub const SMALL_RANGE_MAX_DIVISORS: u64 = 12;

pub(crate) fn try_filled<T: Clone>(len: usize, value: T) -> Result<Vec<T>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len)
        .map_err(|_| Error::Allocation { cells: len })?;
    v.resize(len, value);
    Ok(v)
}

fn nonzero(k: u64, name: &'static str) -> Result<()> {
    if k == 0 {
        Err(Error::ZeroArgument { name })
    } else {
        Ok(())
    }
}

/// Calls `f(small, large)` for every divisor pair `small * large == k` with
/// `small <= large`, in ascending order of `small`.
fn for_each_divisor_pair(k: u64, mut f: impl FnMut(u64, u64)) {
    let mut i = 1u64;
    while i <= k / i {
        if k % i == 0 {
            f(i, k / i);
        }
        i += 1;
    }
}

/// The positive divisors of `k` in ascending order.
pub fn divisor_list(k: u64) -> Result<Vec<u64>> {
    nonzero(k, "k")?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    for_each_divisor_pair(k, |a, b| {
        small.push(a);
        if a != b {
            large.push(b);
        }
    });
    small.extend(large.into_iter().rev());
    Ok(small)
}

/// `d(k)`, the number of positive divisors of `k`.
pub fn divisor_count(k: u64) -> Result<u64> {
    nonzero(k, "k")?;
    let mut count = 0;
    for_each_divisor_pair(k, |a, b| count += if a == b { 1 } else { 2 });
    Ok(count)
}

/// `σ(k)`, the sum of the positive divisors of `k`.
pub fn divisor_sum(k: u64) -> Result<u64> {
    nonzero(k, "k")?;
    let mut sum = Some(0u64);
    for_each_divisor_pair(k, |a, b| {
        sum = sum.and_then(|s| s.checked_add(a));
        if a != b {
            sum = sum.and_then(|s| s.checked_add(b));
        }
    });
    sum.ok_or(Error::Overflow {
        what: "divisor sum",
        argument: k,
    })
}

/// Number of entries of an ascending divisor list that are `<= bound`.
pub fn divisors_at_most(divisors: &[u64], bound: u64) -> u64 {
    divisors.partition_point(|&m| m <= bound) as u64
}

/// `d(k; x)`: the number of divisors of `k` not exceeding the real `x`.
///
/// The comparison is exact: an integer `m` satisfies `m <= x` iff
/// `m <= floor(x)`, and `floor(x)` is representable as an integer. NaN and
/// any `x < 1` give 0.
pub fn incomplete_divisor_count(k: u64, x: f64) -> Result<u64> {
    let divisors = divisor_list(k)?;
    Ok(incomplete_count_in(&divisors, x))
}

pub(crate) fn incomplete_count_in(divisors: &[u64], x: f64) -> u64 {
    // `!(x >= 1.0)` also catches NaN
    if !(x >= 1.0) {
        return 0;
    }
    let floor = libm::floor(x);
    if floor >= 18_446_744_073_709_551_616.0 {
        return divisors.len() as u64;
    }
    divisors_at_most(divisors, floor as u64)
}

/// A positive integer together with its divisor set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisorProfile {
    k: u64,
    divisors: Vec<u64>,
    sigma: u64,
}

impl DivisorProfile {
    pub fn new(k: u64) -> Result<Self> {
        let divisors = divisor_list(k)?;
        let sigma = divisors
            .iter()
            .try_fold(0u64, |acc, &m| acc.checked_add(m))
            .ok_or(Error::Overflow {
                what: "divisor sum",
                argument: k,
            })?;
        Ok(DivisorProfile { k, divisors, sigma })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn d(&self) -> u64 {
        self.divisors.len() as u64
    }

    pub fn sigma(&self) -> u64 {
        self.sigma
    }

    /// `d(k; x)` for this `k`.
    pub fn incomplete_count(&self, x: f64) -> u64 {
        incomplete_count_in(&self.divisors, x)
    }
}

/// `d[m]` and `σ[m]` for every `1 <= m <= N`, built by a single pass over
/// multiples (`Θ(N log N)` additions).
#[derive(Debug, Clone)]
pub struct DivisorSieve {
    d: Vec<u64>,
    sigma: Vec<u64>,
}

impl DivisorSieve {
    pub fn new(limit: u64) -> Result<Self> {
        nonzero(limit, "N")?;
        let len = usize::try_from(limit)
            .ok()
            .and_then(|l| l.checked_add(1))
            .ok_or(Error::Allocation { cells: usize::MAX })?;
        let mut d = try_filled(len, 0u64)?;
        let mut sigma = try_filled(len, 0u64)?;
        for i in 1..len {
            for j in (i..len).step_by(i) {
                d[j] += 1;
                sigma[j] = sigma[j].checked_add(i as u64).ok_or(Error::Overflow {
                    what: "divisor sum",
                    argument: j as u64,
                })?;
            }
        }
        Ok(DivisorSieve { d, sigma })
    }

    /// The sieve limit `N`.
    pub fn limit(&self) -> u64 {
        (self.d.len() - 1) as u64
    }

    /// `d(m)`; panics if `m` is 0 or beyond the limit.
    pub fn d(&self, m: u64) -> u64 {
        assert!(m >= 1, "divisor sieve is indexed from 1");
        self.d[m as usize]
    }

    /// `σ(m)`; panics if `m` is 0 or beyond the limit.
    pub fn sigma(&self, m: u64) -> u64 {
        assert!(m >= 1, "divisor sieve is indexed from 1");
        self.sigma[m as usize]
    }

    /// `d[1..=N]` as a slice (index 0 holds `d(1)`).
    pub fn d_values(&self) -> &[u64] {
        &self.d[1..]
    }

    pub fn sigma_values(&self) -> &[u64] {
        &self.sigma[1..]
    }
}

/// Sorted divisor lists for every `1 <= m <= N`, stored contiguously.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    offsets: Vec<usize>,
    divisors: Vec<u64>,
}

impl DivisorTable {
    pub fn new(limit: u64) -> Result<Self> {
        nonzero(limit, "N")?;
        let n = usize::try_from(limit).map_err(|_| Error::Allocation { cells: usize::MAX })?;
        let mut offsets = try_filled(n + 2, 0usize)?;
        for i in 1..=n {
            for j in (i..=n).step_by(i) {
                offsets[j + 1] += 1;
            }
        }
        for j in 1..=n + 1 {
            offsets[j] += offsets[j - 1];
        }
        let mut divisors = try_filled(offsets[n + 1], 0u64)?;
        let mut cursor = offsets.clone();
        // ascending outer loop leaves each list sorted
        for i in 1..=n {
            for j in (i..=n).step_by(i) {
                divisors[cursor[j]] = i as u64;
                cursor[j] += 1;
            }
        }
        Ok(DivisorTable { offsets, divisors })
    }

    pub fn limit(&self) -> u64 {
        (self.offsets.len() - 2) as u64
    }

    /// Ascending divisors of `m`; panics outside `1..=N`.
    pub fn divisors_of(&self, m: u64) -> &[u64] {
        assert!(m >= 1, "divisor table is indexed from 1");
        let m = m as usize;
        &self.divisors[self.offsets[m]..self.offsets[m + 1]]
    }
}

/// `Σ_i (d_{i+1} - d_i) · i` over consecutive divisors `d_1 < d_2 < ...`:
/// the exact value of `∫_1^k d(k; x) dx` read off the step function.
pub fn divisor_step_integral(divisors: &[u64]) -> Result<u64> {
    divisors
        .windows(2)
        .enumerate()
        .try_fold(0u64, |acc, (i, w)| {
            (w[1] - w[0])
                .checked_mul(i as u64 + 1)
                .and_then(|step| acc.checked_add(step))
        })
        .ok_or(Error::Overflow {
            what: "divisor step integral",
            argument: divisors.last().copied().unwrap_or(0),
        })
}

/// `∫_1^k d(k; x) dx = k·d(k) − σ(k)`.
pub fn incomplete_divisor_integral(k: u64) -> Result<u64> {
    let d = divisor_count(k)?;
    let sigma = divisor_sum(k)?;
    closed_form_integral(k, d, sigma)
}

pub(crate) fn closed_form_integral(k: u64, d: u64, sigma: u64) -> Result<u64> {
    k.checked_mul(d)
        .and_then(|kd| kd.checked_sub(sigma))
        .ok_or(Error::Overflow {
            what: "k·d(k) − σ(k)",
            argument: k,
        })
}

/// Both evaluations of `∫_1^k d(k; x) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegralEvaluation {
    pub k: u64,
    pub closed_form: u64,
    pub step_sum: u64,
}

impl IntegralEvaluation {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.step_sum
    }
}

/// Evaluates the integral by the closed form and by the divisor step sum.
pub fn evaluate_integral(k: u64) -> Result<IntegralEvaluation> {
    let profile = DivisorProfile::new(k)?;
    Ok(IntegralEvaluation {
        k,
        closed_form: closed_form_integral(k, profile.d(), profile.sigma())?,
        step_sum: divisor_step_integral(profile.divisors())?,
    })
}
