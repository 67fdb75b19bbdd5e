//! Dirichlet series over the finite table.
//!
//! For every complex `s`,
//! `Σ_{i,j <= n} (ij)^(−s) = ζ_n(s)² = Σ_{k <= n²} 𝔐(n; k) k^(−s)`,
//! and as `n → ∞` the right side becomes `Σ_k d(k) k^(−s) = ζ(s)²`.
//!
//! Powers are formed as `exp(−s · ln i)` with the real logarithm of a
//! positive integer, so no branch cut is involved. Floating sums use
//! Neumaier compensation; `s = 0` and `s = −1` are evaluated in integers.

use core::f64::consts::PI;

use num_complex::Complex64;

use crate::divisor::DivisorSieve;
use crate::multiplicity::multiplicity_histogram;
use crate::{Error, Result};

/// Largest `n` accepted by [`verify_square_identity`].
pub const SQUARE_IDENTITY_MAX_N: u64 = 2000;

/// Terms summed directly when no closed form for `ζ(s)` is known.
pub const ZETA_REFERENCE_TERMS: u64 = 10_000_000;

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Componentwise [`CompensatedSum`] for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `m^(−s)` for a positive integer `m`.
pub fn integer_power(m: u64, s: Complex64) -> Complex64 {
    (-s * libm::log(m as f64)).exp()
}

/// `ζ_n(s) = Σ_{i=1}^{n} i^(−s)`, summed in ascending `i`.
pub fn zeta_partial(s: Complex64, n: u64) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    let mut acc = ComplexSum::default();
    for i in 1..=n {
        acc.add(integer_power(i, s));
    }
    Ok(acc.value())
}

/// The three evaluations of the finite identity at one `(s, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesComparison {
    pub s: Complex64,
    pub n: u64,
    /// `Σ_{i,j <= n} (ij)^(−s)`.
    pub grid_sum: Complex64,
    /// `ζ_n(s)²`.
    pub zeta_partial_squared: Complex64,
    /// `Σ_{k <= n²} 𝔐(n; k) k^(−s)`.
    pub multiplicity_sum: Complex64,
    pub max_abs_deviation: f64,
    /// All three values were computed exactly in integers.
    pub exact: bool,
}

impl SeriesComparison {
    /// `max_abs_deviation / |ζ_n(s)²|`.
    pub fn relative_deviation(&self) -> f64 {
        let scale = self.zeta_partial_squared.norm();
        if self.max_abs_deviation == 0.0 {
            0.0
        } else {
            self.max_abs_deviation / scale
        }
    }
}

/// `s` as a non-positive integer power `0` or `1` if it is `0` or `−1`.
fn exact_power(s: Complex64) -> Option<u32> {
    match (s.re, s.im) {
        (re, im) if re == 0.0 && im == 0.0 => Some(0),
        (re, im) if re == -1.0 && im == 0.0 => Some(1),
        _ => None,
    }
}

fn max_deviation(values: [Complex64; 3]) -> f64 {
    let [a, b, c] = values;
    (a - b).norm().max((a - c).norm()).max((b - c).norm())
}

/// Evaluates the grid sum, `ζ_n(s)²` and the multiplicity-weighted sum.
pub fn verify_square_identity(s: Complex64, n: u64) -> Result<SeriesComparison> {
    if n == 0 {
        return Err(Error::ZeroArgument { name: "n" });
    }
    if n > SQUARE_IDENTITY_MAX_N {
        return Err(Error::domain("square identity", "n <= 2000", n));
    }
    let histogram = multiplicity_histogram(n)?;
    if let Some(power) = exact_power(s) {
        return Ok(exact_comparison(s, n, power, &histogram));
    }

    let mut grid = ComplexSum::default();
    for i in 1..=n {
        for j in 1..=n {
            grid.add(integer_power(i * j, s));
        }
    }
    let zeta = zeta_partial(s, n)?;
    let mut weighted = ComplexSum::default();
    for (k, &count) in histogram.iter().enumerate().skip(1) {
        if count != 0 {
            weighted.add(integer_power(k as u64, s) * f64::from(count));
        }
    }
    let values = [grid.value(), zeta * zeta, weighted.value()];
    Ok(SeriesComparison {
        s,
        n,
        grid_sum: values[0],
        zeta_partial_squared: values[1],
        multiplicity_sum: values[2],
        max_abs_deviation: max_deviation(values),
        exact: false,
    })
}

fn exact_comparison(s: Complex64, n: u64, power: u32, histogram: &[u32]) -> SeriesComparison {
    let n = u128::from(n);
    let mut grid = 0u128;
    for i in 1..=n {
        for j in 1..=n {
            grid += (i * j).pow(power);
        }
    }
    let zeta: u128 = (1..=n).map(|i| i.pow(power)).sum();
    let weighted: u128 = histogram
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &count)| u128::from(count) * (k as u128).pow(power))
        .sum();
    let values = [grid, zeta * zeta, weighted];
    let deviation = values
        .iter()
        .flat_map(|a| values.iter().map(move |b| a.abs_diff(*b)))
        .max()
        .unwrap_or(0);
    let to_complex = |v: u128| Complex64::new(v as f64, 0.0);
    SeriesComparison {
        s,
        n: n as u64,
        grid_sum: to_complex(values[0]),
        zeta_partial_squared: to_complex(values[1]),
        multiplicity_sum: to_complex(values[2]),
        max_abs_deviation: deviation as f64,
        exact: true,
    }
}

/// Truncation of `Σ_k d(k) k^(−s)` against `ζ(s)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub s: f64,
    pub terms: u64,
    pub partial: f64,
    pub reference: f64,
    pub gap: f64,
}

/// `ζ(s)` for real `s >= 1.5`: closed forms at 2 and 4, otherwise
/// [`ZETA_REFERENCE_TERMS`] terms plus the integral tail `N^(1−s)/(s−1)`.
pub fn zeta_reference(s: f64) -> Result<f64> {
    check_truncation_s(s)?;
    if s == 2.0 {
        return Ok(PI * PI / 6.0);
    }
    if s == 4.0 {
        return Ok(libm::pow(PI, 4.0) / 90.0);
    }
    let mut acc = CompensatedSum::default();
    for i in 1..=ZETA_REFERENCE_TERMS {
        acc.add(libm::exp(-s * libm::log(i as f64)));
    }
    let n = ZETA_REFERENCE_TERMS as f64;
    acc.add(libm::pow(n, 1.0 - s) / (s - 1.0));
    Ok(acc.value())
}

fn check_truncation_s(s: f64) -> Result<()> {
    if !(s >= 1.5) || !s.is_finite() {
        return Err(Error::RealDomain {
            op: "zeta square truncation",
            requirement: "finite s >= 1.5",
            got: s,
        });
    }
    Ok(())
}

/// `Σ_{k <= K} d(k) k^(−s)` with `d` from a sieve, against `ζ(s)²`.
pub fn zeta_square_truncation(s: f64, terms: u64) -> Result<Truncation> {
    check_truncation_s(s)?;
    if terms < 10 {
        return Err(Error::domain("zeta square truncation", "K >= 10", terms));
    }
    let zeta = zeta_reference(s)?;
    zeta_square_truncation_with(s, &DivisorSieve::new(terms)?, terms, zeta * zeta)
}

/// As [`zeta_square_truncation`] with a prebuilt sieve (`terms <= limit`)
/// and a precomputed `ζ(s)²`.
pub fn zeta_square_truncation_with(
    s: f64,
    sieve: &DivisorSieve,
    terms: u64,
    reference: f64,
) -> Result<Truncation> {
    check_truncation_s(s)?;
    if terms > sieve.limit() {
        return Err(Error::domain("zeta square truncation", "K within the sieve", terms));
    }
    let mut acc = CompensatedSum::default();
    for k in 1..=terms {
        acc.add(sieve.d(k) as f64 * libm::exp(-s * libm::log(k as f64)));
    }
    let partial = acc.value();
    Ok(Truncation {
        s,
        terms,
        partial,
        reference,
        gap: libm::fabs(partial - reference),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_zeta_examples() {
        assert_eq!(zeta_partial(Complex64::new(0.0, 0.0), 7).unwrap(), Complex64::new(7.0, 0.0));
        let z = zeta_partial(Complex64::new(-1.0, 0.0), 10).unwrap();
        assert!((z.re - 55.0).abs() < 1e-12 && z.im == 0.0);
        let z = zeta_partial(Complex64::new(2.0, 0.0), 10_000).unwrap();
        assert!((z.re - (PI * PI / 6.0 - 1e-4)).abs() < 1e-7);
        assert!(zeta_partial(Complex64::new(2.0, 0.0), 0).is_err());
    }

    #[test]
    fn compensation_recovers_small_terms() {
        let mut acc = CompensatedSum::default();
        acc.add(1.0);
        for _ in 0..10 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-15).abs() < 1e-30);
    }

    #[test]
    fn exact_special_cases() {
        let c = verify_square_identity(Complex64::new(0.0, 0.0), 10).unwrap();
        assert!(c.exact);
        assert_eq!(c.grid_sum.re, 100.0);
        assert_eq!(c.multiplicity_sum.re, 100.0);
        assert_eq!(c.max_abs_deviation, 0.0);
        let c = verify_square_identity(Complex64::new(-1.0, 0.0), 10).unwrap();
        assert_eq!(c.zeta_partial_squared.re, 3025.0);
        assert_eq!(c.max_abs_deviation, 0.0);
    }

    #[test]
    fn complex_point() {
        let c = verify_square_identity(Complex64::new(2.0, 3.0), 50).unwrap();
        assert!(!c.exact);
        assert!(c.relative_deviation() <= 1e-9, "{}", c.relative_deviation());
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            verify_square_identity(Complex64::new(2.0, 0.0), SQUARE_IDENTITY_MAX_N + 1),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn truncation_domain() {
        assert!(matches!(zeta_square_truncation(1.2, 100), Err(Error::RealDomain { .. })));
        assert!(zeta_square_truncation(f64::NAN, 100).is_err());
        assert!(zeta_square_truncation(2.0, 9).is_err());
    }

    #[test]
    fn truncation_at_two() {
        let t = zeta_square_truncation(2.0, 1000).unwrap();
        assert!((t.reference - 2.705_808_084_3).abs() < 1e-10);
        assert!(t.partial < t.reference);
        // tail ≈ (ln K + 2γ)/K
        assert!(t.gap < 1e-2);
    }
}
