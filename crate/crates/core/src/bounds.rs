//! Explicit bounds for the divisor functions and the inequalities built on
//! them.
//!
//! * `𝔑(n) = n^{(ln 2 / ln ln n)(1 + c / ln ln n)}` bounds `d(n)` (`c = 387/200`).
//! * `ℜ(n) = e^γ n ln ln n + c n / ln ln n` bounds `σ(n)` (`c = 3241/5000`).
//!
//! Every check compares an exact integer against a binary64 bound. A check
//! is *violated* only when the integer is on the wrong side by more than a
//! relative slack of `1e-12`; anything within the slack band is reported as
//! *borderline*.

use core::fmt;
use core::str::FromStr;

use alloc::vec::Vec;

use crate::divisor::{self, DivisorSieve};
use crate::{Error, Result};

/// Relative slack separating a violation from floating-point rounding.
pub const RELATIVE_SLACK: f64 = 1e-12;

/// Euler's constant as used by the default Robin bound.
pub const EULER_GAMMA: f64 = 0.5772156649;

/// `𝔑` is increasing on integers from here on.
pub const NICOLAS_INCREASING_FROM: u64 = 114;

/// Lower bound claimed for `𝔑(n)` over its domain.
pub const NICOLAS_FLOOR: f64 = 114.1;

/// A positive rational constant `num / den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    num: u64,
    den: u64,
}

impl Rational {
    /// Panics if `den` is zero.
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational { num, den }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError;

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected a rational of the form NUM/DEN with DEN > 0")
    }
}

impl core::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = s.split_once('/').unwrap_or((s, "1"));
        let num = num.trim().parse().map_err(|_| ParseRationalError)?;
        let den: u64 = den.trim().parse().map_err(|_| ParseRationalError)?;
        if den == 0 {
            return Err(ParseRationalError);
        }
        Ok(Rational { num, den })
    }
}

pub const NICOLAS_C: Rational = Rational::new(387, 200);
pub const ROBIN_C: Rational = Rational::new(3241, 5000);
/// The Robin constant as usually quoted in the literature (`0.6483`).
pub const ROBIN_C_LITERATURE: Rational = Rational::new(6483, 10000);

/// Constants a report was computed with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub nicolas_c: Rational,
    pub robin_c: Rational,
    pub gamma: f64,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            nicolas_c: NICOLAS_C,
            robin_c: ROBIN_C,
            gamma: EULER_GAMMA,
        }
    }
}

impl BoundConstants {
    pub fn with_robin_c(self, robin_c: Rational) -> Self {
        BoundConstants { robin_c, ..self }
    }

    pub fn nicolas(&self, n: u64) -> Result<f64> {
        nicolas_bound(n, self.nicolas_c)
    }

    pub fn robin(&self, n: u64) -> Result<f64> {
        robin_bound_with_gamma(n, self.robin_c, self.gamma)
    }
}

fn log_log(n: u64, op: &'static str) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain(op, "n >= 3", n));
    }
    Ok(libm::log(libm::log(n as f64)))
}

/// `𝔑(n) = exp(ln n · (ln 2 / ln ln n) · (1 + c / ln ln n))`, for `n >= 3`.
pub fn nicolas_bound(n: u64, c: Rational) -> Result<f64> {
    let ll = log_log(n, "nicolas bound")?;
    let exponent = libm::log(n as f64) * (core::f64::consts::LN_2 / ll) * (1.0 + c.to_f64() / ll);
    Ok(libm::exp(exponent))
}

/// `ℜ(n) = e^γ n ln ln n + c n / ln ln n` with the default `γ`, for `n >= 3`.
pub fn robin_bound(n: u64, c: Rational) -> Result<f64> {
    robin_bound_with_gamma(n, c, EULER_GAMMA)
}

pub fn robin_bound_with_gamma(n: u64, c: Rational, gamma: f64) -> Result<f64> {
    let ll = log_log(n, "robin bound")?;
    let x = n as f64;
    Ok(libm::exp(gamma) * x * ll + c.to_f64() * x / ll)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    /// `d(n) <= 𝔑(n)`.
    DivisorCount,
    /// `σ(n) < ℜ(n)`.
    DivisorSum,
    /// `M(n) >= n² / 𝔑(n²)`.
    TableCount,
    /// `2k − ℜ(k) < k·d(k) − σ(k) < k·𝔑(k) − k − 1`.
    Integral,
    /// `n² / M(n) <= 𝔑(n²)`, checked as `n² <= M(n)·𝔑(n²)`.
    MeanMultiplicity,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::DivisorCount => "divisor_count",
            Quantity::DivisorSum => "divisor_sum",
            Quantity::TableCount => "table_count",
            Quantity::Integral => "integral",
            Quantity::MeanMultiplicity => "mean_multiplicity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `value <= bound`
    AtMost,
    /// `value < bound`
    Below,
    /// `value >= bound`
    AtLeast,
    /// `lower_bound < value < bound`
    Between,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    /// Within the slack band of the bound; neither clearly held nor violated.
    Borderline,
    Violated,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Holds => "holds",
            Status::Borderline => "borderline",
            Status::Violated => "violated",
        }
    }
}

/// Outcome of checking one inequality at one argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub argument: u64,
    pub quantity: Quantity,
    pub relation: Relation,
    /// The exact arithmetic side of the inequality.
    pub value: u64,
    /// The bound (the upper one for [`Relation::Between`]).
    pub bound: f64,
    pub lower_bound: Option<f64>,
    /// Distance to the nearest bound, positive when the inequality holds.
    pub margin: f64,
    pub status: Status,
    pub constants: BoundConstants,
}

impl BoundReport {
    pub fn violated(&self) -> bool {
        self.status == Status::Violated
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }
}

/// Margin and status for `value <= bound` (`upper`) or `value >= bound`.
fn classify(value: u64, bound: f64, upper: bool) -> (f64, Status) {
    let v = value as f64;
    let margin = if upper { bound - v } else { v - bound };
    let slack = RELATIVE_SLACK * libm::fabs(bound);
    let status = if margin < -slack || margin.is_nan() {
        Status::Violated
    } else if margin <= slack {
        Status::Borderline
    } else {
        Status::Holds
    };
    (margin, status)
}

fn worse(a: Status, b: Status) -> Status {
    match (a, b) {
        (Status::Violated, _) | (_, Status::Violated) => Status::Violated,
        (Status::Borderline, _) | (_, Status::Borderline) => Status::Borderline,
        _ => Status::Holds,
    }
}

/// `d(n) <= 𝔑(n)` for one argument with a known `d(n)`.
pub fn divisor_bound_report(n: u64, d: u64, constants: BoundConstants) -> Result<BoundReport> {
    let bound = constants.nicolas(n)?;
    let (margin, status) = classify(d, bound, true);
    Ok(BoundReport {
        argument: n,
        quantity: Quantity::DivisorCount,
        relation: Relation::AtMost,
        value: d,
        bound,
        lower_bound: None,
        margin,
        status,
        constants,
    })
}

/// `σ(n) < ℜ(n)` for one argument with a known `σ(n)`.
pub fn sigma_bound_report(n: u64, sigma: u64, constants: BoundConstants) -> Result<BoundReport> {
    let bound = constants.robin(n)?;
    let (margin, status) = classify(sigma, bound, true);
    Ok(BoundReport {
        argument: n,
        quantity: Quantity::DivisorSum,
        relation: Relation::Below,
        value: sigma,
        bound,
        lower_bound: None,
        margin,
        status,
        constants,
    })
}

fn check_sweep(lo: u64, hi: u64) -> Result<()> {
    if lo < 3 {
        return Err(Error::domain("bound sweep", "lo >= 3", lo));
    }
    if hi < lo {
        return Err(Error::domain("bound sweep", "hi >= lo", hi));
    }
    Ok(())
}

/// Non-holding `d(n) <= 𝔑(n)` reports for `n` in `lo..=hi`, using sieve
/// values. `hi` must be within the sieve.
pub fn divisor_bound_sweep(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    check_sweep(lo, hi)?;
    let mut out = Vec::new();
    for n in lo..=hi {
        let report = divisor_bound_report(n, sieve.d(n), constants)?;
        if !report.holds() {
            out.push(report);
        }
    }
    Ok(out)
}

/// Non-holding `σ(n) < ℜ(n)` reports for `n` in `lo..=hi`.
pub fn sigma_bound_sweep(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> Result<Vec<BoundReport>> {
    check_sweep(lo, hi)?;
    let mut out = Vec::new();
    for n in lo..=hi {
        let report = sigma_bound_report(n, sieve.sigma(n), constants)?;
        if !report.holds() {
            out.push(report);
        }
    }
    Ok(out)
}

/// Every `n` in `[lo, hi]` where `d(n) <= 𝔑(n)` does not clearly hold
/// (expected: none).
pub fn verify_divisor_bound(lo: u64, hi: u64) -> Result<Vec<BoundReport>> {
    check_sweep(lo, hi)?;
    let sieve = DivisorSieve::new(hi)?;
    divisor_bound_sweep(&sieve, lo, hi, BoundConstants::default())
}

/// Every `n` in `[lo, hi]` where `σ(n) < ℜ(n)` with Robin constant `c` does
/// not clearly hold.
pub fn verify_sigma_bound(lo: u64, hi: u64, c: Rational) -> Result<Vec<BoundReport>> {
    check_sweep(lo, hi)?;
    let sieve = DivisorSieve::new(hi)?;
    sigma_bound_sweep(&sieve, lo, hi, BoundConstants::default().with_robin_c(c))
}

/// `2k − ℜ(k) < k·d(k) − σ(k) < k·𝔑(k) − k − 1` with known `d(k)` and `σ(k)`.
pub fn integral_bracket_report(
    k: u64,
    d: u64,
    sigma: u64,
    constants: BoundConstants,
) -> Result<BoundReport> {
    let middle = divisor::closed_form_integral(k, d, sigma)?;
    let x = k as f64;
    let lower = 2.0 * x - constants.robin(k)?;
    let upper = x * constants.nicolas(k)? - x - 1.0;
    let (upper_margin, upper_status) = classify(middle, upper, true);
    let (lower_margin, lower_status) = classify(middle, lower, false);
    Ok(BoundReport {
        argument: k,
        quantity: Quantity::Integral,
        relation: Relation::Between,
        value: middle,
        bound: upper,
        lower_bound: Some(lower),
        margin: upper_margin.min(lower_margin),
        status: worse(upper_status, lower_status),
        constants,
    })
}

pub fn verify_integral_bracket(k: u64) -> Result<BoundReport> {
    if k < 3 {
        return Err(Error::domain("integral bracket", "k >= 3", k));
    }
    integral_bracket_report(
        k,
        divisor::divisor_count(k)?,
        divisor::divisor_sum(k)?,
        BoundConstants::default(),
    )
}

fn square(n: u64) -> Result<u64> {
    n.checked_mul(n).ok_or(Error::Overflow {
        what: "n²",
        argument: n,
    })
}

/// `M(n) >= n² / 𝔑(n²)` for a supplied `m = M(n)`.
pub fn verify_theorem_lower_bound(n: u64, m: u64) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::domain("table count lower bound", "n >= 2", n));
    }
    let constants = BoundConstants::default();
    let n2 = square(n)?;
    let bound = n2 as f64 / constants.nicolas(n2)?;
    let (margin, status) = classify(m, bound, false);
    Ok(BoundReport {
        argument: n,
        quantity: Quantity::TableCount,
        relation: Relation::AtLeast,
        value: m,
        bound,
        lower_bound: None,
        margin,
        status,
        constants,
    })
}

/// `n² / M(n) <= 𝔑(n²)`, evaluated as `n² <= M(n)·𝔑(n²)` so the exact side
/// stays an integer.
pub fn verify_mean_bound(n: u64, m: u64) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::domain("mean multiplicity bound", "n >= 2", n));
    }
    let constants = BoundConstants::default();
    let n2 = square(n)?;
    let bound = m as f64 * constants.nicolas(n2)?;
    let (margin, status) = classify(n2, bound, true);
    Ok(BoundReport {
        argument: n,
        quantity: Quantity::MeanMultiplicity,
        relation: Relation::AtMost,
        value: n2,
        bound,
        lower_bound: None,
        margin,
        status,
        constants,
    })
}

/// `max{12, 𝔑(n²)} = 𝔑(n²)`: the small-argument divisor maximum never
/// dominates the chain of bounds on the mean multiplicity.
pub fn mean_chain_holds(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::domain("mean multiplicity bound", "n >= 2", n));
    }
    let bound = nicolas_bound(square(n)?, NICOLAS_C)?;
    Ok((divisor::SMALL_RANGE_MAX_DIVISORS as f64).max(bound) == bound)
}

/// `true` iff `𝔑(n + 1) > 𝔑(n)` for every integer `n` in `[lo, hi)`.
pub fn nicolas_monotonicity_check(lo: u64, hi: u64) -> Result<bool> {
    if lo < NICOLAS_INCREASING_FROM {
        return Err(Error::domain("nicolas monotonicity", "lo >= 114", lo));
    }
    let mut prev = nicolas_bound(lo, NICOLAS_C)?;
    for n in lo + 1..=hi {
        let next = nicolas_bound(n, NICOLAS_C)?;
        if next <= prev {
            return Ok(false);
        }
        prev = next;
    }
    Ok(true)
}

/// The integer `n` in `[lo, hi]` minimizing `𝔑(n)`, with the minimum.
pub fn nicolas_minimum(lo: u64, hi: u64) -> Result<(u64, f64)> {
    check_sweep(lo, hi)?;
    let mut best = (lo, nicolas_bound(lo, NICOLAS_C)?);
    for n in lo + 1..=hi {
        let v = nicolas_bound(n, NICOLAS_C)?;
        if v < best.1 {
            best = (n, v);
        }
    }
    Ok(best)
}

/// Reference curves for `M(n)/n²`. Informational only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceDensities {
    /// `1 + ln ln 2 / ln 2`, the exponent as printed alongside the table.
    pub erdos_paper_c: f64,
    /// `1 − (1 + ln ln 2) / ln 2`, the usual value of the exponent.
    pub erdos_literature_c: f64,
    /// `(ln n)^(−c)` with the printed `c`.
    pub erdos_density: f64,
    /// `(ln n)^(−c) (ln ln n)^(−3/2)` with the printed `c`.
    pub ford_density: f64,
}

impl ReferenceDensities {
    pub fn exponents_agree(&self) -> bool {
        libm::fabs(self.erdos_paper_c - self.erdos_literature_c) < 1e-12
    }
}

pub fn erdos_paper_c() -> f64 {
    let ln2 = core::f64::consts::LN_2;
    1.0 + libm::log(ln2) / ln2
}

pub fn erdos_literature_c() -> f64 {
    let ln2 = core::f64::consts::LN_2;
    1.0 - (1.0 + libm::log(ln2)) / ln2
}

pub fn reference_densities(n: u64) -> Result<ReferenceDensities> {
    let ll = log_log(n, "reference densities")?;
    let c = erdos_paper_c();
    // (ln n)^(-c) = exp(-c · ln ln n)
    let erdos_density = libm::exp(-c * ll);
    Ok(ReferenceDensities {
        erdos_paper_c: c,
        erdos_literature_c: erdos_literature_c(),
        erdos_density,
        ford_density: erdos_density * libm::pow(ll, -1.5),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nicolas_values() {
        let v = nicolas_bound(100, NICOLAS_C).unwrap();
        assert!((v - 114.262_2).abs() < 1e-3, "{v}");
        let v = nicolas_bound(114, NICOLAS_C).unwrap();
        assert!(v > 114.1 && v < 115.0, "{v}");
        assert!(nicolas_bound(3, NICOLAS_C).unwrap() > 1e70);
        let v = nicolas_bound(4, NICOLAS_C).unwrap();
        assert!((v / 7.020_213_4e8 - 1.0).abs() < 1e-6, "{v}");
        assert!(matches!(nicolas_bound(2, NICOLAS_C), Err(Error::Domain { .. })));
        assert!(nicolas_bound(1, NICOLAS_C).is_err());
    }

    #[test]
    fn robin_values() {
        let v = robin_bound(3, ROBIN_C).unwrap();
        assert!((v - 21.2).abs() < 0.1, "{v}");
        let v = robin_bound(12, ROBIN_C).unwrap();
        assert!((v - 27.999_820_054).abs() < 1e-8, "{v}");
        assert!(robin_bound(100, ROBIN_C).unwrap() > 217.0);
        assert!(robin_bound(2, ROBIN_C).is_err());
    }

    #[test]
    fn robin_constant_at_twelve() {
        let paper = sigma_bound_report(12, 28, BoundConstants::default()).unwrap();
        assert_eq!(paper.status, Status::Violated);
        assert!((paper.margin + 1.799_459e-4).abs() < 1e-9, "{}", paper.margin);
        let lit = sigma_bound_report(12, 28, BoundConstants::default().with_robin_c(ROBIN_C_LITERATURE))
            .unwrap();
        assert_eq!(lit.status, Status::Holds);
    }

    #[test]
    fn classification_band() {
        assert_eq!(classify(10, 10.0, true).1, Status::Borderline);
        assert_eq!(classify(10, 10.0 + 1e-13, true).1, Status::Borderline);
        assert_eq!(classify(10, 9.9, true).1, Status::Violated);
        assert_eq!(classify(10, 10.1, true).1, Status::Holds);
        assert_eq!(classify(10, 9.9, false).1, Status::Holds);
        assert_eq!(classify(10, 10.1, false).1, Status::Violated);
        assert_eq!(classify(10, f64::NAN, true).1, Status::Violated);
    }

    #[test]
    fn small_sweeps() {
        assert!(verify_divisor_bound(3, 10_000).unwrap().is_empty());
        assert!(verify_divisor_bound(3, 3).unwrap().is_empty());
        assert!(verify_sigma_bound(3, 11, ROBIN_C).unwrap().is_empty());
        let v = verify_sigma_bound(12, 12, ROBIN_C).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].argument, 12);
        assert!(verify_sigma_bound(2, 12, ROBIN_C).is_err());
        assert!(verify_sigma_bound(20, 12, ROBIN_C).is_err());
    }

    #[test]
    fn bracket_examples() {
        let r = verify_integral_bracket(12).unwrap();
        assert_eq!(r.value, 44);
        let lower = r.lower_bound.unwrap();
        assert!((lower + 3.999_82).abs() < 1e-4, "{lower}");
        assert!(r.holds());
        let r = verify_integral_bracket(3).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.lower_bound.unwrap() < 0.0);
        assert!(r.holds());
        assert!(verify_integral_bracket(10_000).unwrap().holds());
        assert!(verify_integral_bracket(2).is_err());
    }

    #[test]
    fn theorem_and_mean() {
        let r = verify_theorem_lower_bound(2, 3).unwrap();
        assert!(r.holds());
        assert!((r.bound - 4.0 / 7.020_213_4e8).abs() < 1e-14);
        assert!(verify_theorem_lower_bound(100, 2906).unwrap().holds());
        assert!(verify_theorem_lower_bound(5000, 5_770_205).unwrap().holds());
        assert!(verify_theorem_lower_bound(1, 1).is_err());
        assert!(verify_mean_bound(2, 3).unwrap().holds());
        assert!(verify_mean_bound(1000, 248_083).unwrap().holds());
        assert!(verify_mean_bound(10, 42).unwrap().holds());
        assert!(mean_chain_holds(2).unwrap());
    }

    #[test]
    fn monotonicity() {
        assert!(nicolas_monotonicity_check(114, 115).unwrap());
        assert!(nicolas_monotonicity_check(114, 10_000).unwrap());
        assert!(nicolas_monotonicity_check(3, 10).is_err());
        // still decreasing just below the threshold
        assert!(nicolas_bound(113, NICOLAS_C).unwrap() > nicolas_bound(114, NICOLAS_C).unwrap());
        let (at, min) = nicolas_minimum(3, 10_000).unwrap();
        assert!(min > NICOLAS_FLOOR, "min {min} at {at}");
    }

    #[test]
    fn reference_curve_exponents() {
        let r = reference_densities(1000).unwrap();
        assert!((r.erdos_paper_c - 0.471_233_627).abs() < 1e-8);
        assert!((r.erdos_literature_c - 0.086_071_332).abs() < 1e-8);
        assert!(!r.exponents_agree());
        assert!(r.erdos_density > 0.0 && r.ford_density > 0.0);
        assert!(reference_densities(10).unwrap().ford_density.is_finite());
        assert!(reference_densities(2).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!("3241/5000".parse::<Rational>().unwrap(), ROBIN_C);
        assert_eq!("2".parse::<Rational>().unwrap(), Rational::new(2, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x/2".parse::<Rational>().is_err());
        assert_eq!(alloc::format!("{}", NICOLAS_C), "387/200");
    }
}
