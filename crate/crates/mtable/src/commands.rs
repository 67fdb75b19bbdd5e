use std::io::Write;
use std::path::Path;
use std::time::Instant;

use mtable_core::bounds::{self, BoundConstants, BoundReport, Rational};
use mtable_core::distinct::{self, Algorithm, TableCensus, DEFAULT_SEGMENT_BITS};
use mtable_core::divisor::{self, DivisorSieve};
use mtable_core::multiplicity::{self, TableSums};
use mtable_core::series::{self, SeriesComparison};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::cache::CensusCache;
use crate::cli::{MethodArg, Suite, VerifyArgs};
use crate::parallel;
use crate::report::{Report, Row};
use crate::AppError;

/// The `n` values tabulated alongside the lower bound for `M(n)`.
pub const CENSUS_POINTS: [u64; 8] = [10, 50, 100, 1000, 2000, 3000, 4000, 5000];

/// Tolerance for the floating evaluations of the finite series identity.
pub const SERIES_RELATIVE_TOLERANCE: f64 = 1e-9;

const VIOLATION_COLUMNS: [&str; 7] = [
    "argument", "quantity", "value", "bound", "lower_bound", "margin", "status",
];

fn violation_row(r: &BoundReport) -> Row {
    Row::new()
        .with("argument", r.argument)
        .with("quantity", r.quantity.name())
        .with("value", r.value)
        .with("bound", r.bound)
        .with("lower_bound", r.lower_bound)
        .with("margin", r.margin)
        .with("status", r.status.name())
}

fn violations_report(summary: Row, reports: &[BoundReport]) -> Report {
    let violated = reports.iter().filter(|r| r.violated()).count();
    let borderline = reports.len() - violated;
    let summary = summary
        .with("violations", violated)
        .with("borderline", borderline)
        .with("passed", violated == 0);
    Report::new(summary)
        .with_table(
            "violations",
            VIOLATION_COLUMNS.to_vec(),
            reports.iter().map(violation_row).collect(),
        )
        .failed_if(violated > 0)
}

fn constants_row(row: Row, c: &BoundConstants) -> Row {
    row.with("nicolas_c", c.nicolas_c.to_string())
        .with("robin_c", c.robin_c.to_string())
        .with("gamma", c.gamma)
}

/// `M(n)` with the requested algorithm, timed.
pub fn count_distinct(
    n: u64,
    segment_bits: Option<u64>,
    parallel: bool,
) -> Result<TableCensus, AppError> {
    let start = Instant::now();
    let algorithm = if segment_bits.is_some() {
        Algorithm::Segmented
    } else {
        Algorithm::for_n(n)
    };
    let m = match algorithm {
        Algorithm::Dense => distinct::count_distinct_dense(n)?,
        Algorithm::Segmented => {
            let bits = segment_bits.unwrap_or(DEFAULT_SEGMENT_BITS);
            if parallel {
                parallel::count_distinct_segmented(n, bits)?
            } else {
                distinct::count_distinct_segmented(n, bits)?
            }
        }
    };
    Ok(TableCensus::new(n, m, algorithm, start.elapsed())?)
}

fn census_row(c: &TableCensus, source: &str) -> Row {
    Row::new()
        .with("n", c.n)
        .with("m", c.distinct_count)
        .with("density", c.density)
        .with("mean_multiplicity", c.mean_multiplicity)
        .with("algorithm", c.algorithm.name())
        .with("source", source)
        .with("elapsed_seconds", c.elapsed.as_secs_f64())
}

pub fn count(
    n: u64,
    segment_bits: Option<u64>,
    cache_path: Option<&Path>,
    parallel: bool,
    warn: &mut dyn Write,
) -> Result<Report, AppError> {
    let (c, cached) = census_values(&[n], segment_bits, cache_path, parallel, warn)?.remove(0);
    let mut row = Row::new()
        .with("n", c.n)
        .with("m", c.distinct_count)
        .with("density", c.density)
        .with("mean_multiplicity", c.mean_multiplicity)
        .with("algorithm", c.algorithm.name());
    if cache_path.is_some() {
        row.push("source", if cached { "cache" } else { "computed" });
    }
    row.push("elapsed_seconds", c.elapsed.as_secs_f64());
    Ok(Report::new(row))
}

pub fn multiplicity(n: u64, k: u64, method: MethodArg) -> Result<Report, AppError> {
    let mut row = Row::new().with("n", n).with("k", k);
    let report = match method {
        MethodArg::Direct => {
            row.push("direct", multiplicity::multiplicity_direct(n, k)?);
            Report::new(row)
        }
        MethodArg::Formula => {
            row.push("formula", multiplicity::multiplicity_formula(n, k)?);
            Report::new(row)
        }
        MethodArg::Both => {
            let direct = multiplicity::multiplicity_direct(n, k)?;
            let formula = multiplicity::multiplicity_formula(n, k)?;
            row.push("direct", direct);
            row.push("formula", formula);
            row.push("agree", direct == formula);
            Report::new(row).failed_if(direct != formula)
        }
    };
    Ok(report)
}

/// `M(n)` for every entry of `n_values`, reusing and updating the cache.
pub fn census_values(
    n_values: &[u64],
    segment_bits: Option<u64>,
    cache_path: Option<&Path>,
    parallel: bool,
    warn: &mut dyn Write,
) -> Result<Vec<(TableCensus, bool)>, AppError> {
    if n_values.is_empty() {
        return Err(AppError::Usage("census needs at least one n".into()));
    }
    let mut cache = match cache_path {
        Some(path) => Some(match CensusCache::open(path) {
            Ok(cache) => cache,
            Err(AppError::Cache { path, reason }) => {
                writeln!(warn, "warning: cache {path} is corrupt ({reason}); recomputing and overwriting")?;
                CensusCache::empty(path)
            }
            Err(e) => return Err(e),
        }),
        None => None,
    };
    let mut dirty = cache.as_ref().is_some_and(|c| c.is_empty() && c.path().exists());
    let mut out = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let cached = cache.as_ref().and_then(|c| c.get(n));
        let entry = match cached {
            Some(m) => (
                TableCensus::new(n, m, Algorithm::for_n(n), Default::default())?,
                true,
            ),
            None => {
                let c = count_distinct(n, segment_bits, parallel)?;
                if let Some(cache) = cache.as_mut() {
                    cache.insert(n, c.distinct_count);
                    dirty = true;
                }
                (c, false)
            }
        };
        out.push(entry);
    }
    if let (Some(cache), true) = (cache, dirty) {
        cache.save()?;
    }
    Ok(out)
}

pub fn census(
    n_values: &[u64],
    cache_path: Option<&Path>,
    parallel: bool,
    warn: &mut dyn Write,
) -> Result<Report, AppError> {
    let start = Instant::now();
    let rows: Vec<Row> = census_values(n_values, None, cache_path, parallel, warn)?
        .iter()
        .map(|(c, cached)| census_row(c, if *cached { "cache" } else { "computed" }))
        .collect();
    let summary = Row::new()
        .with("count", rows.len())
        .with("elapsed_seconds", start.elapsed().as_secs_f64());
    Ok(Report::new(summary).with_table(
        "census",
        vec!["n", "m", "density", "mean_multiplicity"],
        rows,
    ))
}

pub fn bounds(k: u64, robin_c: Rational) -> Result<Report, AppError> {
    let constants = BoundConstants::default().with_robin_c(robin_c);
    let profile = divisor::DivisorProfile::new(k)?;
    let integral = divisor::evaluate_integral(k)?;
    let d_report = bounds::divisor_bound_report(k, profile.d(), constants)?;
    let s_report = bounds::sigma_bound_report(k, profile.sigma(), constants)?;
    let bracket = bounds::integral_bracket_report(k, profile.d(), profile.sigma(), constants)?;
    let row = Row::new()
        .with("k", k)
        .with("d", profile.d())
        .with("sigma", profile.sigma())
        .with("nicolas_bound", d_report.bound)
        .with("divisor_margin", d_report.margin)
        .with("divisor_status", d_report.status.name())
        .with("robin_bound", s_report.bound)
        .with("sigma_margin", s_report.margin)
        .with("sigma_status", s_report.status.name())
        .with("integral", integral.closed_form)
        .with("integral_step_sum", integral.step_sum)
        .with("bracket_lower", bracket.lower_bound)
        .with("bracket_upper", bracket.bound)
        .with("bracket_status", bracket.status.name());
    let failed = [d_report, s_report, bracket].iter().any(BoundReport::violated) || !integral.agrees();
    Ok(Report::new(constants_row(row, &constants)).failed_if(failed))
}

fn series_passes(c: &SeriesComparison) -> bool {
    if c.exact {
        c.max_abs_deviation == 0.0
    } else {
        c.relative_deviation() <= SERIES_RELATIVE_TOLERANCE
    }
}

fn format_complex(s: Complex64) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else {
        format!("{}{:+}i", s.re, s.im)
    }
}

pub fn series(s: Complex64, n: u64, terms: Option<u64>) -> Result<Report, AppError> {
    let c = series::verify_square_identity(s, n)?;
    let passed = series_passes(&c);
    let mut row = Row::new()
        .with("s", format_complex(s))
        .with("n", n)
        .with("grid_sum_re", c.grid_sum.re)
        .with("grid_sum_im", c.grid_sum.im)
        .with("zeta_partial_squared_re", c.zeta_partial_squared.re)
        .with("zeta_partial_squared_im", c.zeta_partial_squared.im)
        .with("multiplicity_sum_re", c.multiplicity_sum.re)
        .with("multiplicity_sum_im", c.multiplicity_sum.im)
        .with("max_abs_deviation", c.max_abs_deviation)
        .with("relative_deviation", c.relative_deviation())
        .with("exact", c.exact)
        .with("passed", passed);
    if let Some(terms) = terms {
        if s.im != 0.0 {
            return Err(AppError::Usage("--terms needs a real s".into()));
        }
        let t = series::zeta_square_truncation(s.re, terms)?;
        row.push("terms", terms);
        row.push("truncated_sum", t.partial);
        row.push("zeta_squared", t.reference);
        row.push("truncation_gap", t.gap);
    }
    Ok(Report::new(row).failed_if(!passed))
}

pub fn verify(args: &VerifyArgs) -> Result<Report, AppError> {
    match args.suite {
        Suite::Identities => verify_identities(args.n.unwrap_or(100), args.parallel),
        Suite::DivisorBound | Suite::SigmaBound | Suite::Bracket => verify_sieve_suite(args),
        Suite::Theorem => verify_theorem(args.n.unwrap_or(500), args.parallel),
        Suite::Monotonicity => verify_monotonicity(args.max),
    }
}

fn sweep_range(max: u64) -> Result<(u64, u64), AppError> {
    if max < 3 {
        return Err(AppError::Usage(format!("--max must be at least 3, got {max}")));
    }
    Ok((3, max))
}

fn verify_sieve_suite(args: &VerifyArgs) -> Result<Report, AppError> {
    let (lo, hi) = sweep_range(args.max)?;
    let sieve = DivisorSieve::new(hi)?;
    let constants = BoundConstants::default().with_robin_c(args.robin_c);
    let (name, reports) = match (args.suite, args.parallel) {
        (Suite::DivisorBound, true) => ("divisor-bound", parallel::divisor_bound_sweep(&sieve, lo, hi, constants)?),
        (Suite::DivisorBound, false) => ("divisor-bound", bounds::divisor_bound_sweep(&sieve, lo, hi, constants)?),
        (Suite::SigmaBound, true) => ("sigma-bound", parallel::sigma_bound_sweep(&sieve, lo, hi, constants)?),
        (Suite::SigmaBound, false) => ("sigma-bound", bounds::sigma_bound_sweep(&sieve, lo, hi, constants)?),
        (_, true) => ("bracket", parallel::integral_bracket_sweep(&sieve, lo, hi, constants)?),
        (_, false) => ("bracket", bracket_sweep_sequential(&sieve, lo, hi, constants)?),
    };
    let mut summary = Row::new()
        .with("suite", name)
        .with("lo", lo)
        .with("hi", hi)
        .with("checked", hi - lo + 1);
    summary = constants_row(summary, &constants);
    let mut step_mismatches = 0;
    if args.suite == Suite::SigmaBound && (lo..=hi).contains(&12) {
        let at12 = bounds::sigma_bound_report(12, sieve.sigma(12), constants)?;
        summary.push("sigma_at_12", at12.value);
        summary.push("bound_at_12", at12.bound);
        summary.push("margin_at_12", at12.margin);
        summary.push("status_at_12", at12.status.name());
    }
    if args.suite == Suite::Bracket {
        step_mismatches = if args.parallel {
            parallel::integral_mismatches(lo, hi)?.len()
        } else {
            (lo..=hi)
                .map(divisor::evaluate_integral)
                .collect::<Result<Vec<_>, _>>()?
                .iter()
                .filter(|e| !e.agrees())
                .count()
        };
        summary.push("step_sum_mismatches", step_mismatches);
    }
    Ok(violations_report(summary, &reports).failed_if(step_mismatches > 0))
}

fn bracket_sweep_sequential(
    sieve: &DivisorSieve,
    lo: u64,
    hi: u64,
    constants: BoundConstants,
) -> mtable_core::Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for k in lo..=hi {
        let r = bounds::integral_bracket_report(k, sieve.d(k), sieve.sigma(k), constants)?;
        if !r.holds() {
            out.push(r);
        }
    }
    Ok(out)
}

fn check_row(check: &str, argument: u64, passed: bool, detail: String) -> Row {
    Row::new()
        .with("check", check)
        .with("argument", argument)
        .with("passed", passed)
        .with("detail", detail)
}

/// The exponents at which the finite series identity is checked.
pub fn identity_exponents() -> [Complex64; 5] {
    [
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(2.0, 0.0),
        Complex64::new(3.0, 0.0),
        Complex64::new(2.0, 3.0),
    ]
}

fn verify_identities(n: u64, parallel: bool) -> Result<Report, AppError> {
    let mut rows = Vec::new();

    let sums = multiplicity::table_sum_checks(n)?;
    let expected = TableSums::closed_form(n);
    rows.push(check_row(
        "table_sums",
        n,
        sums == expected,
        format!("weighted={} plain={}", sums.weighted, sums.plain),
    ));

    for s in identity_exponents() {
        let c = series::verify_square_identity(s, n)?;
        rows.push(check_row(
            "square_identity",
            n,
            series_passes(&c),
            format!("s={} relative_deviation={:.3e}", format_complex(s), c.relative_deviation()),
        ));
    }

    let mismatches = multiplicity::formula_mismatches(n)?;
    rows.push(check_row(
        "formula_equals_direct",
        n,
        mismatches.is_empty(),
        format!("mismatches={}", mismatches.len()),
    ));

    let unstable: Vec<u64> = if parallel {
        (1..=n)
            .into_par_iter()
            .map(|k| multiplicity::verify_stabilization(k).map(|ok| (k, ok)))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .filter_map(|(k, ok)| (!ok).then_some(k))
            .collect()
    } else {
        let mut bad = Vec::new();
        for k in 1..=n {
            if !multiplicity::verify_stabilization(k)? {
                bad.push(k);
            }
        }
        bad
    };
    rows.push(check_row(
        "stabilization",
        n,
        unstable.is_empty(),
        format!("unstable={}", unstable.len()),
    ));

    let failed = rows.iter().filter(|r| r.get("passed") == Some(&false.into())).count();
    let summary = Row::new()
        .with("suite", "identities")
        .with("n", n)
        .with("checks", rows.len())
        .with("failed", failed)
        .with("passed", failed == 0);
    Ok(Report::new(summary)
        .with_table("checks", vec!["check", "argument", "passed", "detail"], rows)
        .failed_if(failed > 0))
}

fn verify_theorem(max_n: u64, parallel: bool) -> Result<Report, AppError> {
    if max_n < 2 {
        return Err(AppError::Usage(format!("--n must be at least 2, got {max_n}")));
    }
    let mut ns: Vec<u64> = (2..=max_n).collect();
    ns.extend(CENSUS_POINTS.iter().filter(|&&p| p > max_n));
    let compute = |n: u64| distinct::count_distinct(n).map(|(m, _)| (n, m));
    let counts: Vec<(u64, u64)> = if parallel {
        ns.par_iter().map(|&n| compute(n)).collect::<Result<_, _>>()?
    } else {
        ns.iter().map(|&n| compute(n)).collect::<Result<_, _>>()?
    };
    let mut reports = Vec::new();
    let mut min_margin = f64::INFINITY;
    let mut chain_failures = 0usize;
    for &(n, m) in &counts {
        let theorem = bounds::verify_theorem_lower_bound(n, m)?;
        min_margin = min_margin.min(theorem.margin);
        let mean = bounds::verify_mean_bound(n, m)?;
        if !bounds::mean_chain_holds(n)? {
            chain_failures += 1;
        }
        reports.extend([theorem, mean].into_iter().filter(|r| !r.holds()));
    }
    let summary = Row::new()
        .with("suite", "theorem")
        .with("max_n", max_n)
        .with("checked", counts.len())
        .with("min_margin", min_margin)
        .with("chain_failures", chain_failures);
    Ok(violations_report(summary, &reports).failed_if(chain_failures > 0))
}

fn verify_monotonicity(max: u64) -> Result<Report, AppError> {
    let (lo, hi) = sweep_range(max)?;
    let increasing = if hi >= bounds::NICOLAS_INCREASING_FROM {
        bounds::nicolas_monotonicity_check(bounds::NICOLAS_INCREASING_FROM, hi)?
    } else {
        true
    };
    let (argmin, min) = bounds::nicolas_minimum(lo, hi)?;
    let above_floor = min > bounds::NICOLAS_FLOOR;
    let summary = Row::new()
        .with("suite", "monotonicity")
        .with("lo", lo)
        .with("hi", hi)
        .with("increasing_from", bounds::NICOLAS_INCREASING_FROM)
        .with("increasing", increasing)
        .with("minimum_at", argmin)
        .with("minimum", min)
        .with("floor", bounds::NICOLAS_FLOOR)
        .with("above_floor", above_floor)
        .with("passed", increasing && above_floor);
    Ok(Report::new(summary).failed_if(!(increasing && above_floor)))
}
