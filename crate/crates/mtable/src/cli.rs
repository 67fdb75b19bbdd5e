//! Argument grammar and dispatch for the `mtable` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mtable_core::bounds::{Rational, ROBIN_C};
use mtable_core::distinct::MIN_SEGMENT_BITS;
use num_complex::Complex64;

use crate::commands;
use crate::report::Format;
use crate::AppError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "mtable", version, about = "Multiplication table arithmetic and bound verification")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count the distinct products M(n) of the n × n table.
    Count(CountArgs),
    /// How often k occurs in the n × n table.
    Multiplicity(MultiplicityArgs),
    /// M(n), density and mean multiplicity for a list of n.
    Census(CensusArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// d, σ, the explicit bounds and the integral bracket at one k.
    Bounds(BoundsArgs),
    /// Compare the three forms of Σ (ij)^(-s) at one s.
    Series(SeriesArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: u64,
    /// Use the segmented counter with windows of this many values.
    #[arg(long, value_parser = parse_segment_bits)]
    pub segment_bits: Option<u64>,
    /// CSV cache of previously computed M(n).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Direct,
    Formula,
    Both,
}

#[derive(Debug, Args)]
pub struct MultiplicityArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Both)]
    pub method: MethodArg,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// Comma-separated list of n.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<u64>,
    /// CSV cache of previously computed M(n).
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Identities,
    DivisorBound,
    SigmaBound,
    Theorem,
    Bracket,
    Monotonicity,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Upper end of the sieve-backed sweeps.
    #[arg(long, default_value_t = 1_000_000)]
    pub max: u64,
    /// Table size for `identities` (default 100) and the upper end of the
    /// `theorem` sweep (default 500).
    #[arg(long)]
    pub n: Option<u64>,
    /// Robin constant for `sigma-bound`, as NUM/DEN.
    #[arg(long, default_value_t = ROBIN_C)]
    pub robin_c: Rational,
    #[arg(long)]
    pub parallel: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = ROBIN_C)]
    pub robin_c: Rational,
}

#[derive(Debug, Args)]
pub struct SeriesArgs {
    /// Exponent as RE or RE,IM.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    pub s: Complex64,
    #[arg(long)]
    pub n: u64,
    /// Also truncate Σ d(k) k^(-s) after this many terms (real s >= 1.5).
    #[arg(long)]
    pub terms: Option<u64>,
}

fn parse_segment_bits(s: &str) -> Result<u64, String> {
    let bits: u64 = s.parse().map_err(|e| format!("{e}"))?;
    if bits < MIN_SEGMENT_BITS {
        return Err(format!("segment bits must be at least {MIN_SEGMENT_BITS}"));
    }
    Ok(bits)
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let part = |p: &str| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}"));
    let z = Complex64::new(part(re)?, part(im)?);
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err("s must be finite".into());
    }
    Ok(z)
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code: 0 success, 1 violations found, 2 usage or domain error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, err) {
        Ok(report) => {
            if let Err(e) = report.render(cli.format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if report.failed {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli, warn: &mut dyn Write) -> Result<crate::report::Report, AppError> {
    match &cli.command {
        Command::Count(a) => commands::count(a.n, a.segment_bits, a.cache.as_deref(), a.parallel, warn),
        Command::Multiplicity(a) => commands::multiplicity(a.n, a.k, a.method),
        Command::Census(a) => commands::census(&a.n_list, a.cache.as_deref(), a.parallel, warn),
        Command::Verify(a) => commands::verify(a),
        Command::Bounds(a) => commands::bounds(a.k, a.robin_c),
        Command::Series(a) => commands::series(a.s, a.n, a.terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_argument() {
        assert_eq!(parse_complex("2,3").unwrap(), Complex64::new(2.0, 3.0));
        assert_eq!(parse_complex("-1").unwrap(), Complex64::new(-1.0, 0.0));
        assert!(parse_complex("a").is_err());
        assert!(parse_complex("inf").is_err());
    }

    #[test]
    fn segment_bits_floor() {
        assert!(parse_segment_bits("65535").is_err());
        assert_eq!(parse_segment_bits("65536").unwrap(), 65536);
    }
}
