//! Command-line front end, census cache and parallel sweeps for
//! [`mtable_core`].

pub mod cache;
pub mod cli;
mod commands;
mod error;
pub mod parallel;
pub mod report;

pub use cli::run;
pub use commands::{CENSUS_POINTS, SERIES_RELATIVE_TOLERANCE};
pub use error::AppError;
