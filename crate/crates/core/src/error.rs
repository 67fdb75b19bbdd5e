use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be a positive integer, got 0")]
    ZeroArgument { name: &'static str },

    #[error("{op}: requires {requirement}, got {got}")]
    Domain {
        op: &'static str,
        requirement: &'static str,
        got: u64,
    },

    #[error("{op}: requires {requirement}, got {got}")]
    RealDomain {
        op: &'static str,
        requirement: &'static str,
        got: f64,
    },

    #[error("{what} overflows 64-bit arithmetic at argument {argument}")]
    Overflow { what: &'static str, argument: u64 },

    #[error("dense count for n = {n} exceeds the bitmap budget (n <= {limit}); use the segmented counter")]
    DenseBudget { n: u64, limit: u64 },

    #[error("could not allocate {cells} cells")]
    Allocation { cells: usize },
}

impl Error {
    pub(crate) fn domain(op: &'static str, requirement: &'static str, got: u64) -> Self {
        Error::Domain {
            op,
            requirement,
            got,
        }
    }
}
