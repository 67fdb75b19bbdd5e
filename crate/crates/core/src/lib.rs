//! Exact arithmetic for the `n × n` multiplication table.
//!
//! The crate is `no_std` (it needs `alloc` for divisor lists, sieves and
//! bitmaps) and covers:
//!
//! * [`divisor`]: `d(k)`, `σ(k)`, divisor lists, the incomplete divisor
//!   function `d(k; x)` and batch sieves.
//! * [`multiplicity`]: how many times `k` appears in the `n × n` table, by
//!   direct enumeration and by the incomplete-divisor formula.
//! * [`distinct`]: the number of distinct products `M(n)`, with a dense
//!   bitmap and a memory-bounded segmented counter.
//! * [`bounds`]: explicit upper bounds for `d(n)` and `σ(n)` and the sweeps
//!   that check them.
//! * [`series`]: Dirichlet-series identities over the finite table.
//!
//! IO, timing, caching and parallel orchestration live in the `mtable`
//! companion crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod distinct;
pub mod divisor;
mod error;
pub mod multiplicity;
pub mod series;

pub use error::{Error, Result};
