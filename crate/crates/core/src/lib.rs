//! Exact p-adic unit tests for real quadratic and complex cubic fields,
//! Wieferich-style prime scans, and the heuristic models that predict how
//! often such primes occur.
//!
//! The arithmetic works in `Z[θ]/(f(θ), p^k)` for `k ∈ {1, 2}` with fixed
//! width integers; scans are driven by a segmented sieve and split across
//! a rayon pool with an order-preserving merge.

pub mod cli;
pub mod cubic;
pub mod data;
pub mod error;
pub mod heuristics;
pub mod primes;
pub mod quadratic;
pub mod report;
pub mod ring;
pub mod scan;
pub mod verify;

pub use cubic::{scan_cubic, CubicFieldRecord, CubicMode};
pub use error::{DataError, FieldError, HeuristicError, Rejection, RingError, ScanError, SieveError};
pub use primes::{PrimeRange, SieveConfig};
pub use quadratic::{scan_quadratic, QuadFieldRecord};
pub use report::{ScanReport, ScanVerdict};
pub use ring::{Modulus, OrderElem, OrderSpec, QuotientRing};
pub use scan::ScanOptions;
