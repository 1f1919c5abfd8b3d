//! Partitioned prime scans with an ordered merge.
//!
//! A range is cut into contiguous sub-ranges, each sieved independently and
//! mapped prime by prime. Sub-range results are concatenated in range order,
//! so the output never depends on the number of workers.

use rayon::prelude::*;

use crate::error::{Rejection, ScanError};
use crate::primes::{primes_in_with, PrimeRange, SieveConfig};
use crate::report::ScanVerdict;

#[derive(Clone, Copy, Debug)]
pub struct ScanOptions {
    pub workers: usize,
    /// Report clear and excluded primes as well as hits.
    pub full_verdicts: bool,
    pub sieve: SieveConfig,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            workers: default_workers(),
            full_verdicts: false,
            sieve: SieveConfig::default(),
        }
    }
}

impl ScanOptions {
    pub fn serial() -> Self {
        Self {
            workers: 1,
            ..Self::default()
        }
    }

    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: workers.max(1),
            ..Self::default()
        }
    }

    pub fn full(mut self) -> Self {
        self.full_verdicts = true;
        self
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

// sub-ranges per worker, to even out the cost of large primes at the top
const CHUNKS_PER_WORKER: usize = 8;

/// Maps every prime of `range` through `f` and collects the produced values
/// in ascending prime order.
pub fn map_primes<T, F>(
    range: PrimeRange,
    workers: usize,
    sieve: SieveConfig,
    f: F,
) -> Result<Vec<T>, ScanError>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>, ScanError> + Sync,
{
    let scan_chunk = |chunk: PrimeRange| -> Result<Vec<T>, ScanError> {
        let mut out = Vec::new();
        for p in primes_in_with(chunk, sieve)? {
            if let Some(v) = f(p)? {
                out.push(v);
            }
        }
        Ok(out)
    };

    let workers = workers.max(1);
    if workers == 1 {
        return scan_chunk(range);
    }
    let chunks = range.split(workers * CHUNKS_PER_WORKER);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| ScanError::Pool(e.to_string()))?;
    let parts: Vec<Result<Vec<T>, ScanError>> =
        pool.install(|| chunks.into_par_iter().map(scan_chunk).collect());
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Runs a verdict function over a range; exclusions are dropped unless the
/// options ask for full verdicts.
pub(crate) fn run_verdicts<F>(
    range: PrimeRange,
    opts: &ScanOptions,
    f: F,
) -> Result<Vec<ScanVerdict>, ScanError>
where
    F: Fn(u64) -> Result<Option<ScanVerdict>, ScanError> + Sync,
{
    let full = opts.full_verdicts;
    map_primes(range, opts.workers, opts.sieve, |p| {
        Ok(f(p)?.filter(|v| full || !v.is_excluded()))
    })
}

/// Turns the outcome of a single-prime test into a verdict; exclusions
/// become excluded verdicts, arithmetic failures abort the scan.
pub(crate) fn verdict_from(
    p: u64,
    outcome: Result<Option<Vec<u64>>, Rejection>,
) -> Result<ScanVerdict, ScanError> {
    match outcome {
        Ok(Some(aux)) => Ok(ScanVerdict::hit(p, aux)),
        Ok(None) => Ok(ScanVerdict::clear(p)),
        Err(Rejection::Excluded { reason, .. }) => Ok(ScanVerdict::excluded(p, reason)),
        Err(Rejection::Ring(e)) => Err(ScanError::Ring(e)),
        Err(Rejection::FermatStep { p, value }) => Err(ScanError::FermatStep { p, value }),
    }
}
