//! Closed-form probability and density calculators for Wieferich-style
//! heuristics, a seeded Monte-Carlo check of the random-linear-map model,
//! and the Wieferich prime scan itself.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedMul, CheckedSub, One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HeuristicError, ScanError};
use crate::primes::{is_prime, mul_mod, pow_mod, primes_in, PrimeRange, SieveConfig};
use crate::scan::map_primes;

/// An exact rational together with its floating-point value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicValue {
    pub numer: i128,
    pub denom: i128,
}

impl HeuristicValue {
    pub fn new(r: Ratio<i128>) -> Self {
        Self {
            numer: *r.numer(),
            denom: *r.denom(),
        }
    }

    pub fn exact(&self) -> Ratio<i128> {
        Ratio::new(self.numer, self.denom)
    }

    pub fn approx(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

impl std::fmt::Display for HeuristicValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{} ≈ {:.6}", self.numer, self.denom, self.approx())
    }
}

fn checked_pow(base: i128, e: u32) -> Result<i128, HeuristicError> {
    base.checked_pow(e).ok_or(HeuristicError::Overflow)
}

fn require_prime(p: u64) -> Result<(), HeuristicError> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(HeuristicError::NotPrime(p))
    }
}

/// Probability that a uniformly random linear map `F_p^n → F_p^m` is
/// injective: `∏_{i<n} (1 − p^(i−m))`.
pub fn injective_probability(p: u64, n: u32, m: u32) -> Result<HeuristicValue, HeuristicError> {
    require_prime(p)?;
    if n < 1 || n > m {
        return Err(HeuristicError::Dimensions { n, m });
    }
    let mut acc = Ratio::<i128>::one();
    for i in 0..n {
        let q = checked_pow(p as i128, m - i)?;
        let factor = Ratio::new(q - 1, q);
        acc = acc.checked_mul(&factor).ok_or(HeuristicError::Overflow)?;
    }
    Ok(HeuristicValue::new(acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub trials: u64,
    pub successes: u64,
    pub frequency: f64,
    pub std_error: f64,
    pub seed: u64,
}

impl MonteCarloResult {
    fn from_counts(trials: u64, successes: u64, seed: u64) -> Self {
        let f = successes as f64 / trials as f64;
        Self {
            trials,
            successes,
            frequency: f,
            std_error: (f * (1.0 - f) / trials as f64).sqrt(),
            seed,
        }
    }
}

/// Trials per independently seeded block. Block `b` draws from the ChaCha8
/// stream `b` of the master seed, so the outcome does not depend on how the
/// blocks are spread over workers.
pub const MONTE_CARLO_BLOCK: u64 = 1 << 14;

/// Rank of a row-major `rows × cols` matrix over `F_p`; `a` is overwritten.
pub fn rank_mod_p(a: &mut [u64], rows: usize, cols: usize, p: u64) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(rank * cols + j, pivot * cols + j);
        }
        let inv = pow_mod(a[rank * cols + col], p - 2, p);
        for r in rank + 1..rows {
            let factor = mul_mod(a[r * cols + col], inv, p);
            if factor == 0 {
                continue;
            }
            for j in col..cols {
                let t = mul_mod(factor, a[rank * cols + j], p);
                a[r * cols + j] = (a[r * cols + j] + p - t) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn monte_carlo_block(p: u64, n: u32, m: u32, seed: u64, block: u64, trials: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    let (rows, cols) = (m as usize, n as usize);
    let mut hits = 0;
    let mut buf = vec![0u64; rows * cols];
    for _ in 0..trials {
        for x in buf.iter_mut() {
            *x = rng.gen_range(0..p);
        }
        if rank_mod_p(&mut buf, rows, cols, p) == cols {
            hits += 1;
        }
    }
    hits
}

/// Empirical frequency of injective maps among `trials` uniform random
/// `m × n` matrices over `F_p`.
pub fn monte_carlo_injective(
    p: u64,
    n: u32,
    m: u32,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloResult, HeuristicError> {
    monte_carlo_injective_with_workers(p, n, m, trials, seed, crate::scan::default_workers())
}

pub fn monte_carlo_injective_with_workers(
    p: u64,
    n: u32,
    m: u32,
    trials: u64,
    seed: u64,
    workers: usize,
) -> Result<MonteCarloResult, HeuristicError> {
    require_prime(p)?;
    if n < 1 || n > m {
        return Err(HeuristicError::Dimensions { n, m });
    }
    if trials == 0 {
        return Err(HeuristicError::OutOfRange("trials must be at least 1".into()));
    }
    let blocks: Vec<(u64, u64)> = (0..trials.div_ceil(MONTE_CARLO_BLOCK))
        .map(|b| {
            let start = b * MONTE_CARLO_BLOCK;
            (b, MONTE_CARLO_BLOCK.min(trials - start))
        })
        .collect();
    let run = |&(b, t): &(u64, u64)| monte_carlo_block(p, n, m, seed, b, t);
    let successes: u64 = if workers <= 1 {
        blocks.iter().map(run).sum()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| HeuristicError::OutOfRange(e.to_string()))?;
        pool.install(|| blocks.par_iter().map(run).sum())
    };
    Ok(MonteCarloResult::from_counts(trials, successes, seed))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MertensSum {
    pub sum: f64,
    pub loglog: f64,
}

/// `Σ_{p ≤ X} 1/p`, accumulated in ascending prime order, next to
/// `log log X`.
pub fn mertens_count(x: u64) -> Result<MertensSum, HeuristicError> {
    let sum = prime_power_sum(x, 1)?;
    Ok(MertensSum {
        sum,
        loglog: (x as f64).ln().ln(),
    })
}

fn prime_power_sum(x: u64, d: u32) -> Result<f64, HeuristicError> {
    let range = PrimeRange::new(2, x).map_err(|e| HeuristicError::OutOfRange(e.to_string()))?;
    let primes = primes_in(range).map_err(|e| HeuristicError::OutOfRange(e.to_string()))?;
    Ok(primes.map(|p| (p as f64).powi(-(d as i32))).sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExceptionModel {
    /// Each prime is exceptional with probability `1/p`.
    OneOverP,
    /// Probability `1/p^d` with `d ≥ 2`; the expected count converges.
    OneOverPPower(u32),
}

/// Expected number of exceptional primes up to `X` under the given model.
pub fn expected_exceptional_count(x: u64, model: ExceptionModel) -> Result<f64, HeuristicError> {
    match model {
        ExceptionModel::OneOverP => prime_power_sum(x, 1),
        ExceptionModel::OneOverPPower(d) if d >= 2 => prime_power_sum(x, d),
        ExceptionModel::OneOverPPower(d) => {
            Err(HeuristicError::OutOfRange(format!("exponent {d} must be at least 2")))
        }
    }
}

/// Whether `base^(p−1) ≡ 1 (mod p²)` for a prime `p` not dividing `base`.
pub fn is_wieferich(base: u64, p: u64) -> bool {
    if base % p == 0 {
        return false;
    }
    let m = p * p;
    pow_mod(base % m, p - 1, m) == 1
}

/// Primes `p` in `range` with `p ∤ base` and `base^(p−1) ≡ 1 (mod p²)`.
pub fn wieferich_scan(base: u64, range: PrimeRange) -> Result<Vec<u64>, ScanError> {
    wieferich_scan_with(base, range, 1, SieveConfig::default())
}

pub fn wieferich_scan_with(
    base: u64,
    range: PrimeRange,
    workers: usize,
    sieve: SieveConfig,
) -> Result<Vec<u64>, ScanError> {
    map_primes(range, workers, sieve, |p| Ok(is_wieferich(base, p).then_some(p)))
}

/// Densities of the four level-raising cases at `p`:
/// `2(p−3)/(p−1)²`, `1/(p−1)²`, `2/(p²+p)`, `2/((p²−1)(p²−p))`.
pub fn level_raising_densities(p: u64) -> Result<[HeuristicValue; 4], HeuristicError> {
    if p < 3 {
        return Err(HeuristicError::OutOfRange(format!("p = {p} must be at least 3")));
    }
    require_prime(p)?;
    let q = p as i128;
    let pm1_sq = (q - 1).checked_mul(q - 1).ok_or(HeuristicError::Overflow)?;
    let p_sq = q.checked_mul(q).ok_or(HeuristicError::Overflow)?;
    let iv_den = (p_sq - 1)
        .checked_mul(p_sq - q)
        .ok_or(HeuristicError::Overflow)?;
    Ok([
        HeuristicValue::new(Ratio::new(2 * (q - 3), pm1_sq)),
        HeuristicValue::new(Ratio::new(1, pm1_sq)),
        HeuristicValue::new(Ratio::new(2, p_sq + q)),
        HeuristicValue::new(Ratio::new(2, iv_den)),
    ])
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            let mut r = q;
            while r % d == 0 {
                r /= d;
            }
            return r == 1;
        }
        d += 1;
    }
    true
}

/// Density `k^(1−i)·(1 − 1/k)` of multiplicity exactly `i`, for a residue
/// field of size `k`.
pub fn multiplicity_distribution(k0_size: u64, i: u32) -> Result<HeuristicValue, HeuristicError> {
    if !is_prime_power(k0_size) {
        return Err(HeuristicError::NotPrimePower(k0_size));
    }
    if i < 1 {
        return Err(HeuristicError::OutOfRange("multiplicity starts at 1".into()));
    }
    let k = k0_size as i128;
    let den = checked_pow(k, i)?;
    Ok(HeuristicValue::new(Ratio::new(k - 1, den)))
}

/// `Σ_{i=1}^{imax}` of [`multiplicity_distribution`], exactly; equals
/// `1 − k^(−imax)`.
pub fn multiplicity_partial_sum(k0_size: u64, imax: u32) -> Result<HeuristicValue, HeuristicError> {
    let mut acc = Ratio::<i128>::zero();
    for i in 1..=imax {
        let term = multiplicity_distribution(k0_size, i)?.exact();
        // common denominators grow as k^i; guard the addition
        let (a, b) = (acc.numer(), acc.denom());
        let l = b.lcm(term.denom());
        let lhs = a.checked_mul(&(l / b)).ok_or(HeuristicError::Overflow)?;
        let rhs = term
            .numer()
            .checked_mul(&(l / term.denom()))
            .ok_or(HeuristicError::Overflow)?;
        acc = Ratio::new(lhs.checked_add(rhs).ok_or(HeuristicError::Overflow)?, l);
    }
    Ok(HeuristicValue::new(acc))
}

/// `1 − value`, exactly.
pub fn complement(v: &HeuristicValue) -> Result<HeuristicValue, HeuristicError> {
    let r = Ratio::<i128>::one()
        .checked_sub(&v.exact())
        .ok_or(HeuristicError::Overflow)?;
    Ok(HeuristicValue::new(r))
}

/// Rounds a heuristic value for display.
pub fn approx_digits(v: &HeuristicValue, digits: usize) -> String {
    let x = v.exact();
    let f = x.to_f64().unwrap_or(f64::NAN);
    format!("{f:.digits$}")
}
