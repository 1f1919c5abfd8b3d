//! Prime generation for scan ranges up to 10⁹ and deterministic 64-bit
//! primality testing.

use serde::{Deserialize, Serialize};

use crate::error::SieveError;

/// Largest upper bound accepted by [`PrimeRange`].
pub const MAX_HI: u64 = 1_000_000_000;

/// Default segment length, counted in odd numbers.
pub const DEFAULT_SEGMENT_ODDS: usize = 1 << 20;

/// Default memory budget for one sieve instance.
pub const DEFAULT_MEMORY_BUDGET: usize = 64 << 20;

/// Inclusive bounds `[lo, hi]` of a prime scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeRange {
    lo: u64,
    hi: u64,
}

impl PrimeRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self, SieveError> {
        if lo < 2 || hi > MAX_HI || lo > hi {
            return Err(SieveError::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    /// Splits into at most `parts` contiguous, disjoint sub-ranges covering
    /// the same integers, in ascending order.
    pub fn split(&self, parts: usize) -> Vec<PrimeRange> {
        let len = self.hi - self.lo + 1;
        let parts = (parts.max(1) as u64).min(len);
        let step = len.div_ceil(parts);
        let mut out = Vec::with_capacity(parts as usize);
        let mut lo = self.lo;
        while lo <= self.hi {
            let hi = (lo + step - 1).min(self.hi);
            out.push(PrimeRange { lo, hi });
            lo = hi + 1;
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Odd numbers covered by one segment.
    pub segment_odds: usize,
    /// Upper bound on bytes held by one sieve (segment plus base primes).
    pub memory_budget: usize,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            segment_odds: DEFAULT_SEGMENT_ODDS,
            memory_budget: DEFAULT_MEMORY_BUDGET,
        }
    }
}

impl SieveConfig {
    pub fn with_segment_odds(segment_odds: usize) -> Self {
        Self {
            segment_odds,
            ..Self::default()
        }
    }
}

/// Primes in `range`, ascending, using the default sieve configuration.
pub fn primes_in(range: PrimeRange) -> Result<Primes, SieveError> {
    primes_in_with(range, SieveConfig::default())
}

pub fn primes_in_with(range: PrimeRange, config: SieveConfig) -> Result<Primes, SieveError> {
    Primes::new(range, config)
}

/// All primes strictly below `n` (plain sieve of Eratosthenes).
pub fn primes_below(n: u64) -> Vec<u64> {
    if n <= 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Segmented sieve over the odd numbers of a [`PrimeRange`].
#[derive(Debug)]
pub struct Primes {
    hi: u64,
    base: Vec<u64>,
    segment: Vec<bool>,
    // first odd number covered by `segment`
    seg_start: u64,
    seg_len: usize,
    pos: usize,
    pending_two: bool,
    done: bool,
}

impl Primes {
    fn new(range: PrimeRange, config: SieveConfig) -> Result<Self, SieveError> {
        if config.segment_odds == 0 {
            return Err(SieveError::MemoryBudget {
                needed: 0,
                budget: config.memory_budget,
            });
        }
        let root = isqrt(range.hi);
        let base: Vec<u64> = primes_below(root + 1).into_iter().skip(1).collect();
        let needed = config.segment_odds + base.len() * std::mem::size_of::<u64>();
        if needed > config.memory_budget {
            return Err(SieveError::MemoryBudget {
                needed,
                budget: config.memory_budget,
            });
        }
        let first_odd = (range.lo.max(3)) | 1;
        let mut primes = Self {
            hi: range.hi,
            base,
            segment: vec![false; config.segment_odds],
            seg_start: first_odd,
            seg_len: 0,
            pos: 0,
            pending_two: range.lo <= 2,
            done: first_odd > range.hi,
        };
        if !primes.done {
            primes.fill();
        }
        Ok(primes)
    }

    fn fill(&mut self) {
        let remaining = (self.hi - self.seg_start) / 2 + 1;
        self.seg_len = (self.segment.len() as u64).min(remaining) as usize;
        let seg = &mut self.segment[..self.seg_len];
        seg.fill(true);
        let start = self.seg_start;
        let end = start + 2 * (self.seg_len as u64 - 1);
        for &q in &self.base {
            let sq = q * q;
            if sq > end {
                break;
            }
            let mut first = sq.max(start.div_ceil(q) * q);
            if first % 2 == 0 {
                first += q;
            }
            let mut idx = ((first - start) / 2) as usize;
            let step = q as usize;
            while idx < self.seg_len {
                seg[idx] = false;
                idx += step;
            }
        }
        self.pos = 0;
    }
}

impl Iterator for Primes {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.pending_two {
            self.pending_two = false;
            return Some(2);
        }
        while !self.done {
            while self.pos < self.seg_len {
                let i = self.pos;
                self.pos += 1;
                if self.segment[i] {
                    return Some(self.seg_start + 2 * i as u64);
                }
            }
            let next_start = self.seg_start + 2 * self.seg_len as u64;
            if next_start > self.hi {
                self.done = true;
            } else {
                self.seg_start = next_start;
                self.fill();
            }
        }
        None
    }
}

pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut b = base % m;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin; the first twelve primes as witnesses are
/// sufficient for every `n < 3.3·10²⁴`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_ranges() {
        let r = PrimeRange::new(2, 20).unwrap();
        assert_eq!(
            primes_in(r).unwrap().collect::<Vec<_>>(),
            vec![2, 3, 5, 7, 11, 13, 17, 19]
        );
        let r = PrimeRange::new(9, 10).unwrap();
        assert_eq!(primes_in(r).unwrap().count(), 0);
        let r = PrimeRange::new(2, 2).unwrap();
        assert_eq!(primes_in(r).unwrap().collect::<Vec<_>>(), vec![2]);
        let r = PrimeRange::new(3, 3).unwrap();
        assert_eq!(primes_in(r).unwrap().collect::<Vec<_>>(), vec![3]);
    }

    #[test]
    fn invalid_ranges() {
        assert!(PrimeRange::new(1, 10).is_err());
        assert!(PrimeRange::new(10, 9).is_err());
        assert!(PrimeRange::new(2, MAX_HI + 1).is_err());
    }

    #[test]
    fn agrees_with_trial_division_to_1e5() {
        let r = PrimeRange::new(2, 100_000).unwrap();
        let sieved: Vec<u64> = primes_in_with(r, SieveConfig::with_segment_odds(997))
            .unwrap()
            .collect();
        let trial: Vec<u64> = (2..=100_000).filter(|&n| trial_division(n)).collect();
        assert_eq!(sieved, trial);
    }

    #[test]
    fn pi_of_a_million_at_two_segment_sizes() {
        let r = PrimeRange::new(2, 1_000_000).unwrap();
        let a = primes_in(r).unwrap().count();
        let b = primes_in_with(r, SieveConfig::with_segment_odds(4096))
            .unwrap()
            .count();
        assert_eq!(a, 78_498);
        assert_eq!(a, b);
        // independent count at 10⁴
        let small = (2..=10_000u64).filter(|&n| trial_division(n)).count();
        assert_eq!(
            primes_in(PrimeRange::new(2, 10_000).unwrap()).unwrap().count(),
            small
        );
    }

    #[test]
    fn memory_budget_enforced() {
        let r = PrimeRange::new(2, 1000).unwrap();
        let cfg = SieveConfig {
            segment_odds: 1 << 20,
            memory_budget: 1 << 10,
        };
        assert!(matches!(
            primes_in_with(r, cfg),
            Err(SieveError::MemoryBudget { .. })
        ));
    }

    #[test]
    fn split_covers_range() {
        let r = PrimeRange::new(3, 10_000).unwrap();
        for parts in [1, 2, 7, 64] {
            let pieces = r.split(parts);
            assert_eq!(pieces.first().unwrap().lo(), 3);
            assert_eq!(pieces.last().unwrap().hi(), 10_000);
            for w in pieces.windows(2) {
                assert_eq!(w[0].hi() + 1, w[1].lo());
            }
            let joined: Vec<u64> = pieces
                .iter()
                .flat_map(|p| primes_in(*p).unwrap())
                .collect();
            assert_eq!(joined, primes_in(r).unwrap().collect::<Vec<_>>());
        }
        assert_eq!(PrimeRange::new(5, 6).unwrap().split(10).len(), 2);
    }

    #[test]
    fn primality() {
        assert!(is_prime(1093));
        assert!(is_prime(3511));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(is_prime(2));
        assert!(!is_prime(3215031751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(18_446_744_073_709_551_615));
        for n in 0..5000 {
            assert_eq!(is_prime(n), trial_division(n), "{n}");
        }
        assert!(trial_division(1093) && trial_division(3511));
    }
}
