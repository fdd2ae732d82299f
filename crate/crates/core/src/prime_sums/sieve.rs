use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// Largest supported sieve bound.
pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// All primes up to `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Primes `p <= bound`; `bound` must not exceed the table limit.
    pub fn upto(&self, bound: u64) -> &[u64] {
        assert!(bound <= self.limit, "bound {bound} beyond sieve limit {}", self.limit);
        let end = self.primes.partition_point(|&p| p <= bound);
        &self.primes[..end]
    }
}

/// Sieve of Eratosthenes over odd numbers, one bit each.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::SieveLimit(limit));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::OutOfRange(format!(
            "sieve limit {limit} exceeds {MAX_SIEVE_LIMIT}"
        )));
    }
    // bit i stands for 2i + 1
    let n_odd = (limit as usize).div_ceil(2);
    let mut composite = vec![0u64; n_odd.div_ceil(64)];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= limit as usize {
        if composite[i / 64] >> (i % 64) & 1 == 0 {
            let step = 2 * i + 1;
            let mut j = (step * step) / 2;
            while j < n_odd {
                composite[j / 64] |= 1 << (j % 64);
                j += step;
            }
        }
        i += 1;
    }
    let mut primes = vec![2u64];
    for k in 1..n_odd {
        if composite[k / 64] >> (k % 64) & 1 == 0 {
            primes.push(2 * k as u64 + 1);
        }
    }
    Ok(PrimeTable { limit, primes })
}

static CACHE: Mutex<Option<Arc<PrimeTable>>> = Mutex::new(None);

/// Shared table covering at least `limit`, possibly more; slice with
/// [`PrimeTable::upto`]. Grown on demand.
pub fn primes_upto(limit: u64) -> Result<Arc<PrimeTable>> {
    let limit = limit.max(2);
    let mut guard = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit >= limit {
            return Ok(Arc::clone(t));
        }
    }
    let grown = limit.max(1 << 16).max(guard.as_ref().map_or(0, |t| t.limit.saturating_mul(2)));
    let table = Arc::new(sieve(grown.min(MAX_SIEVE_LIMIT).max(limit))?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}
