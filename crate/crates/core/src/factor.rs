//! Factorization and Liouville λ evaluation.
//!
//! Single integers are factored through a [`SpfTable`] when one covers them
//! and by 6k±1 trial division otherwise. Contiguous ranges go through a
//! segmented sieve: each block starts with every running product at 1, every
//! prime power `p^j ≤ hi` multiplies its multiples by `p` and flips their
//! parity, and whatever cofactor is left over (`n / product > 1`) is a single
//! prime above `√hi`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest segment (in entries) that [`liouville_segment`] materializes by default.
pub const DEFAULT_SEGMENT_CAP: usize = 1 << 24;

/// Sieve work unit. Sized so the running-product scratch stays cache resident.
pub(crate) const BLOCK_LEN: usize = 1 << 16;

/// Largest `limit` a [`SpfTable`] accepts: every composite below 2³² has its
/// smallest prime factor below 2¹⁶, so factors fit in `u16`.
pub const MAX_SPF_LIMIT: u64 = u32::MAX as u64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorization from `(prime, exponent)` pairs, checking that the
    /// primes ascend strictly, exponents are positive and the product is `n`.
    /// Primality of the listed primes is the caller's responsibility.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut n: u64 = 1;
        let mut last = 1u64;
        for &(p, e) in &factors {
            if p <= last {
                return Err(Error::invalid(format!("primes must ascend strictly, got {p} after {last}")));
            }
            if e == 0 {
                return Err(Error::invalid(format!("exponent of {p} is zero")));
            }
            n = checked_pow(p, e)
                .and_then(|pe| n.checked_mul(pe))
                .ok_or_else(|| Error::Range("factorization product exceeds u64".into()))?;
            last = p;
        }
        Ok(Factorization { n, factors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Ω(n): prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    pub fn liouville(&self) -> i8 {
        if self.big_omega().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }
}

pub(crate) fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Smallest-prime-factor table for `2 ≤ n ≤ limit`.
///
/// Entries are stored as `u16` with 0 standing for "n is prime", so the
/// table costs two bytes per integer: 200 MB at `limit = 10^8`.
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    spf: Vec<u16>,
}

impl SpfTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, or `None` when `n` is outside `2..=limit`.
    pub fn spf(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit {
            return None;
        }
        match self.spf[n as usize] {
            0 => Some(n),
            p => Some(p as u64),
        }
    }

    pub fn is_prime(&self, n: u64) -> Option<bool> {
        self.spf(n).map(|p| p == n)
    }
}

pub fn build_spf_table(limit: u64) -> Result<SpfTable> {
    if limit < 2 {
        return Err(Error::invalid(format!("spf table limit must be at least 2, got {limit}")));
    }
    if limit > MAX_SPF_LIMIT {
        return Err(Error::invalid(format!("spf table limit {limit} exceeds the supported maximum {MAX_SPF_LIMIT}")));
    }
    let len = usize::try_from(limit + 1).map_err(|_| resource("spf table", (limit + 1) as u128 * 2))?;
    let mut spf: Vec<u16> = Vec::new();
    spf.try_reserve_exact(len).map_err(|_| resource("spf table", len as u128 * 2))?;
    spf.resize(len, 0);

    let root = limit.isqrt();
    for p in 2..=root {
        if spf[p as usize] != 0 {
            continue;
        }
        let mut j = p * p;
        while j <= limit {
            if spf[j as usize] == 0 {
                spf[j as usize] = p as u16;
            }
            j += p;
        }
    }
    Ok(SpfTable { limit, spf })
}

pub(crate) fn resource(what: &str, required_bytes: u128) -> Error {
    Error::Resource { what: what.to_string(), required_bytes }
}

/// Prime factorization of `n`. Uses `table` when it covers `n`, trial
/// division by 2, 3 and 6k±1 otherwise.
pub fn factorize(n: u64, table: Option<&SpfTable>) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::invalid("cannot factorize 0"));
    }
    match table {
        Some(t) if n <= t.limit() => Ok(factorize_with_table(n, t)),
        _ => Ok(factorize_trial(n)),
    }
}

fn factorize_with_table(mut n: u64, table: &SpfTable) -> Factorization {
    let original = n;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = table.spf(n).expect("n within table");
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        factors.push((p, e));
    }
    Factorization { n: original, factors }
}

fn factorize_trial(n: u64) -> Factorization {
    let original = n;
    let mut rest = n;
    let mut factors = Vec::new();
    let mut take = |rest: &mut u64, p: u64| {
        if rest.is_multiple_of(p) {
            let mut e = 0;
            while rest.is_multiple_of(p) {
                *rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    };
    take(&mut rest, 2);
    take(&mut rest, 3);
    let mut d = 5u64;
    while d.saturating_mul(d) <= rest {
        take(&mut rest, d);
        take(&mut rest, d + 2);
        d += 6;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Factorization { n: original, factors }
}

/// λ(n) = (−1)^Ω(n), with λ(1) = 1.
pub fn liouville(n: u64) -> Result<i8> {
    Ok(factorize(n, None)?.liouville())
}

/// Dense λ values over `[start, start + len)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaTable {
    start: u64,
    values: Vec<i8>,
}

impl LambdaTable {
    pub fn new(start: u64, values: Vec<i8>) -> Result<Self> {
        if start == 0 {
            return Err(Error::invalid("lambda table must start at a positive integer"));
        }
        if let Some(i) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::invalid(format!(
                "lambda table entry for {} is {}, expected ±1",
                start + i as u64,
                values[i]
            )));
        }
        Ok(LambdaTable { start, values })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    /// Last integer covered (inclusive). Equals `start - 1` for an empty table.
    pub fn end(&self) -> u64 {
        self.start + self.values.len() as u64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i8] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i8> {
        self.values
    }

    /// λ(n) if `n` lies inside the table.
    pub fn get(&self, n: u64) -> Option<i8> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i as usize).copied())
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().map(|&v| v as i64).sum()
    }
}

/// Primes `≤ limit` by a plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Base primes for sieving windows that end at or below `hi`.
#[derive(Debug, Clone)]
pub(crate) struct SievePrimes {
    primes: Vec<u64>,
}

impl SievePrimes {
    pub(crate) fn for_bound(hi: u64) -> Self {
        SievePrimes { primes: primes_up_to(hi.isqrt()) }
    }
}

/// Fills `out` with λ(lo), …, λ(lo + out.len() − 1).
///
/// `primes` must contain every prime up to `√(lo + out.len() − 1)`.
/// `scratch` is reused across calls to avoid reallocating the product buffer.
pub(crate) fn sieve_block(lo: u64, out: &mut [i8], primes: &SievePrimes, scratch: &mut Vec<u64>) {
    let len = out.len();
    if len == 0 {
        return;
    }
    let hi = lo + len as u64 - 1;
    scratch.clear();
    scratch.resize(len, 1);
    out.fill(0);

    for &p in &primes.primes {
        if p * p > hi {
            break;
        }
        let mut pk = p;
        loop {
            let first = lo.div_ceil(pk) * pk;
            let mut j = first;
            while j <= hi {
                let i = (j - lo) as usize;
                scratch[i] *= p;
                out[i] ^= 1;
                j += pk;
            }
            match pk.checked_mul(p) {
                Some(next) if next <= hi => pk = next,
                _ => break,
            }
        }
    }

    for (i, (v, &prod)) in out.iter_mut().zip(scratch.iter()).enumerate() {
        let n = lo + i as u64;
        // a cofactor above √hi is exactly one prime
        let parity = *v ^ u8::from(prod < n) as i8;
        *v = if parity == 0 { 1 } else { -1 };
    }
}

/// λ over the inclusive window `[a, b]`, materialized.
///
/// Equivalent to [`liouville_segment_capped`] with [`DEFAULT_SEGMENT_CAP`].
pub fn liouville_segment(a: u64, b: u64) -> Result<LambdaTable> {
    liouville_segment_capped(a, b, DEFAULT_SEGMENT_CAP)
}

/// λ over `[a, b]` with an explicit cap on the number of entries. The window
/// is sieved in parallel blocks; the result does not depend on scheduling.
pub fn liouville_segment_capped(a: u64, b: u64, cap: usize) -> Result<LambdaTable> {
    check_window(a, b)?;
    let len = b - a + 1;
    if len > cap as u64 {
        return Err(Error::invalid(format!("window [{a}, {b}] has {len} entries, above the segment cap {cap}")));
    }
    let len = len as usize;
    let mut values: Vec<i8> = Vec::new();
    values.try_reserve_exact(len).map_err(|_| resource("lambda table", len as u128))?;
    values.resize(len, 0);

    let primes = SievePrimes::for_bound(b);
    values.par_chunks_mut(BLOCK_LEN).enumerate().for_each_init(Vec::new, |scratch, (i, chunk)| {
        sieve_block(a + (i * BLOCK_LEN) as u64, chunk, &primes, scratch);
    });
    Ok(LambdaTable { start: a, values })
}

fn check_window(a: u64, b: u64) -> Result<()> {
    if a == 0 {
        return Err(Error::invalid("window must start at a positive integer"));
    }
    if a > b {
        return Err(Error::invalid(format!("empty window: start {a} exceeds end {b}")));
    }
    Ok(())
}

/// Σ λ(n) over `[a, b]` without materializing the window. Blocks are summed
/// in parallel; integer addition makes the result scheduling independent.
pub fn lambda_sum(a: u64, b: u64) -> Result<i64> {
    check_window(a, b)?;
    let primes = SievePrimes::for_bound(b);
    Ok(lambda_sum_with(a, b, &primes))
}

pub(crate) fn lambda_sum_with(a: u64, b: u64, primes: &SievePrimes) -> i64 {
    let len = b - a + 1;
    let blocks = len.div_ceil(BLOCK_LEN as u64);
    (0..blocks)
        .into_par_iter()
        .map_init(
            || (Vec::new(), vec![0i8; BLOCK_LEN]),
            |(scratch, buf), i| {
                let lo = a + i * BLOCK_LEN as u64;
                let n = (b - lo + 1).min(BLOCK_LEN as u64) as usize;
                let out = &mut buf[..n];
                sieve_block(lo, out, primes, scratch);
                out.iter().map(|&v| v as i64).sum::<i64>()
            },
        )
        .sum()
}

/// Maps every sieve block of `[a, b]` through `f` in parallel and returns
/// the results in block order. Block boundaries depend only on `a`.
pub(crate) fn map_lambda_blocks<T, F>(a: u64, b: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &[i8]) -> T + Sync,
{
    check_window(a, b)?;
    let primes = SievePrimes::for_bound(b);
    let blocks = (b - a + 1).div_ceil(BLOCK_LEN as u64);
    Ok((0..blocks)
        .into_par_iter()
        .map_init(
            || (Vec::new(), vec![0i8; BLOCK_LEN]),
            |(scratch, buf), i| {
                let lo = a + i * BLOCK_LEN as u64;
                let n = (b - lo + 1).min(BLOCK_LEN as u64) as usize;
                let out = &mut buf[..n];
                sieve_block(lo, out, &primes, scratch);
                f(lo, out)
            },
        )
        .collect())
}

/// Calls `f(lo, values)` for consecutive blocks covering `[a, b]`, in order.
/// Used by consumers that need every λ value but not the whole window at once.
pub fn for_each_lambda_block<F>(a: u64, b: u64, mut f: F) -> Result<()>
where
    F: FnMut(u64, &[i8]),
{
    check_window(a, b)?;
    let primes = SievePrimes::for_bound(b);
    let mut scratch = Vec::new();
    let mut buf = vec![0i8; BLOCK_LEN];
    let mut lo = a;
    loop {
        let n = (b - lo + 1).min(BLOCK_LEN as u64) as usize;
        sieve_block(lo, &mut buf[..n], &primes, &mut scratch);
        f(lo, &buf[..n]);
        if lo + n as u64 > b {
            break;
        }
        lo += n as u64;
    }
    Ok(())
}
