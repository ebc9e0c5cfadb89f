//! λ on `[1, 2N]` from λ on `[1, N]`, using products of known values and
//! nothing else.
//!
//! Every composite `m ≤ 2N` has a divisor `n` with `2 ≤ n ≤ √m` and
//! `m / n ≤ N` (its smallest prime factor works), so after marking every
//! product `n·q` with `n, q ≤ N` the entries left unmarked in `(N, 2N]` are
//! exactly the primes there.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{resource, LambdaTable};

const CHUNK: usize = 1 << 16;

/// A λ table together with the primes found as gaps while building it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedLambda {
    pub table: LambdaTable,
    /// Ascending; every prime up to the table's end.
    pub primes: Vec<u64>,
}

/// Extends a table covering `[1, N]` to `[1, 2N]`. Returns the new table
/// and the primes in `(N, 2N]`.
pub fn double_lambda(table: &LambdaTable) -> Result<(LambdaTable, Vec<u64>)> {
    if table.start() != 1 {
        return Err(Error::invalid(format!("doubling needs a table starting at 1, got start {}", table.start())));
    }
    let n = table.len() as u64;
    if n < 2 {
        return Err(Error::invalid("doubling needs at least λ(1) and λ(2)"));
    }
    extend_to(table.values(), n.checked_mul(2).ok_or_else(|| Error::Range("2N overflows".into()))?)
}

/// `known` is λ(1..=N); fills `(N, target]` for `target ≤ 2N`.
fn extend_to(known: &[i8], target: u64) -> Result<(LambdaTable, Vec<u64>)> {
    let n = known.len() as u64;
    debug_assert!(target > n && target <= 2 * n);
    let mut values = Vec::new();
    values.try_reserve_exact(target as usize).map_err(|_| resource("generated λ table", target as u128))?;
    values.extend_from_slice(known);
    values.resize(target as usize, 0);

    // 0 marks "no product found yet"
    values[n as usize..].par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
        let lo = n + 1 + (c * CHUNK) as u64;
        let hi = lo + out.len() as u64 - 1;
        let mut small = 2u64;
        while small * small <= hi {
            let lam_small = known[small as usize - 1];
            let first = lo.div_ceil(small).max(small);
            let last = (hi / small).min(n);
            for q in first..=last {
                out[(small * q - lo) as usize] = lam_small * known[q as usize - 1];
            }
            small += 1;
        }
    });

    let mut primes = Vec::new();
    for (i, v) in values[n as usize..].iter_mut().enumerate() {
        if *v == 0 {
            *v = -1;
            primes.push(n + 1 + i as u64);
        }
    }
    Ok((LambdaTable::new(1, values)?, primes))
}

/// λ(1..=N) by repeated doubling from the seed `[+1, −1]`.
pub fn generate_to(n: u64) -> Result<GeneratedLambda> {
    if n == 0 {
        return Err(Error::invalid("generate_to needs N >= 1"));
    }
    let mut values = vec![1i8, -1];
    let mut primes = vec![2u64];
    while (values.len() as u64) < n {
        let target = (values.len() as u64 * 2).min(n);
        let (table, found) = extend_to(&values, target)?;
        values = table.into_values();
        primes.extend(found);
    }
    values.truncate(n as usize);
    primes.retain(|&p| p <= n);
    Ok(GeneratedLambda { table: LambdaTable::new(1, values)?, primes })
}
