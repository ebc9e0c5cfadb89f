//! The summatory function L(N) = Σ_{n ≤ N} λ(n).
//!
//! Three routes: the segmented sieve ([`summatory_l`], [`summatory_range`]),
//! tower peak counting ([`summatory_by_towers`]), and a checkpointed sieve
//! sum for long runs ([`summatory_l_checkpointed`]).

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{build_spf_table, factorize, lambda_sum, lambda_sum_with, SievePrimes};
use crate::towers::{members_up_to, tower_census, TowerLabel};

/// L(N).
pub fn summatory_l(n: u64) -> Result<i64> {
    if n == 0 {
        return Err(Error::invalid("L(N) needs N >= 1"));
    }
    lambda_sum(1, n)
}

/// Σ λ over the `len` integers starting at `n0`.
pub fn summatory_range(n0: u64, len: u64) -> Result<i64> {
    if n0 == 0 || len == 0 {
        return Err(Error::invalid(format!("range needs n0 >= 1 and len >= 1, got ({n0}, {len})")));
    }
    let end = n0.checked_add(len - 1).ok_or_else(|| Error::Range(format!("range ({n0}, {len}) runs past u64")))?;
    lambda_sum(n0, end)
}

/// L(N) for every N in `targets`, in input order, from one sweep up to the
/// largest target.
pub fn summatory_at(targets: &[u64]) -> Result<Vec<i64>> {
    if targets.contains(&0) {
        return Err(Error::invalid("L(N) needs N >= 1"));
    }
    let Some(&max) = targets.iter().max() else {
        return Ok(Vec::new());
    };
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by_key(|&i| targets[i]);
    let primes = SievePrimes::for_bound(max);
    let mut out = vec![0i64; targets.len()];
    let (mut done, mut acc) = (0u64, 0i64);
    for i in order {
        let t = targets[i];
        if t > done {
            acc += lambda_sum_with(done + 1, t, &primes);
            done = t;
        }
        out[i] = acc;
    }
    Ok(out)
}

/// Upward (`positive`) and downward (`negative`) unit steps of all tower
/// waves at or before `n`, the trivial tower's step at 1 included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeakCount {
    pub n: u64,
    pub positive: u64,
    pub negative: u64,
}

impl PeakCount {
    pub fn difference(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// L(N) assembled tower by tower.
///
/// A tower with `c` members up to `N` and base value `Λ` contributes `Λ` when
/// `c` is odd and 0 when even; its `c` steps split into `⌈c/2⌉` of sign `Λ`
/// and `⌊c/2⌋` of sign `−Λ`.
pub fn summatory_by_towers(n: u64) -> Result<(i64, PeakCount)> {
    if n == 0 {
        return Err(Error::invalid("L(N) needs N >= 1"));
    }
    // the trivial tower {1}
    let mut total = 1i64;
    let mut peaks = PeakCount { n, positive: 1, negative: 0 };
    if n == 1 {
        return Ok((total, peaks));
    }
    let table = build_spf_table(n)?;
    let census = tower_census(n, &table);
    for (label, count) in census {
        let base = label.base()?;
        let lam = factorize(base, Some(&table))?.liouville();
        let (same, opposite) = (count.div_ceil(2), count / 2);
        if count % 2 == 1 {
            total += lam as i64;
        }
        if lam > 0 {
            peaks.positive += same;
            peaks.negative += opposite;
        } else {
            peaks.negative += same;
            peaks.positive += opposite;
        }
    }
    Ok((total, peaks))
}

/// The rectangular wave of one tower: after each member `n ≤ N`, the
/// tower's running contribution to L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveTrace {
    pub label: TowerLabel,
    pub steps: Vec<(u64, i64)>,
}

impl WaveTrace {
    pub fn base_lambda(&self) -> Option<i64> {
        self.steps.first().map(|&(_, c)| c)
    }
}

pub fn wave_trace(label: &TowerLabel, n_max: u64) -> Result<WaveTrace> {
    let members = members_up_to(label, n_max)?;
    let mut steps = Vec::with_capacity(members.len());
    if let Some(&base) = members.first() {
        let lam = factorize(base, None)?.liouville() as i64;
        for (j, &x) in members.iter().enumerate() {
            steps.push((x, if j % 2 == 0 { lam } else { 0 }));
        }
    }
    Ok(WaveTrace { label: *label, steps })
}

/// Default spacing of checkpoint records.
pub const DEFAULT_CHECKPOINT_STRIDE: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct CheckpointConfig {
    pub path: PathBuf,
    pub stride: u64,
}

impl CheckpointConfig {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        CheckpointConfig { path: path.into(), stride: DEFAULT_CHECKPOINT_STRIDE }
    }
}

/// Reads `N,L` records and returns the last one with `N ≤ limit`.
/// Lines that do not parse (a torn final write, say) are skipped.
pub fn read_checkpoint(path: &std::path::Path, limit: u64) -> Result<Option<(u64, i64)>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut best = None;
    for line in BufReader::new(file).lines() {
        let line = line?;
        let Some((a, b)) = line.trim().split_once(',') else {
            continue;
        };
        if let (Ok(n), Ok(l)) = (a.trim().parse::<u64>(), b.trim().parse::<i64>()) {
            if n >= 1 && n <= limit {
                best = Some((n, l));
            }
        }
    }
    Ok(best)
}

/// Appends a newline when the file ends mid-record, so new records never
/// fuse with a torn one.
fn terminate_last_line(file: &mut File) -> Result<()> {
    use std::io::{Read, Seek, SeekFrom};
    let len = file.metadata()?.len();
    if len == 0 {
        return Ok(());
    }
    let mut last = [0u8; 1];
    file.seek(SeekFrom::Start(len - 1))?;
    file.read_exact(&mut last)?;
    if last[0] != b'\n' {
        file.write_all(b"\n")?;
    }
    Ok(())
}

/// L(N), resuming from and appending to a checkpoint file.
///
/// A record `N,L` is appended at every multiple of `stride` and at `n`
/// itself; `progress` sees each record as it is written. The result is the
/// same whether the run starts fresh or resumes.
pub fn summatory_l_checkpointed<F>(n: u64, cfg: &CheckpointConfig, mut progress: F) -> Result<i64>
where
    F: FnMut(u64, i64),
{
    if n == 0 {
        return Err(Error::invalid("L(N) needs N >= 1"));
    }
    if cfg.stride == 0 {
        return Err(Error::invalid("checkpoint stride must be positive"));
    }
    let (mut done, mut acc) = read_checkpoint(&cfg.path, n)?.unwrap_or((0, 0));
    if done == n {
        return Ok(acc);
    }
    let mut out = OpenOptions::new().create(true).read(true).append(true).open(&cfg.path)?;
    terminate_last_line(&mut out)?;
    let primes = SievePrimes::for_bound(n);
    while done < n {
        let next = ((done / cfg.stride + 1) * cfg.stride).min(n);
        acc += lambda_sum_with(done + 1, next, &primes);
        done = next;
        writeln!(out, "{done},{acc}")?;
        out.flush()?;
        progress(done, acc);
    }
    Ok(acc)
}
