//! Exact computation with the Liouville function λ(n) = (−1)^Ω(n).
//!
//! The crate is organised bottom-up:
//!
//! * [`factor`]: factorization, smallest-prime-factor tables and the
//!   segmented λ sieve every other module reads from.
//! * [`towers`]: the triad labelling `n = m·p^k·u` that partitions the
//!   integers ≥ 2 into towers with alternating λ, and the twin involutions.
//! * [`summatory`]: L(N) by direct sieving and by counting tower peaks,
//!   wave traces, and checkpointed long sums.
//! * [`dirichlet`]: Σ λ(n)/n^s evaluated directly, tower by tower, and as
//!   ζ(2s)/ζ(s).
//! * [`lambda_gen`]: λ on [1, 2N] from λ on [1, N] by multiplication and
//!   gap detection alone.
//! * [`stats`]: χ² statistics of λ segments and the published segment tables.

pub mod dirichlet;
pub mod error;
pub mod factor;
pub mod lambda_gen;
pub mod stats;
pub mod summatory;
pub mod towers;

pub use error::{Error, Result};
pub use factor::{factorize, liouville, liouville_segment, Factorization, LambdaTable, SpfTable};
pub use towers::{TowerLabel, Triad};
