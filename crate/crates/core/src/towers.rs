//! Triad labels and the tower partition of the integers ≥ 2.
//!
//! Every `n ≥ 2` is written `n = m·p^k·u`. When some prime divides `n` at
//! least twice, `p` is the largest such prime; otherwise `p` is the largest
//! prime factor and `k = 1`. `m` collects the primes below `p` with their
//! exponents, `u` the (necessarily simple) primes above it. Dropping the
//! exponent gives the tower label `(m, p, u)`; the tower is
//! `{m·p^j·u : j ≥ κ}` with `κ = 1` when `u = 1` and `m` is squarefree, and
//! `κ = 2` otherwise. Consecutive members differ by one factor of `p`, so
//! their λ values alternate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{build_spf_table, factorize, Factorization, SpfTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegerClass {
    /// Divisible by the square of a prime.
    I,
    /// Squarefree (including 1).
    II,
}

impl fmt::Display for IntegerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntegerClass::I => "I",
            IntegerClass::II => "II",
        })
    }
}

/// The label `(m, p^k, u)` of a single integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triad {
    pub m: u64,
    pub p: u64,
    pub k: u32,
    pub u: u64,
}

impl Triad {
    /// The label of `n = 1`.
    pub const TRIVIAL: Triad = Triad { m: 1, p: 1, k: 0, u: 1 };

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }

    pub fn label(&self) -> TowerLabel {
        TowerLabel::unchecked(self.m, self.p, self.u)
    }

    pub fn class(&self) -> IntegerClass {
        if self.k >= 2 || !is_squarefree(self.m) {
            IntegerClass::I
        } else {
            IntegerClass::II
        }
    }

    /// Checks every structural clause of a triad and names the first one
    /// that fails.
    pub fn validate(&self) -> Result<()> {
        if self.p == 1 {
            if self.is_trivial() {
                return Ok(());
            }
            return Err(Error::InvalidTriad(format!(
                "p = 1 is reserved for the trivial triad (1, 1, k=0, 1), got {self}"
            )));
        }
        self.label().validate()?;
        if self.k == 0 {
            return Err(Error::InvalidTriad(format!("exponent k must be at least 1, got {self}")));
        }
        if self.u != 1 && self.k < 2 {
            return Err(Error::InvalidTriad(format!("u != 1 requires k >= 2, got {self}")));
        }
        if self.k == 1 && !is_squarefree(self.m) {
            return Err(Error::InvalidTriad(format!(
                "k = 1 requires a squarefree m (otherwise p is not the largest repeated prime), got {self}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Triad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} p={} k={} u={}", self.m, self.p, self.k, self.u)
    }
}

/// Exponent-free tower label `(m, p, u)`.
///
/// Labels order by their base integer, which is unique per tower. The base
/// exponent κ is fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TowerLabel {
    m: u64,
    p: u64,
    u: u64,
    kappa: u32,
}

impl TowerLabel {
    /// The one-element tower `{1}`.
    pub const TRIVIAL: TowerLabel = TowerLabel { m: 1, p: 1, u: 1, kappa: 0 };

    /// Validated constructor.
    pub fn new(m: u64, p: u64, u: u64) -> Result<Self> {
        let label = Self::unchecked(m, p, u);
        label.validate()?;
        Ok(label)
    }

    /// No validation; κ is still derived from `m` and `u`.
    pub(crate) fn unchecked(m: u64, p: u64, u: u64) -> Self {
        let kappa = if m == 1 && p == 1 && u == 1 {
            0
        } else if u == 1 && is_squarefree(m) {
            1
        } else {
            2
        };
        TowerLabel { m, p, u, kappa }
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn u(&self) -> u64 {
        self.u
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::TRIVIAL
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_trivial() {
            return Ok(());
        }
        let TowerLabel { m, p, u, .. } = *self;
        if m == 0 || u == 0 {
            return Err(Error::InvalidTriad(format!("m and u must be positive, got {self}")));
        }
        if p < 2 || !is_prime(p) {
            return Err(Error::InvalidTriad(format!("p = {p} is not prime")));
        }
        let mf = factorize(m, None)?;
        if let Some(q) = mf.largest_prime().filter(|&q| q >= p) {
            return Err(Error::InvalidTriad(format!(
                "every prime factor of m must be below p = {p}, but {q} divides m = {m}"
            )));
        }
        let uf = factorize(u, None)?;
        if let Some(&(q, _)) = uf.factors().first().filter(|&&(q, _)| q <= p) {
            return Err(Error::InvalidTriad(format!(
                "every prime factor of u must exceed p = {p}, but {q} divides u = {u}"
            )));
        }
        if !uf.is_squarefree() {
            return Err(Error::InvalidTriad(format!("u = {u} is not squarefree")));
        }
        Ok(())
    }

    /// κ: the exponent of `p` in the base integer (0 for the trivial tower).
    pub fn base_exponent(&self) -> u32 {
        self.kappa
    }

    /// `m·p^κ·u` in 128 bits, so ordering never overflows.
    fn base_wide(&self) -> u128 {
        let mut b = self.m as u128 * self.u as u128;
        for _ in 0..self.base_exponent() {
            b = b.saturating_mul(self.p as u128);
        }
        b
    }

    pub fn base(&self) -> Result<u64> {
        u64::try_from(self.base_wide()).map_err(|_| Error::Range(format!("base of tower {self} exceeds u64")))
    }

    /// Same as [`base_of`] for a label already known to be valid.
    pub fn base_triad(&self) -> Triad {
        Triad { m: self.m, p: self.p, k: self.base_exponent(), u: self.u }
    }
}

impl Ord for TowerLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base_wide()
            .cmp(&other.base_wide())
            .then_with(|| (self.m, self.p, self.u).cmp(&(other.m, other.p, other.u)))
    }
}

impl PartialOrd for TowerLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TowerLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.m, self.p, self.u)
    }
}

impl FromStr for TowerLabel {
    type Err = Error;

    /// Parses the `m:p:u` form and validates it.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        if parts.len() != 3 {
            return Err(Error::invalid(format!("expected a label of the form m:p:u, got {s:?}")));
        }
        let num = |t: &str| {
            t.parse::<u64>().map_err(|_| Error::invalid(format!("label component {t:?} is not a non-negative integer")))
        };
        TowerLabel::new(num(parts[0])?, num(parts[1])?, num(parts[2])?)
    }
}

fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n, None).map(|f| f.is_squarefree()).unwrap_or(false)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n, None).map(|f| f.factors() == [(n, 1)]).unwrap_or(false)
}

/// Triad of the integer whose factorization is `f`.
pub fn triad_of_factorization(f: &Factorization) -> Triad {
    let factors = f.factors();
    if factors.is_empty() {
        return Triad::TRIVIAL;
    }
    let pivot = factors.iter().rposition(|&(_, e)| e >= 2).unwrap_or(factors.len() - 1);
    let (p, k) = factors[pivot];
    let m = factors[..pivot].iter().fold(1u64, |acc, &(q, e)| acc * q.pow(e));
    let u = factors[pivot + 1..].iter().fold(1u64, |acc, &(q, _)| acc * q);
    Triad { m, p, k, u }
}

/// Tower label of `f`'s integer (`n ≥ 2`), with κ read off the exponents.
pub(crate) fn tower_of_factorization(f: &Factorization) -> TowerLabel {
    let t = triad_of_factorization(f);
    let factors = f.factors();
    let m_squarefree = factors.iter().take_while(|&&(q, _)| q < t.p).all(|&(_, e)| e == 1);
    let kappa = if t.u == 1 && m_squarefree { 1 } else { 2 };
    TowerLabel { m: t.m, p: t.p, u: t.u, kappa }
}

pub fn triad_of(n: u64) -> Result<Triad> {
    Ok(triad_of_factorization(&factorize(n, None)?))
}

pub fn triad_of_with(n: u64, table: &SpfTable) -> Result<Triad> {
    Ok(triad_of_factorization(&factorize(n, Some(table))?))
}

/// `m·p^k·u`, after validating the triad.
pub fn integer_of(t: &Triad) -> Result<u64> {
    t.validate()?;
    let overflow = || Error::Range(format!("integer of triad {t} exceeds u64"));
    let pk = crate::factor::checked_pow(t.p, t.k).ok_or_else(overflow)?;
    t.m.checked_mul(pk).and_then(|x| x.checked_mul(t.u)).ok_or_else(overflow)
}

pub fn tower_of(n: u64) -> Result<TowerLabel> {
    if n < 2 {
        return Err(Error::invalid(format!("tower_of needs n >= 2, got {n}")));
    }
    Ok(triad_of(n)?.label())
}

/// Base integer and base exponent κ of a tower.
pub fn base_of(label: &TowerLabel) -> Result<(u64, u32)> {
    label.validate()?;
    Ok((label.base()?, label.base_exponent()))
}

/// Members `m·p^j·u ≤ n_max`, `j ≥ κ`, ascending.
pub fn members_up_to(label: &TowerLabel, n_max: u64) -> Result<Vec<u64>> {
    label.validate()?;
    let mut out = Vec::new();
    let Ok(mut x) = label.base() else {
        return Ok(out);
    };
    if label.is_trivial() {
        if n_max >= 1 {
            out.push(1);
        }
        return Ok(out);
    }
    while x <= n_max {
        out.push(x);
        match x.checked_mul(label.p) {
            Some(next) => x = next,
            None => break,
        }
    }
    Ok(out)
}

const CENSUS_CHUNK: u64 = 1 << 14;

/// Member counts per tower for the integers `2..=n_max`, unordered.
pub(crate) fn tower_census(n_max: u64, table: &SpfTable) -> HashMap<TowerLabel, u64> {
    if n_max < 2 {
        return HashMap::new();
    }
    let chunks = (n_max - 1).div_ceil(CENSUS_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = 2 + c * CENSUS_CHUNK;
            let hi = (lo + CENSUS_CHUNK - 1).min(n_max);
            let mut local: HashMap<TowerLabel, u64> = HashMap::new();
            for n in lo..=hi {
                let f = factorize(n, Some(table)).expect("n >= 2");
                *local.entry(tower_of_factorization(&f)).or_default() += 1;
            }
            local
        })
        .reduce(HashMap::new, |a, b| if a.len() >= b.len() { merge(a, b) } else { merge(b, a) })
}

fn merge(mut a: HashMap<TowerLabel, u64>, b: HashMap<TowerLabel, u64>) -> HashMap<TowerLabel, u64> {
    for (k, v) in b {
        *a.entry(k).or_default() += v;
    }
    a
}

/// Towers met by `2..=n_max`, each with its number of members `≤ n_max`,
/// ordered by base integer.
pub fn towers_up_to(n_max: u64) -> Result<BTreeMap<TowerLabel, u64>> {
    if n_max < 2 {
        return Err(Error::invalid(format!("towers_up_to needs N >= 2, got {n_max}")));
    }
    let table = build_spf_table(n_max)?;
    Ok(tower_census(n_max, &table).into_iter().collect())
}

fn two_adic(n: u64) -> u32 {
    n.trailing_zeros()
}

/// The λ-flipping involution on the positive integers: multiply by 2 when
/// the power of 2 dividing `n` is even, halve it when odd.
pub fn twin_integer(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("twin_integer needs n >= 1"));
    }
    if two_adic(n).is_multiple_of(2) {
        n.checked_mul(2).ok_or_else(|| Error::Range(format!("twin of {n} exceeds u64")))
    } else {
        Ok(n / 2)
    }
}

/// Pairs a tower with the tower whose base has the opposite λ, by applying
/// the 2-adic rule to `m`. `(1, 2, 1)` pairs with the trivial tower.
///
/// Towers with `p = 2` and `u ≠ 1` have no partner under this rule: doubling
/// `m = 1` would put the prime 2 into `m`, which must stay below `p`.
pub fn twin_tower(label: &TowerLabel) -> Result<TowerLabel> {
    label.validate()?;
    let two_one_one = TowerLabel { m: 1, p: 2, u: 1, kappa: 1 };
    if label.is_trivial() {
        return Ok(two_one_one);
    }
    if *label == two_one_one {
        return Ok(TowerLabel::TRIVIAL);
    }
    if label.p == 2 {
        return Err(Error::Unsupported(format!(
            "tower {label} has p = 2 and u != 1; no twin tower with the same p and u exists"
        )));
    }
    let m = if two_adic(label.m).is_multiple_of(2) {
        label.m.checked_mul(2).ok_or_else(|| Error::Range(format!("twin of {label} exceeds u64")))?
    } else {
        label.m / 2
    };
    Ok(TowerLabel::unchecked(m, label.p, label.u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::liouville;

    fn t(m: u64, p: u64, k: u32, u: u64) -> Triad {
        Triad { m, p, k, u }
    }

    fn l(m: u64, p: u64, u: u64) -> TowerLabel {
        TowerLabel::new(m, p, u).unwrap()
    }

    #[test]
    fn triad_examples() {
        assert_eq!(triad_of(2160).unwrap(), t(16, 3, 3, 5));
        assert_eq!(triad_of(663).unwrap(), t(39, 17, 1, 1));
        assert_eq!(triad_of(73573500).unwrap(), t(1500, 7, 3, 143));
        assert_eq!(triad_of(4845).unwrap(), t(255, 19, 1, 1));
        assert_eq!(triad_of(81).unwrap(), t(1, 3, 4, 1));
        assert_eq!(triad_of(19).unwrap(), t(1, 19, 1, 1));
        assert_eq!(triad_of(1).unwrap(), Triad::TRIVIAL);
        assert!(triad_of(0).is_err());
    }

    #[test]
    fn integer_of_examples() {
        assert_eq!(integer_of(&t(39, 17, 1, 1)).unwrap(), 663);
        assert_eq!(integer_of(&Triad::TRIVIAL).unwrap(), 1);
        assert_eq!(integer_of(&t(4, 3, 2, 1)).unwrap(), 36);
    }

    #[test]
    fn integer_of_names_the_violation() {
        let msg = |tr: Triad| match integer_of(&tr) {
            Err(Error::InvalidTriad(s)) => s,
            other => panic!("expected invalid triad for {tr}, got {other:?}"),
        };
        assert!(msg(t(4, 3, 1, 1)).contains("squarefree m"));
        assert!(msg(t(1, 3, 1, 5)).contains("k >= 2"));
        assert!(msg(t(5, 3, 2, 1)).contains("prime factor of m"));
        assert!(msg(t(1, 3, 2, 2)).contains("prime factor of u"));
        assert!(msg(t(1, 3, 2, 25)).contains("not squarefree"));
        assert!(msg(t(1, 4, 2, 1)).contains("not prime"));
        assert!(msg(t(1, 1, 1, 1)).contains("trivial"));
        assert!(msg(t(1, 3, 0, 1)).contains("at least 1"));
        assert!(matches!(integer_of(&t(1, 2, 64, 1)), Err(Error::Range(_))));
    }

    #[test]
    fn tower_and_base_examples() {
        assert_eq!(tower_of(12).unwrap(), l(1, 2, 3));
        assert_eq!(base_of(&l(1, 2, 3)).unwrap(), (12, 2));
        assert_eq!(base_of(&l(1, 2, 1)).unwrap(), (2, 1));
        assert_eq!(base_of(&l(39, 17, 1)).unwrap(), (663, 1));
        assert_eq!(base_of(&l(16, 3, 5)).unwrap(), (720, 2));
        assert_eq!(base_of(&TowerLabel::TRIVIAL).unwrap(), (1, 0));
        assert!(tower_of(1).is_err());
    }

    #[test]
    fn members_examples() {
        assert_eq!(members_up_to(&l(1, 2, 3), 50).unwrap(), vec![12, 24, 48]);
        assert_eq!(members_up_to(&l(1, 3, 1), 30).unwrap(), vec![3, 9, 27]);
        assert!(members_up_to(&l(39, 17, 1), 600).unwrap().is_empty());
        assert_eq!(members_up_to(&l(1, 2, 1), u64::MAX).unwrap().len(), 63);
    }

    #[test]
    fn towers_small() {
        let two = towers_up_to(2).unwrap();
        assert_eq!(two.into_iter().collect::<Vec<_>>(), vec![(l(1, 2, 1), 1)]);

        let seven: Vec<_> = towers_up_to(7).unwrap().into_iter().collect();
        assert_eq!(seven, vec![(l(1, 2, 1), 2), (l(1, 3, 1), 1), (l(1, 5, 1), 1), (l(2, 3, 1), 1), (l(1, 7, 1), 1)]);

        assert_eq!(towers_up_to(12).unwrap().get(&l(1, 2, 3)), Some(&1));
        assert!(towers_up_to(1).is_err());
    }

    #[test]
    fn twin_integer_examples() {
        assert_eq!(twin_integer(3).unwrap(), 6);
        assert_eq!(twin_integer(6).unwrap(), 3);
        assert_eq!(twin_integer(12).unwrap(), 24);
        assert_eq!(twin_integer(24).unwrap(), 12);
        assert_eq!(twin_integer(1).unwrap(), 2);
        assert!(matches!(twin_integer(u64::MAX), Err(Error::Range(_))));
        assert!(twin_integer(0).is_err());
    }

    #[test]
    fn twin_tower_examples() {
        assert_eq!(twin_tower(&l(1, 5, 1)).unwrap(), l(2, 5, 1));
        assert_eq!(twin_tower(&l(3, 7, 1)).unwrap(), l(6, 7, 1));
        assert_eq!(twin_tower(&l(4, 3, 1)).unwrap(), l(8, 3, 1));
        assert_eq!(twin_tower(&l(1, 2, 1)).unwrap(), TowerLabel::TRIVIAL);
        assert_eq!(twin_tower(&TowerLabel::TRIVIAL).unwrap(), l(1, 2, 1));
        assert!(matches!(twin_tower(&l(1, 2, 3)), Err(Error::Unsupported(_))));

        let lam = |x: u64| liouville(x).unwrap();
        assert_eq!(lam(36), -lam(72));
    }

    #[test]
    fn label_text_round_trip() {
        let label: TowerLabel = "1500:7:143".parse().unwrap();
        assert_eq!(label, l(1500, 7, 143));
        assert_eq!(label.to_string(), "1500:7:143");
        assert!("1:2".parse::<TowerLabel>().is_err());
        assert!("1:4:1".parse::<TowerLabel>().is_err());
    }

    #[test]
    fn class_of_triads() {
        assert_eq!(triad_of(663).unwrap().class(), IntegerClass::II);
        assert_eq!(triad_of(2160).unwrap().class(), IntegerClass::I);
        assert_eq!(triad_of(12).unwrap().class(), IntegerClass::I);
        assert_eq!(Triad::TRIVIAL.class(), IntegerClass::II);
    }
}
