//! Numerical evaluation of F(s) = Σ λ(n)/n^s = ζ(2s)/ζ(s) for Re(s) > 1.
//!
//! Powers use the principal branch, `x^(−s) = exp(−s·ln x)`. Partial sums
//! are accumulated per fixed-size block and the block sums are combined by a
//! pairwise tree, so results are bit-identical for any thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factor::{build_spf_table, factorize, map_lambda_blocks, SpfTable};
use crate::towers::{tower_of_factorization, TowerLabel};

pub type ComplexValue = Complex64;

/// Closed-form denominators below this magnitude are treated as poles.
pub const SINGULARITY_EPS: f64 = 1e-12;

fn check_finite(s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("s = {s} is not finite")))
    }
}

fn pow_neg(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    match v.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => v[0],
        n => pairwise_sum(&v[..n / 2]) + pairwise_sum(&v[n / 2..]),
    }
}

/// Σ_{n ≤ N} λ(n)/n^s.
///
/// Any finite `s` is accepted; the sum only approximates F(s) when
/// Re(s) > 1.
pub fn f_direct(s: Complex64, n: u64) -> Result<Complex64> {
    check_finite(s)?;
    if n == 0 {
        return Err(Error::invalid("partial sum needs N >= 1"));
    }
    let blocks = map_lambda_blocks(1, n, |lo, vals| {
        vals.iter()
            .enumerate()
            .fold(Complex64::new(0.0, 0.0), |acc, (i, &v)| acc + pow_neg((lo + i as u64) as f64, s) * v as f64)
    })?;
    Ok(pairwise_sum(&blocks))
}

pub fn f_direct_real(s: f64, n: u64) -> Result<f64> {
    Ok(f_direct(Complex64::new(s, 0.0), n)?.re)
}

/// Σ_{j ≥ κ} λ(m·p^j·u) / (m·p^j·u)^s in closed form:
/// `λ(base)·base^(−s) / (1 + p^(−s))`.
pub fn tower_subseries(label: &TowerLabel, s: Complex64) -> Result<Complex64> {
    check_finite(s)?;
    label.validate()?;
    if label.is_trivial() {
        return Err(Error::invalid("the trivial tower {1} has no geometric tail"));
    }
    if s.re <= 0.0 {
        return Err(Error::OutOfDomain(format!("tower sub-series needs Re(s) > 0, got {s}")));
    }
    let base = label.base()?;
    let lam = factorize(base, None)?.liouville();
    closed_form(base, lam, label.p(), s)
}

fn closed_form(base: u64, lam: i8, p: u64, s: Complex64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) + pow_neg(p as f64, s);
    if denom.norm() < SINGULARITY_EPS {
        return Err(Error::Singularity(format!("1 + {p}^(-s) vanishes at s = {s}")));
    }
    Ok(pow_neg(base as f64, s) * lam as f64 / denom)
}

/// How [`f_by_towers`] treats members above the bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TowerTruncation {
    /// Each included tower contributes its full infinite sub-series.
    ClosedFormTails,
    /// Each included tower contributes only its members `≤ bound`, so the
    /// towers cover exactly `1..=bound`.
    SameCover,
}

const TOWER_CHUNK: u64 = 1 << 14;

/// `1 + Σ` over every tower whose base is `≤ base_bound`.
pub fn f_by_towers(s: Complex64, base_bound: u64, mode: TowerTruncation) -> Result<Complex64> {
    check_finite(s)?;
    if base_bound < 2 {
        return Err(Error::invalid(format!("tower bound must be at least 2, got {base_bound}")));
    }
    if s.re <= 1.0 {
        return Err(Error::OutOfDomain(format!("tower summation needs Re(s) > 1, got {s}")));
    }
    let table = build_spf_table(base_bound)?;
    let chunks = (base_bound - 1).div_ceil(TOWER_CHUNK);
    let sums = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = 2 + c * TOWER_CHUNK;
            let hi = (lo + TOWER_CHUNK - 1).min(base_bound);
            chunk_tower_sum(lo, hi, base_bound, s, mode, &table)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Complex64::new(1.0, 0.0) + pairwise_sum(&sums))
}

/// Towers whose base lies in `[lo, hi]`.
fn chunk_tower_sum(
    lo: u64,
    hi: u64,
    bound: u64,
    s: Complex64,
    mode: TowerTruncation,
    table: &SpfTable,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for n in lo..=hi {
        let f = factorize(n, Some(table))?;
        let label = tower_of_factorization(&f);
        if label.base()? != n {
            continue;
        }
        let lam = f.liouville();
        acc += match mode {
            TowerTruncation::ClosedFormTails => closed_form(n, lam, label.p(), s)?,
            TowerTruncation::SameCover => {
                let mut part = Complex64::new(0.0, 0.0);
                let (mut x, mut sign) = (n, lam as f64);
                loop {
                    part += pow_neg(x as f64, s) * sign;
                    match x.checked_mul(label.p()) {
                        Some(next) if next <= bound => x = next,
                        _ => break,
                    }
                    sign = -sign;
                }
                part
            }
        };
    }
    Ok(acc)
}

/// Euler–Maclaurin: terms `n < ZETA_TERMS` summed directly, the rest replaced
/// by `N^(1−s)/(s−1) + N^(−s)/2 + Σ_k B_2k/(2k)! · s(s+1)…(s+2k−2) · N^(−s−2k+1)`.
const ZETA_TERMS: u64 = 32;

/// B_2, B_4, …, B_16.
const BERNOULLI: [f64; 8] =
    [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0];

/// ζ(s) for Re(s) > 1.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    check_finite(s)?;
    if s.re <= 1.0 {
        return Err(Error::OutOfDomain(format!("zeta series needs Re(s) > 1, got {s}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let head: Complex64 = (1..ZETA_TERMS).map(|n| pow_neg(n as f64, s)).sum();
    let big_n = ZETA_TERMS as f64;
    let n_pow = pow_neg(big_n, s);
    let mut tail = n_pow * big_n / (s - one) + n_pow * 0.5;

    // rising factorial s(s+1)…(s+2k−2) / (2k)! times N^(−s−2k+1)
    let mut coeff = s / 2.0;
    let mut power = n_pow / big_n;
    for (k, b) in BERNOULLI.iter().enumerate() {
        tail += coeff * power * *b;
        let j = 2.0 * (k as f64 + 1.0);
        coeff = coeff * (s + j - 1.0) * (s + j) / ((j + 1.0) * (j + 2.0));
        power /= big_n * big_n;
    }
    Ok(head + tail)
}

/// ζ(2s)/ζ(s), the analytic value of F(s).
pub fn zeta_ratio_reference(s: Complex64) -> Result<Complex64> {
    let num = zeta(s * 2.0)?;
    let den = zeta(s)?;
    Ok(num / den)
}

/// `ln ln ln n / ln n` for `n > e^e`.
pub fn critical_line_width(n: f64) -> Result<f64> {
    if n.is_nan() || n <= std::f64::consts::E.exp() {
        return Err(Error::OutOfDomain(format!("width needs n > e^e, got {n}")));
    }
    critical_line_width_ln(n.ln())
}

/// The same width expressed through `t = ln n`, for n beyond f64 range.
pub fn critical_line_width_ln(ln_n: f64) -> Result<f64> {
    if ln_n.is_nan() || ln_n <= std::f64::consts::E {
        return Err(Error::OutOfDomain(format!("width needs ln n > e, got {ln_n}")));
    }
    Ok(ln_n.ln().ln() / ln_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn label(m: u64, p: u64, u: u64) -> TowerLabel {
        TowerLabel::new(m, p, u).unwrap()
    }

    #[test]
    fn direct_examples() {
        let two_terms = f_direct(c(10.0), 2).unwrap();
        assert_eq!(two_terms.re, 1.0 - 2f64.powi(-10));
        assert_eq!(two_terms.im, 0.0);
        let f2 = f_direct_real(2.0, 100_000).unwrap();
        assert!((f2 - PI * PI / 15.0).abs() < 5e-3);
        assert_eq!(f_direct(c(2.0), 1000).unwrap().re, f_direct_real(2.0, 1000).unwrap());
        assert!(f_direct(Complex64::new(f64::NAN, 0.0), 10).is_err());
    }

    #[test]
    fn subseries_examples() {
        assert!((tower_subseries(&label(1, 2, 1), c(2.0)).unwrap().re + 0.2).abs() < 1e-15);
        assert!((tower_subseries(&label(1, 3, 1), c(2.0)).unwrap().re + 0.1).abs() < 1e-15);
        let truncated = -(2f64.powi(-30)) + 2f64.powi(-60);
        assert!((tower_subseries(&label(1, 2, 1), c(30.0)).unwrap().re - truncated).abs() < 1e-12);
        assert!(tower_subseries(&TowerLabel::TRIVIAL, c(2.0)).is_err());
        assert!(tower_subseries(&label(1, 2, 1), c(-1.0)).is_err());
    }

    #[test]
    fn subseries_pole_is_reported() {
        // 1 + 2^(−s) = 0 at s = iπ/ln 2, approached from the right
        let s = Complex64::new(1e-15, PI / 2f64.ln());
        assert!(matches!(tower_subseries(&label(1, 2, 1), s), Err(Error::Singularity(_))));
    }

    #[test]
    fn towers_examples() {
        let two = f_by_towers(c(2.0), 2, TowerTruncation::ClosedFormTails).unwrap();
        assert!((two.re - 0.8).abs() < 1e-15);
        let f2 = f_by_towers(c(2.0), 100_000, TowerTruncation::ClosedFormTails).unwrap();
        assert!((f2.re - PI * PI / 15.0).abs() < 5e-3);
        let f3 = f_by_towers(c(3.0), 100_000, TowerTruncation::ClosedFormTails).unwrap();
        let z6 = PI.powi(6) / 945.0;
        let z3: f64 = (1..200_000u64).map(|n| (n as f64).powi(-3)).sum::<f64>() + 0.5 / 200_000f64.powi(2);
        assert!((f3.re - z6 / z3).abs() < 1e-3);
        assert!(f_by_towers(c(1.0), 10, TowerTruncation::SameCover).is_err());
    }

    #[test]
    fn reference_examples() {
        assert!((zeta_ratio_reference(c(2.0)).unwrap().re - PI * PI / 15.0).abs() < 1e-12);
        // high-precision values of ζ(2s)/ζ(s)
        let expect = [
            (c(3.0), Complex64::new(0.846_335_193_708_694_9, 0.0)),
            (c(2.5), Complex64::new(0.772_968_769_951_885_4, 0.0)),
            (Complex64::new(2.0, 3.0), Complex64::new(1.190_372_775_069_058, 0.228_744_767_740_178_7)),
        ];
        for (s, want) in expect {
            let got = zeta_ratio_reference(s).unwrap();
            assert!((got - want).norm() / want.norm() < 1e-8, "s = {s}: {got}");
        }
        assert!((zeta_ratio_reference(c(50.0)).unwrap().re - 1.0).abs() < 1e-12);
        assert!(matches!(zeta_ratio_reference(c(1.0)), Err(Error::OutOfDomain(_))));
        assert!(matches!(zeta(Complex64::new(0.5, 14.0)), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn width_examples() {
        let n = E.powf(E.powf(E));
        assert!((critical_line_width(n).unwrap() - E.powf(-E)).abs() < 1e-12);
        assert!((critical_line_width(1e9).unwrap() - 0.05352).abs() < 5e-5);
        assert!((critical_line_width(1e6).unwrap() - 0.06987).abs() < 5e-5);
        assert!(critical_line_width(E.powf(E)).is_err());
        assert!(critical_line_width(10.0).is_err());
        assert!(critical_line_width_ln(E).is_err());
    }
}
