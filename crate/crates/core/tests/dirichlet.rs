use liouville_core::dirichlet::{
    critical_line_width, critical_line_width_ln, f_by_towers, f_direct, tower_subseries, zeta_ratio_reference,
    TowerTruncation,
};
use liouville_core::factor::liouville;
use liouville_core::towers::towers_up_to;
use num_complex::Complex64;

const BOUND: u64 = 1_000_000;

fn points() -> [Complex64; 4] {
    [Complex64::new(2.0, 0.0), Complex64::new(2.5, 0.0), Complex64::new(3.0, 0.0), Complex64::new(2.0, 3.0)]
}

#[test]
fn three_routes_agree() {
    for s in points() {
        let direct = f_direct(s, BOUND).unwrap();
        let reference = zeta_ratio_reference(s).unwrap();
        assert!((direct - reference).norm() <= 5e-3, "s = {s}: {direct} vs {reference}");
        let cover = f_by_towers(s, BOUND, TowerTruncation::SameCover).unwrap();
        assert!((cover - direct).norm() <= 1e-6, "s = {s}: {cover} vs {direct}");
        let tails = f_by_towers(s, BOUND, TowerTruncation::ClosedFormTails).unwrap();
        assert!((tails - reference).norm() <= 5e-3, "s = {s}: {tails} vs {reference}");
    }
}

#[test]
fn closed_form_matches_explicit_sum() {
    let labels: Vec<_> = towers_up_to(2000).unwrap().into_keys().collect();
    let points =
        [Complex64::new(1.5, 0.0), Complex64::new(2.0, 3.0), Complex64::new(4.0, -7.5), Complex64::new(1.5, 40.0)];
    for label in &labels {
        let base = label.base().unwrap();
        let lam = liouville(base).unwrap() as f64;
        for s in points {
            let mut explicit = Complex64::new(0.0, 0.0);
            let mut x = base as f64;
            let mut sign = lam;
            for _ in 0..60 {
                explicit += (-s * x.ln()).exp() * sign;
                x *= label.p() as f64;
                sign = -sign;
            }
            let closed = tower_subseries(label, s).unwrap();
            assert!((closed - explicit).norm() <= 1e-12, "{label} at {s}: {closed} vs {explicit}");
        }
    }
}

#[test]
fn sums_are_thread_count_independent() {
    let s = Complex64::new(2.0, 3.0);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            (f_direct(s, 500_000).unwrap(), f_by_towers(s, 200_000, TowerTruncation::ClosedFormTails).unwrap())
        })
    };
    let (a, b) = (run(1), run(3));
    assert_eq!(a.0.re.to_bits(), b.0.re.to_bits());
    assert_eq!(a.0.im.to_bits(), b.0.im.to_bits());
    assert_eq!(a.1.re.to_bits(), b.1.re.to_bits());
    assert_eq!(a.1.im.to_bits(), b.1.im.to_bits());
}

#[test]
fn width_decreases() {
    let mut prev = f64::INFINITY;
    let mut n = 1e4;
    while n < 1e300 {
        let w = critical_line_width(n).unwrap();
        assert!(w < prev, "n = {n}");
        prev = w;
        n *= 1.5;
    }
    let far = critical_line_width_ln(200.0 * 10f64.ln()).unwrap();
    assert!(far < 1e-2);
    assert!((critical_line_width_ln(1e9f64.ln()).unwrap() - critical_line_width(1e9).unwrap()).abs() < 1e-15);
}
