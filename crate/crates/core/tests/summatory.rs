use liouville_core::factor::liouville_segment;
use liouville_core::summatory::{summatory_by_towers, summatory_l, summatory_range};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

#[test]
fn peaks_agree_with_sieve_small() {
    let lambda = liouville_segment(1, 2000).unwrap();
    let mut running = 0i64;
    for n in 1..=2000u64 {
        running += lambda.get(n).unwrap() as i64;
        let (l, peaks) = summatory_by_towers(n).unwrap();
        assert_eq!(l, running, "N = {n}");
        assert_eq!(peaks.positive + peaks.negative, n);
        assert_eq!(peaks.difference(), running);
    }
}

#[test]
fn peaks_agree_with_sieve_random() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..100 {
        let n = rng.gen_range(1..=1_000_000u64);
        let (l, peaks) = summatory_by_towers(n).unwrap();
        assert_eq!(l, summatory_l(n).unwrap(), "N = {n}");
        assert_eq!(peaks.positive + peaks.negative, n);
    }
}

#[test]
fn matches_plain_sum() {
    let lambda = liouville_segment(1, 300_000).unwrap();
    let want: i64 = lambda.values().iter().map(|&v| v as i64).sum();
    assert_eq!(summatory_l(300_000).unwrap(), want);
}

proptest! {
    #[test]
    fn ranges_add(a in 1u64..=10_000_000_000, l1 in 1u64..200_000, l2 in 1u64..200_000) {
        let whole = summatory_range(a, l1 + l2).unwrap();
        prop_assert_eq!(summatory_range(a, l1).unwrap() + summatory_range(a + l1, l2).unwrap(), whole);
    }
}
