use liouville_core::factor::{build_spf_table, factorize, liouville, liouville_segment, primes_up_to};
use proptest::prelude::*;
use rand::{rngs::StdRng, Rng, SeedableRng};

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn lambda_oracle(n: u64) -> i8 {
    let omega: u32 = trial_division(n).iter().map(|&(_, e)| e).sum();
    if omega.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[test]
fn factorize_matches_trial_division() {
    let table = build_spf_table(100_000).unwrap();
    for n in 1..=100_000u64 {
        let want = trial_division(n);
        assert_eq!(factorize(n, Some(&table)).unwrap().factors(), want.as_slice(), "n = {n}");
        assert_eq!(factorize(n, None).unwrap().factors(), want.as_slice(), "n = {n}");
    }
}

#[test]
fn segments_match_pointwise() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..100 {
        let a = rng.gen_range(1..1_000_000_000u64 - 1000);
        let seg = liouville_segment(a, a + 999).unwrap();
        for (i, &v) in seg.values().iter().enumerate() {
            let n = a + i as u64;
            assert_eq!(v, liouville(n).unwrap(), "λ({n})");
        }
    }
}

#[test]
fn segment_matches_oracle_near_origin() {
    let seg = liouville_segment(1, 5000).unwrap();
    for n in 1..=5000 {
        assert_eq!(seg.get(n), Some(lambda_oracle(n)), "λ({n})");
    }
}

#[test]
fn primes_match_oracle() {
    let want: Vec<u64> = (2..=20_000u64).filter(|&n| trial_division(n) == [(n, 1)]).collect();
    assert_eq!(primes_up_to(20_000), want);
}

#[test]
fn segments_are_thread_count_independent() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| liouville_segment(999_000_000, 999_400_000).unwrap())
    };
    assert_eq!(run(1), run(4));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn completely_multiplicative(m in 1u64..=1_000_000_000, seed in any::<u64>()) {
        let n = 1 + seed % (1_000_000_000 / m);
        prop_assert_eq!(liouville(m * n).unwrap(), liouville(m).unwrap() * liouville(n).unwrap());
    }

    #[test]
    fn factorization_reassembles(n in 1u64..=u32::MAX as u64 * 64) {
        let f = factorize(n, None).unwrap();
        let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
        prop_assert_eq!(product, n);
        prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
    }
}
