use liouville_core::factor::{liouville_segment, primes_up_to};
use liouville_core::lambda_gen::{double_lambda, generate_to};

#[test]
fn doubling_matches_sieve() {
    let half = liouville_segment(1, 100_000).unwrap();
    let (doubled, primes) = double_lambda(&half).unwrap();
    assert_eq!(doubled, liouville_segment(1, 200_000).unwrap());
    let want: Vec<u64> = primes_up_to(200_000).into_iter().filter(|&p| p > 100_000).collect();
    assert_eq!(primes, want);
}

#[test]
fn every_witness_agrees() {
    let g = generate_to(100_000).unwrap();
    let lambda = |n: u64| g.table.get(n).unwrap();
    for m in 4..=100_000u64 {
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                assert_eq!(lambda(d) * lambda(m / d), lambda(m), "{m} = {d} * {}", m / d);
            }
            d += 1;
        }
    }
}

#[test]
fn generated_matches_sieve() {
    let g = generate_to(1_000_000).unwrap();
    assert_eq!(g.table, liouville_segment(1, 1_000_000).unwrap());
    assert_eq!(g.primes, primes_up_to(1_000_000));
}
