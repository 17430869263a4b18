use dposet::numerics::{
    delta, hr_log_estimate, lemma33_ratio, lemma33_ratio_saddle, ln_big, ln_factorial,
    meinardus_exponent_check, meinardus_target, partition_numbers, thm35_exponent_compare,
    tolerances, yr_rank_function, zr_rank_function, Sequence,
};
use dposet::poset::partitions_of;
use dposet::walks::chain_count_closed;
use num_bigint::BigInt;

/// Coin-change count over parts `1..=n`.
fn dp_partitions(n: usize) -> Vec<BigInt> {
    let mut ways = vec![BigInt::from(0); n + 1];
    ways[0] = BigInt::from(1);
    for part in 1..=n {
        for m in part..=n {
            let add = ways[m - part].clone();
            ways[m] += add;
        }
    }
    ways
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    (0..a.len())
        .map(|n| (0..=n).map(|k| &a[k] * &b[n - k]).sum())
        .collect()
}

#[test]
fn partitions_match_independent_counts() {
    let p = partition_numbers(500).unwrap();
    assert_eq!(p.values, dp_partitions(500));
    for n in 0..=60u32 {
        assert_eq!(p.values[n as usize], BigInt::from(partitions_of(n).len()));
    }
    assert_eq!(p.values[100], BigInt::from(190_569_292u64));
}

#[test]
fn young_powers_match_repeated_convolution() {
    let base = dp_partitions(120);
    let mut power = base.clone();
    for r in 1..=5u32 {
        assert_eq!(yr_rank_function(r, 120).values, power, "r={r}");
        power = convolve(&power, &base);
    }
}

#[test]
fn rank_two_values() {
    for r in 1..=10u32 {
        let c = BigInt::from((r + 2) * (r + 1) / 2 - 1);
        assert_eq!(yr_rank_function(r, 2).values[2], c);
        assert_eq!(zr_rank_function(r, 2).values[2], BigInt::from(r * r + 1));
    }
}

#[test]
fn fibonacci_dominates_young_power() {
    for r in 1..=4 {
        let z = zr_rank_function(r, 200);
        let y = yr_rank_function(r, 200);
        for seq in [&z, &y] {
            assert!(seq.values.windows(2).all(|w| w[0] <= w[1]));
        }
        assert!(z.values.iter().zip(&y.values).all(|(a, b)| a >= b));
    }
}

#[test]
fn hardy_ramanujan_error_shrinks() {
    let p = partition_numbers(10_000).unwrap();
    let err: Vec<f64> = [100, 1000, 10_000]
        .iter()
        .map(|&n| (ln_big(&p.values[n]) - hr_log_estimate(n).unwrap()).abs())
        .collect();
    assert!(err[0] > err[1] && err[1] > err[2], "{err:?}");
    assert!(hr_log_estimate(1).unwrap().is_finite());
    assert!(hr_log_estimate(0).is_err());
}

#[test]
fn exponents_approach_their_limits() {
    let grid = meinardus_exponent_check(1, 10_000);
    let target = meinardus_target(1);
    assert!(grid
        .windows(2)
        .all(|w| (target - w[1].1).abs() < (target - w[0].1).abs()));
    assert!((meinardus_target(2) - 3.628).abs() < 1e-3);

    let (first, second) = thm35_exponent_compare(1, 10_000);
    let limit = meinardus_target(1) / 2.0;
    assert!(((first / second) - limit).abs() / limit <= tolerances::THM35_RATIO_REL);
    assert_eq!(thm35_exponent_compare(4, 10).1, 4.0);

    assert!(lemma33_ratio_saddle(2, 1000).abs() < tolerances::LEMMA33_R2);
}

/// The fourth-root constant `e^(3r-2)` only matches the chain counts at
/// `r = 1`; for larger `r` the log ratio settles near `(r - 1) / 2`.
#[test]
fn chain_asymptotic_constant() {
    for r in 1..=4u32 {
        let (a, b) = (lemma33_ratio_saddle(r, 250), lemma33_ratio_saddle(r, 2000));
        assert!(b.abs() < a.abs() && b.abs() < 0.02, "r={r}: {a} {b}");
    }
    // r^(n/2) (n/e)^(n/2) e^(sqrt(rn) - r/4) / sqrt(2), straight from the
    // saddle point, against the exact count
    for (r, n) in [(2u32, 1500usize), (3, 1500)] {
        let (rf, x) = (f64::from(r), n as f64);
        let estimate =
            0.5 * x * (rf.ln() + x.ln() - 1.0) + (rf * x).sqrt() - rf / 4.0 - 0.5 * 2f64.ln();
        let exact = ln_big(&BigInt::from(chain_count_closed(r, n)));
        assert!((exact - estimate).abs() < 0.02, "r={r}");
        assert!((lemma33_ratio(r, n) - (exact - estimate) - 0.5 * (rf - 1.0)).abs() < 1e-4);
    }
    assert!((lemma33_ratio(2, 1000) - 0.5).abs() < 0.02);
}

#[test]
fn large_arguments_stay_finite() {
    let big = ln_factorial(1_000_000);
    assert!(big.is_finite() && big > 1.2e7);
    let exact: f64 = (2..=20_000).map(|k| (k as f64).ln()).sum();
    assert!((ln_factorial(20_000) - exact).abs() < 1e-6 * exact);
    assert!(hr_log_estimate(1_000_000).unwrap().is_finite());
}

#[test]
fn differences_of_fibonacci() {
    let d = delta(&zr_rank_function(1, 6), 1).unwrap();
    assert_eq!(d, Sequence::from_u64(&[1, 0, 1, 1, 2, 3, 5]));
    assert!(d.values[2..].iter().all(|v| *v > BigInt::from(0)));
}
