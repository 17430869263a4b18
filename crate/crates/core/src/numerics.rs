//! Exact rank-function sequences and log-space asymptotic probes.

use std::f64::consts::{LN_2, PI};
use std::time::Duration;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::enumerate::{search_rank_function, SearchOutcome};
use crate::error::{Error, Result};
use crate::hypergraph::{p2_spectrum, poset_from_hypergraph, Hypergraph};
use crate::poset::{validate_differential, RankFunction, RankedPoset};
use crate::wagner::wagner_complete;
use crate::walks::chain_count_closed;

/// Acceptance thresholds for the asymptotic probes. They are pass/fail
/// limits for finite `n`, not mathematical constants.
pub mod tolerances {
    /// `|p(n) / HR(n) - 1|` at `n = 1000`.
    pub const HR_RATIO: f64 = 0.05;
    /// Relative distance of `log p_r(n) / sqrt(n)` from its limit at `n = 10^4`.
    pub const MEINARDUS_REL: f64 = 0.10;
    /// `|log ratio|` of the chain-count asymptotic, `r = 1`, `n = 2000`.
    pub const LEMMA33_R1: f64 = 0.05;
    /// Same, `r = 2`, `n = 1000`.
    pub const LEMMA33_R2: f64 = 0.10;
    /// Relative distance of the exponent ratio from `pi sqrt(2/3) / 2`.
    pub const THM35_RATIO_REL: f64 = 0.10;
}

pub const PARTITION_LIMIT: usize = 1_000_000;

/// Ln n! is summed exactly below this and taken from Stirling's series
/// above.
const STIRLING_FROM: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    pub values: Vec<BigInt>,
    pub offset: usize,
}

impl Sequence {
    pub fn new(values: Vec<BigInt>) -> Self {
        Sequence { values, offset: 0 }
    }

    pub fn from_u64(values: &[u64]) -> Self {
        Sequence::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at absolute index `n`.
    pub fn get(&self, n: usize) -> Option<&BigInt> {
        n.checked_sub(self.offset).and_then(|i| self.values.get(i))
    }

    /// Parses comma- or whitespace-separated integers.
    pub fn parse(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|_| Error::InvalidArgument(format!("invalid integer `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence::new(values))
    }
}

/// p(0..=n) by Euler's pentagonal-number recurrence.
pub fn partition_numbers(n: usize) -> Result<Sequence> {
    if n > PARTITION_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "partition table size {n} exceeds {PARTITION_LIMIT}"
        )));
    }
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let plus = k % 2 == 1;
            let mut term = p[m - g1].clone();
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                term += &p[m - g2];
            }
            if plus {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    Ok(Sequence::new(p))
}

fn divisor_sums(n: usize) -> Vec<u64> {
    let mut s = vec![0u64; n + 1];
    for d in 1..=n {
        for m in (d..=n).step_by(d) {
            s[m] += d as u64;
        }
    }
    s
}

/// Coefficients of the `r`-th power of the partition generating function,
/// from `n a_n = r sum_k sigma(k) a_{n-k}`.
pub fn yr_rank_function(r: u32, n: usize) -> Sequence {
    let sigma = divisor_sums(n);
    let mut a: Vec<BigUint> = Vec::with_capacity(n + 1);
    a.push(BigUint::one());
    for m in 1..=n {
        let mut acc = BigUint::zero();
        for k in 1..=m {
            acc += &a[m - k] * sigma[k];
        }
        acc *= r;
        a.push(acc / m as u64);
    }
    Sequence::new(a.into_iter().map(BigInt::from).collect())
}

/// `p_0 = 1`, `p_1 = r`, `p_n = r p_{n-1} + p_{n-2}`.
pub fn zr_rank_function(r: u32, n: usize) -> Sequence {
    let mut p = vec![BigInt::one()];
    if n >= 1 {
        p.push(BigInt::from(r));
    }
    for m in 2..=n {
        let next = BigInt::from(r) * &p[m - 1] + &p[m - 2];
        p.push(next);
    }
    Sequence::new(p)
}

/// Natural log of a positive integer, accurate to double precision.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "logarithm of a non-positive integer");
    let bits = x.bits();
    if bits <= 64 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().expect("fits").ln() + shift as f64 * LN_2
}

pub fn ln_factorial(n: usize) -> f64 {
    if n < STIRLING_FROM {
        return (2..=n).map(|k| (k as f64).ln()).sum();
    }
    let x = n as f64;
    x * x.ln() - x + 0.5 * (2.0 * PI * x).ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
}

/// Log of the Hardy-Ramanujan leading term for p(n).
pub fn hr_log_estimate(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let x = n as f64;
    Ok(PI * (2.0 * x / 3.0).sqrt() - (4.0 * x * 3f64.sqrt()).ln())
}

/// `p(n) / HR(n)`.
pub fn hr_ratio(n: usize) -> Result<f64> {
    let p = partition_numbers(n)?;
    Ok((ln_big(&p.values[n]) - hr_log_estimate(n)?).exp())
}

/// Limit of `log p_r(n) / sqrt(n)`.
pub fn meinardus_target(r: u32) -> f64 {
    PI * (2.0 * f64::from(r) / 3.0).sqrt()
}

/// Grid `10, 100, ...` below `n_max`, plus `n_max` itself.
pub fn geometric_grid(n_max: usize) -> Vec<usize> {
    let mut grid = Vec::new();
    let mut n = 10;
    while n < n_max {
        grid.push(n);
        n *= 10;
    }
    if n_max > 0 {
        grid.push(n_max);
    }
    grid
}

/// `(n, log p_r(n) / sqrt(n))` over [`geometric_grid`].
pub fn meinardus_exponent_check(r: u32, n_max: usize) -> Vec<(usize, f64)> {
    let seq = yr_rank_function(r, n_max);
    geometric_grid(n_max)
        .into_iter()
        .map(|n| (n, ln_big(&seq.values[n]) / (n as f64).sqrt()))
        .collect()
}

/// Log of the exact chain count over its asymptotic form.
pub fn lemma33_ratio(r: u32, n: usize) -> f64 {
    let exact = BigInt::from(chain_count_closed(r, n));
    let (rf, x) = (f64::from(r), n as f64);
    let asym = 0.5 * ln_factorial(n) + 0.5 * x * rf.ln() + (rf * x).sqrt()
        - 0.25 * ((8.0 * PI).ln() + 3.0 * rf - 2.0 + x.ln());
    ln_big(&exact) - asym
}

/// Same ratio with the fourth-root factor `8 pi e^r n`. This is the
/// constant a saddle-point estimate gives; it agrees with
/// [`lemma33_ratio`] at `r = 1` and differs by `(r - 1) / 2` in log space.
pub fn lemma33_ratio_saddle(r: u32, n: usize) -> f64 {
    lemma33_ratio(r, n) - 0.5 * (f64::from(r) - 1.0)
}

/// `(log p_r(n) / sqrt(n), 2 sqrt(r))`.
pub fn thm35_exponent_compare(r: u32, n: usize) -> (f64, f64) {
    let seq = yr_rank_function(r, n);
    (
        ln_big(&seq.values[n]) / (n as f64).sqrt(),
        2.0 * f64::from(r).sqrt(),
    )
}

/// `t`-fold first difference keeping the leading term.
pub fn delta(seq: &Sequence, t: usize) -> Result<Sequence> {
    if t > seq.len() {
        return Err(Error::InvalidArgument(format!(
            "difference order {t} exceeds sequence length {}",
            seq.len()
        )));
    }
    let mut v = seq.values.clone();
    for _ in 0..t {
        for i in (1..v.len()).rev() {
            v[i] = &v[i] - &v[i - 1];
        }
    }
    Ok(Sequence {
        values: v,
        offset: seq.offset,
    })
}

#[derive(Clone, Debug)]
pub struct IntervalReport {
    /// Rank function of the complete-graph prefix completed by Wagner's
    /// construction, through rank 5.
    pub p_prime: RankFunction,
    pub p_prime_ok: bool,
    pub spectrum4: Vec<u64>,
    /// 16 is absent from the spectrum.
    pub p_triple_prime_refuted: bool,
    /// Exhaustive search agrees that nothing begins 1,4,16.
    pub p_triple_prime_search: SearchOutcome,
    pub p_double_prime: SearchOutcome,
    pub p_double_prime_valid: bool,
}

impl IntervalReport {
    pub fn all_ok(&self) -> bool {
        self.p_prime_ok
            && self.p_triple_prime_refuted
            && matches!(self.p_triple_prime_search, SearchOutcome::DefinitelyNone)
            && self.p_double_prime_valid
    }
}

/// Realizes 1,4,14,60,254, refutes 1,4,16 and searches for 1,4,17,60,254.
pub fn interval_demo(budget: Option<Duration>) -> Result<IntervalReport> {
    let k4 = poset_from_hypergraph(&Hypergraph::complete_graph(4), 4)?;
    let p = wagner_complete(&k4, 4, 5)?;
    let p_prime = p.rank_function();
    let p_prime_ok =
        p_prime.values() == [1, 4, 14, 60, 254, 1076] && validate_differential(&p, 4).ok;

    let spectrum4 = p2_spectrum(4)?;
    let p_triple_prime_refuted = !spectrum4.contains(&16);
    let p_triple_prime_search = search_rank_function(4, &RankFunction(vec![1, 4, 16]), None)?;

    let target = RankFunction(vec![1, 4, 17, 60, 254]);
    let p_double_prime = search_rank_function(4, &target, budget)?;
    let p_double_prime_valid = match &p_double_prime {
        SearchOutcome::Found(w) => w.rank_function() == target && validate_differential(w, 4).ok,
        _ => false,
    };
    Ok(IntervalReport {
        p_prime,
        p_prime_ok,
        spectrum4,
        p_triple_prime_refuted,
        p_triple_prime_search,
        p_double_prime,
        p_double_prime_valid,
    })
}

/// The witness poset of a successful search, if any.
pub fn witness(outcome: &SearchOutcome) -> Option<&RankedPoset> {
    match outcome {
        SearchOutcome::Found(p) => Some(p),
        _ => None,
    }
}
