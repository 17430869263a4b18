//! Exact Hasse-walk statistics and the identities they satisfy on
//! differential posets.
//!
//! Every check uses the parameter `r` stored on the poset.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poset::RankedPoset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkStats {
    pub n: usize,
    /// Cover edges between ranks `n` and `n + 1`.
    pub alpha_up: BigUint,
    /// Walks `x < z > y` from rank `n` through rank `n + 1`.
    pub alpha_up_down: BigUint,
    /// Closed walks `x1 < x2 > x3 < x4 > x1` based in rank `n`.
    pub kappa4: BigUint,
    pub sum_c_sq: BigUint,
    pub sum_e_sq: BigUint,
    /// Maximal chains from the root to rank `n`.
    pub alpha_0n: BigUint,
    /// Maximal chains from the root to rank `n + 1`, as `sum c(x) e(x)`.
    pub alpha_0n1: BigUint,
}

fn need_rank(p: &RankedPoset, n: usize) -> Result<()> {
    if n > p.top_rank() {
        return Err(Error::RankOutOfRange {
            rank: n,
            top: p.top_rank(),
        });
    }
    Ok(())
}

fn need_up(p: &RankedPoset, n: usize) -> Result<()> {
    if n + 1 > p.top_rank() {
        return Err(Error::RankOutOfRange {
            rank: n + 1,
            top: p.top_rank(),
        });
    }
    Ok(())
}

/// Number of maximal chains ending at each element, for ranks `0..=n`.
pub fn chain_counts(p: &RankedPoset, n: usize) -> Result<Vec<Vec<BigUint>>> {
    need_rank(p, n)?;
    let mut e: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
    for j in 1..=n {
        let prev = &e[j - 1];
        let level = p
            .down_level(j)
            .iter()
            .map(|covers| covers.iter().map(|&c| &prev[c as usize]).sum())
            .collect();
        e.push(level);
    }
    Ok(e)
}

pub fn walk_stats(p: &RankedPoset, n: usize) -> Result<WalkStats> {
    need_up(p, n)?;
    let e = chain_counts(p, n)?;
    let en = &e[n];
    let c: Vec<u64> = p.up_level(n).iter().map(|u| u.len() as u64).collect();

    let alpha_up: u64 = c.iter().sum();
    let alpha_up_down: u64 = p
        .down_level(n + 1)
        .iter()
        .map(|d| (d.len() * d.len()) as u64)
        .sum();

    // common upper covers of distinct pairs
    let mut m: HashMap<(u32, u32), u64> = HashMap::new();
    for d in p.down_level(n + 1) {
        for (k, &a) in d.iter().enumerate() {
            for &b in &d[k + 1..] {
                *m.entry((a, b)).or_default() += 1;
            }
        }
    }
    let sum_c_sq: BigUint = c.iter().map(|&x| BigUint::from(x * x)).sum();
    let off_diagonal: BigUint = m.values().map(|&v| BigUint::from(2 * v * v)).sum();

    Ok(WalkStats {
        n,
        alpha_up: alpha_up.into(),
        alpha_up_down: alpha_up_down.into(),
        kappa4: &sum_c_sq + off_diagonal,
        sum_c_sq,
        sum_e_sq: en.iter().map(|x| x * x).sum(),
        alpha_0n: en.iter().sum(),
        alpha_0n1: en.iter().zip(&c).map(|(x, &ci)| x * ci).sum(),
    })
}

fn r_big(p: &RankedPoset) -> BigUint {
    BigUint::from(p.r())
}

fn prefix_sum(p: &RankedPoset, n: usize) -> BigUint {
    (0..=n).map(|j| BigUint::from(p.level_size(j))).sum()
}

/// Up-step count equals `r` times the number of elements up to rank `n`.
pub fn check_eq3(p: &RankedPoset, n: usize) -> Result<bool> {
    let s = walk_stats(p, n)?;
    Ok(s.alpha_up == r_big(p) * prefix_sum(p, n))
}

pub fn check_lemma31(p: &RankedPoset, n: usize) -> Result<bool> {
    let s = walk_stats(p, n)?;
    Ok(&s.sum_c_sq + &s.alpha_up_down == &s.kappa4 + &s.alpha_up)
}

/// Right-hand side of the closed form for `sum c(x)^2` over rank `n`.
pub fn lemma32_closed_form(p: &RankedPoset, n: usize) -> Result<BigUint> {
    need_rank(p, n)?;
    let r = u64::from(p.r());
    Ok((0..=n)
        .map(|j| {
            let eps = ((n - j) % 2) as u64;
            BigUint::from(r * r * (n - j + 1) as u64 + eps * r) * BigUint::from(p.level_size(j))
        })
        .sum())
}

pub fn check_lemma32(p: &RankedPoset, n: usize) -> Result<bool> {
    let s = walk_stats(p, n)?;
    Ok(s.sum_c_sq == lemma32_closed_form(p, n)?)
}

/// `n!` times the coefficient of `q^n` in `exp(rq + rq^2/2)`.
pub fn chain_count_closed(r: u32, n: usize) -> BigUint {
    chain_count_sequence(r, n)
        .pop()
        .expect("sequence is nonempty")
}

/// `a(0..=n)` with `a(k+1) = r a(k) + r k a(k-1)`.
pub fn chain_count_sequence(r: u32, n: usize) -> Vec<BigUint> {
    let r = BigUint::from(r);
    let mut a = vec![BigUint::one()];
    if n >= 1 {
        a.push(r.clone());
    }
    for k in 1..n {
        let next = &r * &a[k] + &r * BigUint::from(k) * &a[k - 1];
        a.push(next);
    }
    a
}

fn alpha_0n(p: &RankedPoset, n: usize) -> Result<BigUint> {
    Ok(chain_counts(p, n)?
        .pop()
        .expect("rank 0 is present")
        .into_iter()
        .sum())
}

pub fn check_chain_universality(p: &RankedPoset, n: usize) -> Result<bool> {
    Ok(alpha_0n(p, n)? == chain_count_closed(p.r(), n))
}

pub fn check_sum_e_squared(p: &RankedPoset, n: usize) -> Result<bool> {
    let e = chain_counts(p, n)?;
    let lhs: BigUint = e[n].iter().map(|x| x * x).sum();
    Ok(lhs == r_big(p).pow(n as u32) * factorial(n))
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `p_n * r^n n! (r^2 (n+1) + r)(n+1) >= alpha(0 -> n+1)^2`, in integers.
/// Below the top rank the chain count comes from the poset itself; at
/// the top rank the closed form is used.
pub fn check_finite_lower_bound(p: &RankedPoset, n: usize) -> Result<bool> {
    need_rank(p, n)?;
    let chains = if n < p.top_rank() {
        walk_stats(p, n)?.alpha_0n1
    } else {
        chain_count_closed(p.r(), n + 1)
    };
    let r = u64::from(p.r());
    let n1 = (n + 1) as u64;
    let lhs = BigUint::from(p.level_size(n))
        * r_big(p).pow(n as u32)
        * factorial(n)
        * BigUint::from(r * r * n1 + r)
        * BigUint::from(n1);
    Ok(lhs >= &chains * &chains)
}

/// Names accepted by [`run_check`].
pub const CHECKS: [&str; 6] = ["eq3", "lemma31", "lemma32", "egf", "esq", "bound"];

pub fn run_check(p: &RankedPoset, n: usize, name: &str) -> Result<bool> {
    match name {
        "eq3" => check_eq3(p, n),
        "lemma31" => check_lemma31(p, n),
        "lemma32" => check_lemma32(p, n),
        "egf" => check_chain_universality(p, n),
        "esq" => check_sum_e_squared(p, n),
        "bound" => check_finite_lower_bound(p, n),
        _ => Err(Error::InvalidArgument(format!("unknown check `{name}`"))),
    }
}

/// Checks that make sense at rank `n` of `p`: the up-walk identities need
/// rank `n + 1`.
pub fn applicable_checks(p: &RankedPoset, n: usize) -> Vec<&'static str> {
    if n < p.top_rank() {
        CHECKS.to_vec()
    } else if n == p.top_rank() {
        vec!["egf", "esq", "bound"]
    } else {
        Vec::new()
    }
}

impl WalkStats {
    pub fn is_consistent(&self) -> bool {
        self.alpha_up <= self.alpha_up_down
            && self.kappa4 >= self.sum_c_sq
            && !self.alpha_0n.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{fibonacci_poset, young_lattice, young_power};

    #[test]
    fn young_rank_one_walks() {
        let s = walk_stats(&young_lattice(3), 1).unwrap();
        assert_eq!(s.alpha_up, 2u32.into());
        assert_eq!(s.alpha_up_down, 2u32.into());
        assert_eq!(s.kappa4, 4u32.into());
        assert_eq!(s.sum_c_sq, 4u32.into());
        assert!(s.is_consistent());
        let s0 = walk_stats(&young_lattice(1), 0).unwrap();
        assert_eq!(
            (s0.kappa4, s0.alpha_up_down, s0.alpha_up, s0.sum_c_sq),
            (1u32.into(), 1u32.into(), 1u32.into(), 1u32.into())
        );
        assert_eq!(s0.alpha_0n, BigUint::one());
        assert_eq!(s0.sum_e_sq, BigUint::one());
    }

    #[test]
    fn chain_counts_of_young() {
        let e = chain_counts(&young_lattice(3), 3).unwrap();
        let mut last: Vec<u32> = e[3].iter().map(|x| u32::try_from(x).unwrap()).collect();
        last.sort_unstable();
        assert_eq!(last, vec![1, 1, 2]);
        assert!(check_sum_e_squared(&young_lattice(3), 3).unwrap());
    }

    #[test]
    fn involution_numbers() {
        let a: Vec<u64> = chain_count_sequence(1, 6)
            .iter()
            .map(|x| u64::try_from(x).unwrap())
            .collect();
        assert_eq!(a, vec![1, 1, 2, 4, 10, 26, 76]);
        assert_eq!(chain_count_closed(2, 2), 6u32.into());
        assert_eq!(chain_count_closed(5, 0), BigUint::one());
        assert_eq!(chain_count_closed(1, 11), 35696u32.into());
    }

    #[test]
    fn identities_on_standard_posets() {
        for p in [
            young_lattice(8),
            fibonacci_poset(1, 8),
            fibonacci_poset(2, 6),
            young_power(2, 6),
        ] {
            for n in 0..=p.top_rank() {
                for name in applicable_checks(&p, n) {
                    assert!(run_check(&p, n, name).unwrap(), "{name} at n={n}");
                }
            }
        }
    }

    #[test]
    fn eq3_example_on_fibonacci() {
        let s = walk_stats(&fibonacci_poset(2, 3), 2).unwrap();
        assert_eq!(s.alpha_up, 16u32.into());
    }

    #[test]
    fn out_of_range() {
        assert!(walk_stats(&young_lattice(3), 3).is_err());
        assert!(check_sum_e_squared(&young_lattice(3), 4).is_err());
        assert!(run_check(&young_lattice(3), 1, "nope").is_err());
    }
}
