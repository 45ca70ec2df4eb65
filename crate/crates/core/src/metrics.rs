//! Closed forms and game-level statistics: the vanilla distribution, exact
//! and asymptotic Gini, Price of Anarchy and Robertson–Webb totals.

use serde::{Deserialize, Serialize};

use crate::cake::{fair_partition, gini_rank, welfare, Cake, Distribution, Fraction};
use crate::engine::{self, equilibrium_profile, GameConfig, Rule};
use crate::error::{Error, Result};

fn at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        Err(Error::Argument(format!("need n >= 2, got {n}")))
    } else {
        Ok(())
    }
}

/// `(2^-1, 2^-2, …, 2^-(n-1), 2^-(n-1))`.
pub fn vanilla_distribution(n: usize) -> Result<Distribution> {
    at_least_two(n)?;
    let mut shares: Vec<Fraction> = (1..n).map(|m| Fraction::pow2(-(m as i32))).collect();
    shares.push(Fraction::pow2(-(n as i32 - 1)));
    Distribution::new(shares)
}

pub fn gini_vanilla_exact(n: usize) -> Result<Fraction> {
    Ok(gini_rank(&vanilla_distribution(n)?))
}

/// `2^(1-n) + 1 - 3/n`.
pub fn gini_asymptotic(n: usize) -> Result<Fraction> {
    at_least_two(n)?;
    Ok(Fraction::pow2(1 - n as i32) + gini_limit(n)?)
}

/// `1 - 3/n`.
pub fn gini_limit(n: usize) -> Result<Fraction> {
    at_least_two(n)?;
    Ok(Fraction::one() - Fraction::new(3, n as i64))
}

/// Rank-formula Gini of the shares `2^-i`, `i = 1..=n`, with the rank of
/// share `i` taken as `n - i` and the total taken as the whole cake:
/// `2 Σ (n-i) 2^-i / n - (n+1)/n`.
pub fn gini_idealized_bruteforce(n: usize) -> Result<Fraction> {
    at_least_two(n)?;
    let n_f = Fraction::from(n);
    let sum: Fraction = (1..=n)
        .map(|i| Fraction::from(n - i) * Fraction::pow2(-(i as i32)))
        .sum();
    Ok(Fraction::integer(2) * sum / &n_f - (&n_f + Fraction::one()) / &n_f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoAReport {
    pub n: usize,
    pub rule: Rule,
    pub optimal_welfare: Fraction,
    pub equilibrium_welfare: Fraction,
    pub poa: Fraction,
    /// `n/3` for vanilla composition, `1` under the Biggest Player rule.
    pub asymptote: Fraction,
}

/// Best welfare over contiguous partitions (the fair split) divided by the
/// welfare of the rule's equilibrium play-out.
pub fn poa(n: usize, rule: Rule) -> Result<PoAReport> {
    at_least_two(n)?;
    let cake = Cake::unit();
    let optimal_welfare = welfare(&Distribution::from_partition(&fair_partition(&cake, n)?)?);
    let config = GameConfig::new(n, cake, rule)?;
    let shares = engine::payoffs(&config, &equilibrium_profile(&config))?;
    let equilibrium_welfare = welfare(&Distribution::new(shares)?);
    let poa = &optimal_welfare / &equilibrium_welfare;
    let asymptote = match rule {
        Rule::Vanilla => Fraction::new(n as i64, 3),
        Rule::BiggestPlayer => Fraction::one(),
    };
    Ok(PoAReport { n, rule, optimal_welfare, equilibrium_welfare, poa, asymptote })
}

/// Cut plus evaluation queries of a full `n`-player play-out: `4 + 3(n-2)`.
pub fn rw_complexity(n: usize) -> Result<u64> {
    at_least_two(n)?;
    Ok(4 + 3 * (n as u64 - 2))
}
