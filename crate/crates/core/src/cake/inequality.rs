//! Share vectors and the inequality statistics computed on them.

use super::fraction::Fraction;
use super::geometry::{Cake, Partition};
use crate::error::{Error, Result};

/// Nonnegative shares, one per player, with positive total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    shares: Vec<Fraction>,
}

impl Distribution {
    pub fn new(shares: Vec<Fraction>) -> Result<Self> {
        if shares.is_empty() {
            return Err(Error::Argument("distribution needs at least one share".into()));
        }
        if let Some(s) = shares.iter().find(|s| s.is_negative()) {
            return Err(Error::Domain(format!("negative share {s}")));
        }
        if shares.iter().all(Fraction::is_zero) {
            return Err(Error::Degenerate("all shares are zero".into()));
        }
        Ok(Self { shares })
    }

    pub fn from_partition(partition: &Partition) -> Result<Self> {
        Self::new(partition.shares())
    }

    pub fn shares(&self) -> &[Fraction] {
        &self.shares
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    pub fn total(&self) -> Fraction {
        self.shares.iter().sum()
    }

    pub fn scaled(&self, factor: &Fraction) -> Result<Self> {
        Self::new(self.shares.iter().map(|s| s * factor).collect())
    }
}

/// Relative mean absolute difference: `ΣᵢΣⱼ|dᵢ − dⱼ| / (2n Σ d)`.
pub fn gini_pairwise(d: &Distribution) -> Fraction {
    let n = Fraction::from(d.len());
    let mut spread = Fraction::zero();
    for a in d.shares() {
        for b in d.shares() {
            spread += (a - b).abs();
        }
    }
    spread / (Fraction::integer(2) * n * d.total())
}

/// Rank form `2 Σ i·d₍ᵢ₎ / (n Σ d) − (n+1)/n` over shares sorted ascending.
pub fn gini_rank(d: &Distribution) -> Fraction {
    let mut sorted = d.shares().to_vec();
    sorted.sort();
    let n = Fraction::from(d.len());
    let weighted: Fraction = sorted
        .iter()
        .enumerate()
        .map(|(i, s)| Fraction::from(i + 1) * s)
        .sum();
    Fraction::integer(2) * weighted / (&n * d.total()) - (&n + Fraction::one()) / &n
}

/// `W = 1 − G`.
pub fn welfare(d: &Distribution) -> Fraction {
    Fraction::one() - gini_rank(d)
}

/// `n` equal contiguous pieces with cuts at `i·|C|/n`.
pub fn fair_partition(cake: &Cake, n: usize) -> Result<Partition> {
    if n == 0 {
        return Err(Error::Argument("fair partition needs n >= 1".into()));
    }
    let piece = cake.size() / Fraction::from(n);
    Partition::from_sizes(cake.clone(), &vec![piece; n])
}
