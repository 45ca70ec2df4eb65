//! Proportionality, envy-freeness, equitability and Pareto dominance.
//!
//! Each predicate comes in two forms: over a full [`Partition`] with one
//! [`Valuation`] per player, and over a bare [`Distribution`] read under the
//! homogeneous valuation (value = size, `V(C)` = total of the shares).

use super::fraction::Fraction;
use super::geometry::{Partition, PlayerId};
use super::inequality::Distribution;
use super::valuation::Valuation;
use crate::error::{Error, Result};

/// `values[i][j] = V_i(X_j)`.
fn value_matrix(partition: &Partition, valuations: &[Valuation]) -> Result<Vec<Vec<Fraction>>> {
    if partition.len() != valuations.len() {
        return Err(Error::Argument(format!(
            "{} valuations for {} players",
            valuations.len(),
            partition.len()
        )));
    }
    valuations
        .iter()
        .map(|v| partition.iter().map(|(_, piece)| v.measure(piece)).collect())
        .collect()
}

pub fn is_proportional(partition: &Partition, valuations: &[Valuation]) -> Result<bool> {
    let values = value_matrix(partition, valuations)?;
    let n = Fraction::from(values.len());
    Ok(values
        .iter()
        .zip(valuations)
        .enumerate()
        .all(|(i, (row, v))| row[i] >= v.total() / &n))
}

pub fn is_envy_free(partition: &Partition, valuations: &[Valuation]) -> Result<bool> {
    let values = value_matrix(partition, valuations)?;
    Ok(values
        .iter()
        .enumerate()
        .all(|(i, row)| row.iter().all(|other| row[i] >= *other)))
}

pub fn is_equitable(partition: &Partition, valuations: &[Valuation]) -> Result<bool> {
    let values = value_matrix(partition, valuations)?;
    let own: Vec<&Fraction> = values.iter().enumerate().map(|(i, row)| &row[i]).collect();
    Ok(own.windows(2).all(|w| w[0] == w[1]))
}

/// Whether `y` Pareto-dominates `x`: nobody is worse off and somebody is better off.
pub fn pareto_dominates(y: &Partition, x: &Partition, valuations: &[Valuation]) -> Result<bool> {
    if y.len() != x.len() || y.len() != valuations.len() {
        return Err(Error::Argument("partitions and valuations differ in size".into()));
    }
    let mut strictly_better = false;
    for (i, v) in valuations.iter().enumerate() {
        let id = PlayerId(i + 1);
        let vy = v.measure(y.piece(id).expect("validated partition"))?;
        let vx = v.measure(x.piece(id).expect("validated partition"))?;
        if vy < vx {
            return Ok(false);
        }
        strictly_better |= vy > vx;
    }
    Ok(strictly_better)
}

impl Distribution {
    pub fn is_proportional(&self) -> bool {
        let fair = self.total() / Fraction::from(self.len());
        self.shares().iter().all(|s| *s >= fair)
    }

    pub fn is_envy_free(&self) -> bool {
        let best = self.shares().iter().max().expect("non-empty");
        self.shares().iter().all(|s| s == best)
    }

    pub fn is_equitable(&self) -> bool {
        self.shares().windows(2).all(|w| w[0] == w[1])
    }

    pub fn pareto_dominates(&self, x: &Distribution) -> Result<bool> {
        if self.len() != x.len() {
            return Err(Error::Argument(format!(
                "distributions of length {} and {}",
                self.len(),
                x.len()
            )));
        }
        let pairs = || self.shares().iter().zip(x.shares());
        Ok(pairs().all(|(a, b)| a >= b) && pairs().any(|(a, b)| a > b))
    }
}
