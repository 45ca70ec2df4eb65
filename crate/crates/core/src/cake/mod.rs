//! Exact cake geometry, valuations, fairness predicates and inequality statistics.

mod fairness;
mod fraction;
mod geometry;
mod inequality;
mod valuation;

pub use fairness::{is_envy_free, is_equitable, is_proportional, pareto_dominates};
pub use fraction::{Fraction, ParseFractionError};
pub use geometry::{Cake, Partition, Piece, PlayerId};
pub use inequality::{fair_partition, gini_pairwise, gini_rank, welfare, Distribution};
pub use valuation::{measure, Valuation};
