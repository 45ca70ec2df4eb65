//! Compositional cake-cutting games with exact rational arithmetic.
//!
//! Vanilla iterated "I cut, you choose" and the Biggest Player rule, played
//! either by a direct engine or through composed lenses, together with a
//! grid-based Nash certifier and the usual inequality statistics.

pub mod cake;
pub mod cli;
pub mod engine;
pub mod equilibrium;
pub mod metrics;
pub mod open_game;

mod error;

pub use error::{Error, Result};
