//! Simulator for algorithmic networks playing the Busy Beaver Imitation Game.
//!
//! A population of randomly sampled self-delimiting programs is bound to the
//! vertices of a time-varying graph. Every node computes once, then the
//! network diffuses the largest partial output by imitation of the fittest
//! neighbour. The crate measures how far and how fast that diffusion goes and
//! how much algorithmic complexity the networked population gains over the
//! same population run in isolation.
//!
//! * [`temporal_graph`]: composite-edge time-varying graphs, temporal BFS,
//!   cover time, temporal diffusion diameter and graph generators.
//! * [`machine`]: the prefix-free program language, its step-bounded
//!   interpreter, program sampling and complexity estimators.
//! * [`runner`]: populations, bindings and the synchronous imitation game.
//! * [`metrics`]: diffusion densities, halting fractions, the lower bound and
//!   time centrality.

pub mod extended;
pub mod machine;
pub mod metrics;
pub mod runner;
pub mod seed;
pub mod temporal_graph;

pub use extended::Extended;
pub use num_bigint::BigUint;
pub use num_rational::Ratio;

/// Exact fractions, stored as count over total.
pub type Fraction = Ratio<u64>;

/// Arbitrary-precision natural numbers, the values programs compute.
pub type Natural = BigUint;
