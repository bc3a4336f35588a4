//! Coded-caching content delivery over partially connected helper networks.
//!
//! The pipeline is split the same way a single simulation trial runs:
//!
//! * [`topology`] places single-antenna helpers on a hexagonal grid, drops
//!   Poisson users in a disk and derives the radius-limited channel.
//! * [`placement`] implements shared-cache placement: cache profiles,
//!   subfile indices and cache-membership queries.
//! * [`partition`] splits each profile's users into the fewest sets that
//!   one zero-forcing transmission can serve (greedy scan, least-cost
//!   branch and bound, and two independent optimality oracles).
//! * [`delivery`] schedules rounds and multicast groups, builds the
//!   zero-padded precoded signals, checks decodability and computes the
//!   delivery time and sum-DoF.
//! * [`sim`] drives seeded Monte Carlo sweeps and writes CSV/JSON results.

pub mod delivery;
pub mod error;
pub mod partition;
pub mod placement;
pub mod rng;
pub mod sim;
pub mod topology;

pub use error::{Error, Result};
