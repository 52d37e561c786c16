//! Numerical toolkit for boundary behaviour of bounded quasiregular maps of
//! the unit ball.
//!
//! The crate covers
//! - Euclidean cone geometry at boundary points and seeded samplers
//!   ([`geometry`]),
//! - the hyperbolic, distance-ratio and quasihyperbolic metrics with the
//!   closed-form diameter bounds for truncated cones ([`metrics`]),
//! - condenser capacity on lattices and capacity-density profiles
//!   ([`capacity`]),
//! - the constant ledger of the two-constants estimate ([`constants`]),
//! - decay envelopes and divergence-hypothesis scanners ([`envelopes`]),
//! - example quasiregular maps, dilatation estimates and boundary scans
//!   ([`maps`]).
//!
//! The `qrbound` binary exposes all of it on the command line ([`cli`]).

pub mod capacity;
pub mod cli;
pub mod constants;
pub mod envelopes;
pub mod error;
pub mod geometry;
pub mod maps;
pub mod metrics;
pub mod quadrature;

pub use error::{Error, Result};
pub use geometry::{Ball, ConeSpec, Point, Region, TruncatedConeSpec};
