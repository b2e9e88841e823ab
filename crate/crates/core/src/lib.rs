//! Exact solver for the quadratic capacitated p-location problem with single
//! assignments.
//!
//! A node set `N` is given. Every node is assigned to exactly one open
//! facility, at most `p` facilities open, capacities bound the demand served
//! by each facility, and the objective adds setup, linear assignment and
//! pairwise quadratic interaction costs. Single-allocation hub location
//! problems are the best known special case.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the
//! algorithmic core:
//!
//! * [`instance`]: data model, objective evaluation, hub-location cost
//!   construction and a seeded instance generator.
//! * [`lp`]: bounded-variable revised simplex with warm starts.
//! * [`transport`]: network simplex for transportation problems and the
//!   Pareto-optimal Benders separation built on it.
//! * [`rlt`]: linearized relaxations of increasing strength used for bounds.
//! * [`benders`]: the master problem over `(z, eta)` and the root cutting
//!   plane loop.
//! * [`matheur`]: constructive MILP heuristic, variable neighborhood descent
//!   and assignment intensification.
//! * [`reduce`]: reduced-cost elimination and partial enumeration.
//! * [`bnc`]: branch-and-cut over the Benders master and a small generic MILP
//!   engine.
//! * [`oracle`]: brute force ground truth for tiny instances.
//!
//! File formats and the command line live in the companion `qploc` crate.

#![no_std]
#![allow(clippy::needless_range_loop, clippy::too_many_arguments)]

extern crate alloc;

pub mod benders;
pub mod bnc;
pub mod clock;
mod error;
pub mod instance;
pub mod lp;
pub mod matheur;
pub mod oracle;
pub mod params;
pub mod reduce;
pub mod rlt;
pub mod transport;

pub use error::{Error, Result, Violation};
pub use instance::{CostBreakdown, Instance, QuadCost, Solution, Variant, VariantKind};
pub use params::SolverParams;
