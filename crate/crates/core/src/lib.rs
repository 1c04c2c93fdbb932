//! Delay-guaranteed minimum cost embedding of service function chains.
//!
//! A request asks for a route from a source to a target that passes through
//! `l` distinct host nodes, each running one function of the chain, with the
//! summed edge and hosting delay within a bound and minimum summed cost.
//!
//! * [`greedy`] is the main solver: it builds a layered network
//!   ([`multilevel`]) whose arcs are delay-guaranteed shortest paths
//!   ([`dcsp`]) and walks it greedily.
//! * [`baselines`] holds the k-shortest-paths comparison solver, an
//!   exhaustive optimum for small networks and the LP model export.
//! * [`generator`] draws the random test networks and [`harness`] runs
//!   experiment sweeps.

pub mod baselines;
pub mod dcsp;
pub mod error;
pub mod generator;
pub mod greedy;
pub mod harness;
pub mod multilevel;
pub mod network;

pub use error::{Error, Result};
pub use network::{
    validate_embedding, Cost, Delay, Embedding, Network, NodeId, Request, SolutionDocument,
    ValidationReport,
};
