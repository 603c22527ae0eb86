//! Routing and flow algorithms for networks whose traffic must traverse an
//! ordered chain of network functions before reaching its destination.
//!
//! The crate provides:
//!
//! * [`graph`] — the shared network / service-chain / walk data model,
//!   validation, random instance generation, and the JSON graph schema.
//! * [`expand`] — chain-constrained shortest paths via a level-expanded
//!   graph with pruning, plus the layered-graph baseline construction.
//! * [`maxflow`] — exact single-commodity max flow (shortest augmenting
//!   path) on directed and undirected graphs, min cut, and flow
//!   decomposition.
//! * [`muststop`] — max flow forced through a single must-stop node on an
//!   undirected graph, with an explicit flow realization.
//! * [`lp`] — a small exact rational simplex solver (two-phase, Bland's
//!   rule) used by the LP-based modules.
//! * [`sfcmf`] — chain-constrained maximum flow as a per-segment
//!   multicommodity LP.
//! * [`placement`] — minimum-cardinality virtualization placement that
//!   preserves the unconstrained max flow (branch-and-bound over an LP
//!   feasibility oracle), plus a greedy upper bound and a set-cover
//!   instance generator.
//! * [`umw`] — a discrete-time simulator of max-weight routing with
//!   chain-constrained per-packet shortest paths.
//! * [`verify`] — independent constraint re-checkers for flows, two-layer
//!   flows, and walk admissibility.
//!
//! All costs, capacities, and flow amounts are exact rationals, so results
//! are bit-reproducible and tests can assert exact equality.

pub mod expand;
pub mod graph;
#[cfg(test)]
pub(crate) mod testutil;
pub mod json;
pub mod lp;
pub mod maxflow;
pub mod muststop;
pub mod placement;
pub mod rational;
pub mod sfcmf;
pub mod umw;
pub mod verify;

pub use graph::{Network, NodeId, ServiceChain, Walk};
pub use rational::Rational;
