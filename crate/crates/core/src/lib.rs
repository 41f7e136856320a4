//! Discrete-time coined quantum walks with absorbing vertices.
//!
//! A walk is built from a [`graph::LabeledGraph`] whose edges carry direction labels, a
//! unitary [`coin::CoinOperator`] acting on those labels, and a set of absorbing vertices.
//! Each step applies the walk operator W = S(C ⊗ I) and then measures whether the walker
//! sits on an absorber. [`walk::run_first_passage`] returns the first-arrival probabilities
//! p(t), from which [`walk::summarize`] derives
//!
//! * the absorbing probability Σ p(t),
//! * the nominal absorbing time Σ t·p(t),
//! * the real absorbing time, the nominal time divided by the probability.
//!
//! Specialized drivers cover the Hadamard-type walk on the half-line ([`line`]), the Grover
//! walk on the hypercube and its 2n-dimensional reduction ([`hypercube`]), and the
//! classical random walk on the hypercube ([`classical`]). [`experiment`] runs the
//! parameter sweeps behind the `qwalk` binary and writes them as CSV.

// `!(x < bound)` is used deliberately so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classical;
pub mod coin;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod hypercube;
pub mod line;
pub mod numeric;
pub mod state;
pub mod walk;

pub use coin::CoinOperator;
pub use error::{Result, WalkError};
pub use graph::{CycleGraph, HypercubeGraph, LabeledGraph, TableGraph};
pub use state::WalkState;
pub use walk::{
    build_walk_operator, run_first_passage, summarize, AbsorptionProcess, AbsorptionSummary, FirstPassageSeries,
    StopReason, StoppingRule, WalkOperator,
};
