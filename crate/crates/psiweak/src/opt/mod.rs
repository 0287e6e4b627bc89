//! Self-contained exact solvers: dense simplex LP and max-flow.
//!
//! Both are sized for the small instances produced by the metric engine
//! (support sizes up to a few hundred atoms); correctness and determinism
//! are preferred over speed.

mod maxflow;
mod simplex;

pub use maxflow::{max_flow, FlowNetwork, FlowResult};
pub use simplex::{solve_lp, LinearConstraint, LinearProgram, LpSolution, LpStatus};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("malformed flow network: {0}")]
    MalformedNetwork(String),
    #[error("numeric failure in solver: {0}")]
    Numeric(String),
}
