//! Lower bounds on the optimal success probability of minimum-error quantum
//! state discrimination, and a certified numerical optimum to check them against.
//!
//! Given an ensemble `{p_x, ρ_x}` the crate computes
//!
//! - the entropic bound `2^{−S(X|Q)} = 2^{−H(p) + S(Σ p_x ρ_x) − Σ p_x S(ρ_x)}`,
//!   and its pure-state form `2^{S(ρ)}/N` that needs only the average state;
//! - the square-root-measurement bound and the pairwise-overlap bound;
//! - the Helstrom value for two states;
//! - a primal/dual bracket on the true optimum, and from it the conditional
//!   min-entropy `S_min(X|Q) = −log₂ P*`.
//!
//! Sweeps over the built-in ensemble families run data-parallel with rayon
//! when the `parallel` feature is on (the default) and sequentially otherwise.

pub mod bounds;
pub mod ensemble;
pub mod entropy;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod parallel;
pub mod report;
pub mod sampling;
pub mod sweep;

pub use error::{Error, Result};
