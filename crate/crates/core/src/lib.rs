//! Graph-state preparation with few two-qubit operations.
//!
//! Graphs are built from the empty graph by local complementations (free),
//! vertex deletions (free) and three kinds of edge complementation that each
//! cost one CZ gate. The crate synthesizes such construction traces, bounds
//! their cost, and checks them with a stabilizer simulator.

#![allow(clippy::needless_range_loop)]

pub mod bounds;
pub mod codes;
pub mod error;
pub mod f2linalg;
pub mod gen;
pub mod graph;
pub mod oracle;
pub mod rankwidth;
pub mod synthesis;
pub mod tableau;
pub mod words;

pub use error::{Error, Result};
pub use f2linalg::BitMatrix;
pub use graph::{replay, Graph, GraphOp, OpTrace};

/// Exact rational scalar used for the closed-form bounds.
pub type Ratio = num_rational::Rational64;
