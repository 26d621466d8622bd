//! Ancilla-free PREPARE circuit synthesis.
//!
//! Given LCU weights `c_l`, the crate builds an m-qubit circuit whose output
//! state has amplitudes `sqrt(c_l / lambda)`, using variational circuit
//! encoding (AQCE) with real two-qubit gates, lowers every gate to Clifford
//! gates plus six rotations, and approximates each rotation by a Clifford+T
//! word so that the final max-coefficient error stays within budget.
//!
//! Two comparison points are included: an exact multiplexed-Ry construction
//! lowered the same way, and the closed-form cost of the QROM-based scheme.

pub mod aqce;
pub mod baselines;
pub mod cli;
pub mod cliffordt;
pub mod error;
pub mod gatedecomp;
pub mod instances;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod statesim;
pub mod terms;

pub use error::{Error, Result};
