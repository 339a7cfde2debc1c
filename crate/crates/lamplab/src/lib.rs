//! Numerical laboratory for the Thomson lamp and its quantum-recursion
//! counterparts: divergent-series summation, supertask traces with a
//! finite-resolution detector, 2x2 unitary fixed-point classification, the
//! diagonal halting contradiction on finite program tables, and beam-splitter
//! synthesis of diagonal unitaries.
//!
//! Every capability has a runnable demo under `examples/` and a `lamp`
//! subcommand; see the README for the tour.

pub mod cli;
pub mod diagonal;
pub mod optics;
pub mod qubit;
pub mod summability;
pub mod supertask;

pub use qubit::{DiagPhases, EigenSystem, QubitState, U2Params, Unitary2};
pub use summability::{AbelEvaluation, SeriesCoefficients};
pub use supertask::{LampState, LampTrace};
