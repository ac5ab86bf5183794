//! Indirect (rank-encoded) QAOA for the travelling salesman problem.
//!
//! A tour over `n` customers is never written into the register directly.
//! Instead the register holds an integer rank in `[0, n!)`, which decodes
//! through the factorial number system into a permutation, whose closed-tour
//! cost is evaluated classically after measurement. The circuit therefore
//! needs only `q = ceil(log2(n!))` qubits and `q * (2p + 1)` single-qubit
//! gates for `p` layers.
//!
//! The crate is organised bottom-up:
//!
//! - [`permrank`]: rank / factoradic digits / permutation bijections.
//! - [`tsp`]: instances, tour cost, exhaustive ground truth.
//! - [`qsim`]: statevector simulation of the rank ansatz and shot sampling.
//! - [`criteria`]: shot histograms to cost distributions, and the scalar
//!   criteria (mean, percentile, mean below percentile) minimised over angles.
//! - [`optimizer`]: continuous GRASPxELS over the angle vectors.
//! - [`instances`]: the two bundled benchmark instances.

pub mod criteria;
pub mod error;
pub mod instances;
pub mod optimizer;
pub mod permrank;
pub mod qsim;
pub mod seed;
pub mod tsp;

pub use error::{Error, Result};
