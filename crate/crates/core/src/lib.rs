//! Exact few-qubit simulation of one-way (measurement-based) quantum
//! computing with active feed-forward.
//!
//! The crate is `no_std` and only needs `alloc`. It covers dense pure and
//! mixed states, cluster/graph-state construction, measurement patterns with
//! Pauli-frame feed-forward, white-noise degradation, maximum-likelihood
//! state tomography, two-qubit entanglement metrics and an analytic model of
//! the feed-forward timing budget.
//!
//! Qubit indices are zero-based: index `0` is the leftmost tensor factor
//! (qubit "1" in the usual physics notation) and is the most significant bit
//! of a basis-state index.

#![no_std]
// Range checks are written as !(x > lo) so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod cluster;
pub mod density;
pub mod error;
pub mod gates;
pub mod linalg;
pub mod mbqc;
pub mod measure;
pub mod metrics;
pub mod noise;
pub mod pauli;
pub mod rng;
pub mod state;
pub mod timing;
pub mod tomography;

pub use num_complex::Complex64 as C64;

pub use cluster::GraphSpec;
pub use density::DensityMatrix;
pub use error::{Error, Result};
pub use gates::Operator;
pub use measure::{MeasurementBasis, Outcome};
pub use pauli::{PauliFrame, PauliString};
pub use state::StateVector;

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 12;
