//! # povm-tradeoff
//!
//! How accurately can two quantum observables be measured at once?
//!
//! This crate models finite-outcome observables (POVMs) on finite-dimensional
//! Hilbert spaces and quantifies approximate joint measurements of a pair
//! `A`, `B`:
//!
//! - [`distance`]: worst-case distances between observables with operator-norm
//!   closed forms and witness states.
//! - [`smearing`]: coarse-graining along outcome functions and error operators.
//! - [`bounds`]: tradeoff inequalities linking the two reconstruction errors to
//!   the noncommutativity `max ‖[A_a, B_b]‖`, including a necessary condition
//!   for exact joint measurability.
//! - [`feasibility`]: a Dykstra alternating-projection search for joint
//!   observables and for the achievable error frontier.
//!
//! All matrices are small dense complex matrices ([`linalg::CMatrix`]); the
//! Hermitian eigensolver is a cyclic Jacobi iteration.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod distance;
pub mod error;
pub mod feasibility;
pub mod linalg;
pub mod povm;
pub mod selftest;
pub mod smearing;
mod subsets;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use povm::{Povm, State};
pub use smearing::OutcomeMap;
pub use subsets::{mask_indices, MAX_SUBSET_OUTCOMES};
