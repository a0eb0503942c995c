//! Out-of-place quantum adders compiled to measurement-based quantum
//! computation (MBQC) on a 2D cluster-state lattice.
//!
//! The crate is organized as a small pipeline:
//!
//! * [`circuit`] — reversible gate-level IR ({X, CNOT, Toffoli}) with
//!   classical and statevector evaluation.
//! * [`adders`] — generators for the out-of-place carry-lookahead adder
//!   (QCLA) and the VBE ripple-carry adder, with round labels.
//! * [`cluster`] — cluster/graph states, stabilizer verification,
//!   measurement patterns and Pauli-frame byproduct tracking.
//! * [`compile`] — placement on a pitch-4 Manhattan lattice and round
//!   scheduling under the Clifford-1-step / Toffoli-2-step cost model.
//! * [`resources`] — closed-form depth/size models and the comparison
//!   table between the two adders.

pub mod adders;
pub mod circuit;
pub mod cluster;
pub mod compile;
pub mod error;
pub mod resources;
pub mod sim;

pub use error::{Error, Result};
