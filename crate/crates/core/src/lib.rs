//! Exact dynamics of a laser-driven three-level lambda system and its
//! effective two-level descriptions.
//!
//! * [`system`] holds the rotating-frame parameters, their dimensionless
//!   reduction and the state types.
//! * [`exact`] solves the three-level problem through its spectrum.
//! * [`elim`] eliminates the excited state (rough Ansatz, shifted picture,
//!   relevant component) and propagates the resulting 2x2 Hamiltonians.
//! * [`resolvent`] follows the projected Green's function: poles, residues,
//!   pole approximation and `P H0 P + P R(E0) P`.
//! * [`analysis`] measures discrepancies and convergence orders.
//!
//! `hbar = 1` throughout.

pub mod analysis;
pub mod elim;
pub mod error;
pub mod exact;
pub mod resolvent;
pub mod system;
pub mod trajectory;

pub use num_complex::Complex64 as C64;

pub use elim::{EffectiveHamiltonian2, Provenance};
pub use error::{Error, Result};
pub use exact::{Hamiltonian3, ModeDecomposition};
pub use system::{reduce, LambdaParams, ReducedParams, State2, State3};
pub use trajectory::{Trajectory, Trajectory2, Trajectory3};
