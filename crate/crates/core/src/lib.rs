//! Three-region Aharonov-Bohm toolkit: gauge-field geometry, Dirac
//! constrained quantization of the reduced systems, the induced fractional
//! angular momentum, an independent finite-difference spectral verifier, and
//! a simulator of the flux-modulation information channel.
//!
//! The layout follows the physics:
//!
//! - [`field`]: circles I and II, stray disks, vector potentials, fluxes,
//!   gauge shifts.
//! - [`constraint`]: primary constraints of the reduced first-order
//!   Lagrangians, the constraint matrix, second-class vs degenerate
//!   classification, Dirac brackets.
//! - [`reduced`]: the quantized circle-II oscillator, its energy and
//!   angular-momentum ladders, and J_AB = q Phi_0 / (2 pi c).
//! - [`lab`]: link-phase finite-difference Schrodinger operator on a disk,
//!   eigensolver, gauge-invariance and free-region probes, convergence
//!   studies.
//! - [`channel`]: symbols encoded in flux levels, per-frame stray noise,
//!   receiver decoding from J_AB, and the blind-area negative result.
//! - [`acceptance`]: the end-to-end verification suite behind the `verify`
//!   CLI subcommand.
//!
//! All types are immutable after construction and all operations are pure
//! functions of their inputs; everything can be evaluated concurrently.

pub mod acceptance;
pub mod channel;
pub mod constraint;
pub mod error;
pub mod field;
pub mod geometry;
pub mod lab;
pub mod reduced;

pub use error::{CoreError, Result};
pub use field::{FieldConfiguration, GaugePrimitive, PhysicalConstants, ReceiverRegion};
pub use geometry::Vector2;
