//! One-bit sigma-delta quantization of bandlimited functions on the unit
//! circle.
//!
//! The crate covers the full pipeline: trigonometric-polynomial signals and
//! uniform sampling ([`bandlimited`]), the m-th-order greedy one-bit
//! quantizer with minimal-support feedback filters ([`quantizer`]),
//! Dirichlet-kernel reconstruction and error measurement
//! ([`reconstruction`]), finite-difference machinery and theoretical error
//! bounds ([`analysis`]), and the constant-shift update that zeroes the
//! wrap-around boundary remainder ([`update`]).

pub mod analysis;
pub mod bandlimited;
mod error;
pub mod quantizer;
pub mod reconstruction;
pub mod update;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;

pub use bandlimited::{DirichletKernel, Harmonic, SampleGrid, TorusSignal};
pub use quantizer::{QuantizationRun, SigmaDeltaScheme};
pub use reconstruction::ErrorReport;
pub use update::UpdatePlan;
