//! Simulation and training of quantum optical neural networks whose trainable
//! parameters are the strengths of single-mode Kerr-type nonlinearities in a
//! mesh of nonlinear Mach-Zehnder interferometers, alongside the baseline
//! architecture trained through programmable linear optics.
//!
//! The Fock-space layers ([`fock`], [`optics`], [`network`], [`tasks`]) are
//! generic over the real scalar type; the aliases below fix it to `f64`,
//! which is what the optimizer and the experiment runner use.

pub mod error;
pub mod fock;
pub mod network;
pub mod optics;
pub mod optimizer;
pub mod runner;
pub mod scalar;
pub mod tasks;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type State = fock::StateVector<f64>;
pub type State32 = fock::StateVector<f32>;
pub type Transfer = optics::TransferMatrix<f64>;
pub type Mesh = network::NmziMesh<f64>;
pub type Mesh32 = network::NmziMesh<f32>;
