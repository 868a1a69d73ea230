//! Verification toolkit for the spin^c Dirac operator on Kähler-Einstein
//! manifolds: Fock-model spinor algebra, Kählerian twistor decomposition,
//! Lefschetz form algebra, exact eigenvalue bounds, and explicit spectral
//! models on `ℂP¹` and the flat torus.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod fock;
pub mod forms;
pub mod linalg;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod spectral;
pub mod twistor;

pub use error::{Error, Result};
