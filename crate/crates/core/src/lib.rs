//! Phase-space numerics for Schrödinger dynamics.
//!
//! The crate provides uniform sampling grids with a unitary centered Fourier
//! transform (2π convention), discrete Wigner and τ-Wigner distributions,
//! symplectic matrices and quadratic-Hamiltonian flows, Kohn-Nirenberg and
//! Weyl quantization, type-I/type-II Fourier integral operators with
//! quadratic phases, Wigner kernels of operators on the 4d phase-space
//! lattice, and split-step propagation of quadratic Hamiltonians with
//! bounded perturbations, including caustic-time diagnostics.

pub mod error;
pub mod fio;
pub mod grid;
pub mod propagate;
pub mod quantize;
pub mod symplectic;
pub mod verify;
pub mod wigner;
pub mod wigner_kernel;

pub use error::{Error, Result};
pub use fio::{QuadraticPhase, TypeIFio};
pub use grid::{GridSpec, SampledState};
pub use quantize::{OperatorMatrix, Symbol};
pub use symplectic::{BlockDecomposition, HamiltonianGenerator, SymplecticMatrix};
pub use wigner::PhaseSpaceFunction;
pub use wigner_kernel::WignerKernel;
