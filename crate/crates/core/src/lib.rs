//! Vacuum-to-vacuum amplitudes `<0|U|0>` of Gaussian unitaries generated by
//! quadratic bosonic Hamiltonians, including the global phase.
//!
//! Quadratures are ordered `r = (x_1..x_M, p_1..p_M)` and `U = exp(-i r^T H r t / 2hbar)`.
//! Everything is generic over the real scalar; the `*64` / `*32` aliases
//! below fix it.

pub mod amplitude;
pub mod decompositions;
pub mod error;
pub mod expm;
pub mod fock;
pub mod linear_terms;
pub mod quadrature;
pub mod scalar;
pub mod symplectic;
pub mod time_dependent;

pub use amplitude::{vacuum_amplitude, AmplitudeOptions, AmplitudeResult, Diagnostics, Method};
pub use error::{Error, Result};
pub use linear_terms::{reduce_linear, LinearHamiltonian, ReducedForm};
pub use scalar::Real;
pub use symplectic::{heisenberg_symplectic, vacuum_probability, QuadHamiltonian, SymplecticMatrix};
pub use time_dependent::{
    amplitude_time_dependent, FnSchedule, HamiltonianSchedule, TabulatedSchedule, TrotterConfig,
};

pub type QuadHamiltonian64 = QuadHamiltonian<f64>;
pub type SymplecticMatrix64 = SymplecticMatrix<f64>;
pub type AmplitudeResult64 = AmplitudeResult<f64>;
pub type AmplitudeOptions64 = AmplitudeOptions<f64>;
pub type LinearHamiltonian64 = LinearHamiltonian<f64>;
pub type ReducedForm64 = ReducedForm<f64>;
pub type TabulatedSchedule64 = TabulatedSchedule<f64>;

pub type QuadHamiltonian32 = QuadHamiltonian<f32>;
pub type SymplecticMatrix32 = SymplecticMatrix<f32>;
pub type AmplitudeResult32 = AmplitudeResult<f32>;
pub type AmplitudeOptions32 = AmplitudeOptions<f32>;
