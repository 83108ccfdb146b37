//! Energy-conserving Hamiltonian Boundary Value Methods for Hamiltonian PDEs.
//!
//! The crate is organised bottom-up:
//!
//! - [`quadrature`]: shifted orthonormal Legendre polynomials, Gauss-Legendre
//!   rules on `[0, 1]` and the HBVM(k,s) tableau matrices.
//! - [`solver`]: the blended iteration with constant structured preconditioners
//!   and a dense simplified-Newton reference solver.
//! - [`integrator`]: one-step HBVM advancement for first-order and special
//!   second-order systems, trajectory driver and spectral order selection.
//! - [`fourier`]: truncated periodic Fourier basis, trapezoidal transforms and
//!   spectral-resolution diagnostics.
//! - [`models`]: semi-discrete sine-Gordon, nonlinear Schrödinger and KdV
//!   systems together with their reference solutions.
//! - [`harness`]: experiment configuration, table reproduction and CSV output.

pub mod error;
pub mod fourier;
pub mod harness;
pub mod integrator;
pub mod models;
pub mod quadrature;
pub mod solver;
pub mod system;

pub use error::{Error, Result};
pub use integrator::{hbvm_step, integrate, select_spectral_order, StepResult, Stepper};
pub use quadrature::{build_tableau, gauss_rule, legendre_eval, legendre_integral, HbvmTableau, QuadratureRule};
pub use solver::{BlendedConfig, SigmaOperator, SolverConfig, SolverKind};
pub use system::{Form, LinearPart, SemiDiscreteSystem};
