//! Fourier–Galerkin semi-discretizations of three Hamiltonian PDEs, their
//! reference solutions and the special functions those need.

pub mod elliptic;
mod kdv;
mod nls;
pub mod reference;
mod wave;

pub use kdv::KdvModel;
pub use nls::NlsModel;
pub use wave::WaveModel;

use crate::error::{Error, Result};

/// A scalar potential `f` with derivative `f'`, applied pointwise on the grid.
#[derive(Debug, Clone, Copy)]
pub struct ScalarNonlinearity {
    pub f: fn(f64) -> f64,
    pub f_prime: fn(f64) -> f64,
}

impl ScalarNonlinearity {
    /// `f(u) = 1 - cos u`, `f'(u) = sin u`.
    pub fn sine_gordon() -> Self {
        Self {
            f: |u| 1.0 - u.cos(),
            f_prime: f64::sin,
        }
    }

    /// `f(x) = x²`, `f'(x) = 2x` (focusing Schrödinger coupling).
    pub fn square() -> Self {
        Self {
            f: |x| x * x,
            f_prime: |x| 2.0 * x,
        }
    }

    pub fn zero() -> Self {
        Self {
            f: |_| 0.0,
            f_prime: |_| 0.0,
        }
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::InvalidArgument(format!(
            "non-finite nonlinearity value at grid point {i}"
        ))),
        None => Ok(()),
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
