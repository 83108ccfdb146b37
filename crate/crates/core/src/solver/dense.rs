//! Dense simplified Newton iteration, used as a reference solver.

use nalgebra::{DMatrix, DVector};

use super::{norm2, BlendedConfig, StallMonitor};
use crate::error::{Error, Result};
use crate::quadrature::HbvmTableau;
use crate::system::Form;

/// Largest `s·dim` accepted by the dense solver.
pub const MAX_DENSE_SIZE: usize = 2048;

/// Simplified Newton iteration with a fixed dense matrix:
/// `[I - h X_s ⊗ J] Δγ = -F(γ)` for first-order problems and
/// `[I - h² X_s² ⊗ J] Δγ = -G(γ)` for second-order ones, where `J` is the
/// Jacobian of the right-hand side at the step's initial point.
pub fn dense_newton_solve<F>(
    mut residual: F,
    jacobian: &DMatrix<f64>,
    tableau: &HbvmTableau,
    h: f64,
    form: Form,
    config: &BlendedConfig,
    gamma0: Vec<f64>,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    config.validate()?;
    let dim = jacobian.nrows();
    let s = tableau.s();
    let n = s * dim;
    if n > MAX_DENSE_SIZE {
        return Err(Error::InvalidArgument(format!(
            "dense Newton limited to {MAX_DENSE_SIZE} unknowns, got {n}"
        )));
    }
    if gamma0.len() != n {
        return Err(Error::InvalidArgument("stage coefficient length mismatch".into()));
    }
    let coupling = match form {
        Form::FirstOrder => tableau.x_s() * h,
        Form::SecondOrder => tableau.x_s() * tableau.x_s() * (h * h),
    };
    let matrix = DMatrix::identity(n, n) - coupling.kronecker(jacobian);
    let lu = matrix.lu();
    if !lu.is_invertible() {
        return Err(Error::SingularMatrix);
    }

    let mut gamma = gamma0;
    let mut last = f64::INFINITY;
    let mut stall = StallMonitor::new();
    for iteration in 1..=config.max_iter {
        let r = residual(&gamma)?;
        let rhs = -DVector::from_vec(r);
        let delta = lu.solve(&rhs).ok_or(Error::SingularMatrix)?;
        last = delta.norm();
        if !last.is_finite() {
            return Err(Error::NumericalBreakdown { iteration });
        }
        for (g, d) in gamma.iter_mut().zip(delta.iter()) {
            *g += d;
        }
        let gamma_norm = norm2(&gamma);
        if config.converged(last, gamma_norm) || stall.stalled(config, last, gamma_norm) {
            return Ok((gamma, iteration));
        }
    }
    Err(Error::NonConvergence {
        iterations: config.max_iter,
        final_residual_norm: last,
    })
}
