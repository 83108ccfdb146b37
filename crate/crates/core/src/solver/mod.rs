//! Nonlinear solvers for the HBVM stage equations.
//!
//! The production path is the blended iteration preconditioned by a constant
//! structured matrix `Σ`; [`dense`] holds a dense simplified-Newton solver kept
//! as an independent reference.

mod blended;
pub mod dense;
mod sigma;

pub use blended::{blended_solve, blended_solve_first, blended_solve_second};
pub use dense::dense_newton_solve;
pub use sigma::{build_sigma, build_sigma_first, build_sigma_second, SigmaKind, SigmaOperator};

use crate::error::{Error, Result};

/// Stopping rule shared by both solvers: stop once
/// `‖Δγ‖ ≤ tol_abs + tol_rel·‖γ‖`, or once [`STALL_PATIENCE`] consecutive
/// updates fail to improve on the smallest one seen while already within a
/// factor [`STALL_FACTOR`] of that bound (the iteration has hit the round-off
/// floor of the residual evaluation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendedConfig {
    pub tol_rel: f64,
    pub tol_abs: f64,
    pub max_iter: usize,
}

/// Tolerance multiple below which stagnating updates count as converged.
pub const STALL_FACTOR: f64 = 1e4;

/// Consecutive non-improving updates that signal the round-off floor.
pub const STALL_PATIENCE: usize = 3;

impl Default for BlendedConfig {
    fn default() -> Self {
        Self {
            tol_rel: 1e-15,
            tol_abs: 1e-16,
            max_iter: 1000,
        }
    }
}

impl BlendedConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_rel > 0.0 && self.tol_abs > 0.0) {
            return Err(Error::InvalidArgument("solver tolerances must be positive".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn converged(&self, update_norm: f64, gamma_norm: f64) -> bool {
        update_norm <= self.tol_abs + self.tol_rel * gamma_norm
    }

    pub(crate) fn near_floor(&self, update_norm: f64, gamma_norm: f64) -> bool {
        update_norm <= STALL_FACTOR * (self.tol_abs + self.tol_rel * gamma_norm)
    }
}

/// Tracks the smallest update so far to detect stagnation.
#[derive(Debug)]
pub(crate) struct StallMonitor {
    best: f64,
    since_best: usize,
}

impl StallMonitor {
    pub(crate) fn new() -> Self {
        Self {
            best: f64::INFINITY,
            since_best: 0,
        }
    }

    /// Record an update norm; true once the iteration has stagnated near the
    /// tolerance.
    pub(crate) fn stalled(&mut self, config: &BlendedConfig, update_norm: f64, gamma_norm: f64) -> bool {
        if update_norm < self.best {
            self.best = update_norm;
            self.since_best = 0;
            return false;
        }
        self.since_best += 1;
        self.since_best >= STALL_PATIENCE && config.near_floor(self.best, gamma_norm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolverKind {
    #[default]
    Blended,
    /// Dense simplified Newton with the exact Jacobian at the step's initial point.
    DenseNewton,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub tolerances: BlendedConfig,
}

impl SolverConfig {
    pub fn blended(tolerances: BlendedConfig) -> Self {
        Self {
            kind: SolverKind::Blended,
            tolerances,
        }
    }

    pub fn dense_newton(tolerances: BlendedConfig) -> Self {
        Self {
            kind: SolverKind::DenseNewton,
            tolerances,
        }
    }
}

pub(crate) fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
