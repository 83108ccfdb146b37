use nalgebra::DMatrix;

use super::{norm2, BlendedConfig, SigmaOperator, StallMonitor};
use crate::error::{Error, Result};
use crate::quadrature::HbvmTableau;

/// Blended iteration for `F(γ) = 0` with `γ` stored as `s` contiguous blocks.
///
/// Each sweep computes `η = -F(γ)`, `η₁ = (blend ⊗ I) η` and
/// `Δγ = θ[η₁ + θ(η - η₁)]` with `θ = I_s ⊗ Σ^{-1}`. `blend` is `ρ_s X_s^{-1}`
/// for first-order problems and `ρ_s² X_s^{-2}` for second-order ones.
pub fn blended_solve<F>(
    mut residual: F,
    blend: &DMatrix<f64>,
    sigma: &SigmaOperator,
    config: &BlendedConfig,
    gamma0: Vec<f64>,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    config.validate()?;
    let s = blend.nrows();
    let dim = sigma.dim();
    if gamma0.len() != s * dim {
        return Err(Error::InvalidArgument(format!(
            "stage coefficient vector has length {}, expected {}",
            gamma0.len(),
            s * dim
        )));
    }
    let mut gamma = gamma0;
    let mut eta1 = vec![0.0; s * dim];
    let mut tmp = vec![0.0; dim];
    let mut tmp2 = vec![0.0; dim];
    let mut last = f64::INFINITY;
    let mut stall = StallMonitor::new();

    for iteration in 1..=config.max_iter {
        let mut eta = residual(&gamma)?;
        eta.iter_mut().for_each(|x| *x = -*x);

        eta1.iter_mut().for_each(|x| *x = 0.0);
        for i in 0..s {
            let out = &mut eta1[i * dim..(i + 1) * dim];
            for j in 0..s {
                let c = blend[(i, j)];
                if c != 0.0 {
                    for (o, e) in out.iter_mut().zip(&eta[j * dim..(j + 1) * dim]) {
                        *o += c * e;
                    }
                }
            }
        }

        let mut update_sq = 0.0;
        for i in 0..s {
            let block = i * dim..(i + 1) * dim;
            for ((t, e), e1) in tmp.iter_mut().zip(&eta[block.clone()]).zip(&eta1[block.clone()]) {
                *t = e - e1;
            }
            sigma.apply_inverse(&tmp, &mut tmp2);
            for (t, e1) in tmp2.iter_mut().zip(&eta1[block.clone()]) {
                *t += e1;
            }
            sigma.apply_inverse(&tmp2, &mut tmp);
            for (g, d) in gamma[block].iter_mut().zip(&tmp) {
                *g += d;
                update_sq += d * d;
            }
        }
        last = update_sq.sqrt();
        if !last.is_finite() {
            return Err(Error::NumericalBreakdown { iteration });
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

/// Blended iteration for the first-order stage equations.
pub fn blended_solve_first<F>(
    residual: F,
    tableau: &HbvmTableau,
    sigma: &SigmaOperator,
    config: &BlendedConfig,
    gamma0: Vec<f64>,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    blended_solve(residual, tableau.blend_first(), sigma, config, gamma0)
}

/// Blended iteration for the special second-order stage equations.
pub fn blended_solve_second<F>(
    residual: F,
    tableau: &HbvmTableau,
    sigma: &SigmaOperator,
    config: &BlendedConfig,
    gamma0: Vec<f64>,
) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(&[f64]) -> Result<Vec<f64>>,
{
    blended_solve(residual, tableau.blend_second(), sigma, config, gamma0)
}
