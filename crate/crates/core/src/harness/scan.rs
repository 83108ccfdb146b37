use super::config::ExperimentConfig;
use super::problem::Instance;
use crate::error::{Error, Result};
use crate::fourier::delta_h0_diagnostic;

/// Semi-discrete Hamiltonian of the projected initial data at truncation `modes`.
pub fn initial_hamiltonian(cfg: &ExperimentConfig, modes: usize) -> Result<f64> {
    let (instance, y0) = Instance::build(cfg, modes)?;
    Ok(instance.system().hamiltonian(&y0))
}

/// `(N, E₀, ΔH₀)` for each requested truncation of the configured problem.
pub fn spectral_scan(cfg: &ExperimentConfig, modes: &[usize], scan_step: usize) -> Result<Vec<(usize, f64, f64)>> {
    if modes.is_empty() {
        return Err(Error::Config("empty N range".into()));
    }
    modes
        .iter()
        .map(|&n| {
            let (instance, y0) = Instance::build(cfg, n)?;
            let e0 = instance.e0(&y0)?;
            let dh = delta_h0_diagnostic(|nn| initial_hamiltonian(cfg, nn), n, scan_step)?;
            Ok((n, e0, dh))
        })
        .collect()
}
