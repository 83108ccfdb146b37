use std::time::Instant;

use super::config::{ExperimentConfig, Problem};
use super::problem::Instance;
use crate::error::{Error, Result};
use crate::integrator::{integrate, select_spectral_order, SpectralOrderOptions};
use crate::quadrature::build_tableau;

/// One row of a convergence table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub n: usize,
    /// Informational only; never written to CSV.
    pub wall_time_seconds: f64,
    /// Maximum solution error over all steps (`e_u`, or `e_uv` for NLS).
    pub e_u: f64,
    pub rate_u: Option<f64>,
    /// Maximum Hamiltonian drift.
    pub e_h: f64,
    pub rate_h: Option<f64>,
    /// Mass and momentum drifts (NLS only).
    pub e_1: Option<f64>,
    pub rate_1: Option<f64>,
    pub e_2: Option<f64>,
    pub rate_2: Option<f64>,
    pub s: usize,
    pub k: usize,
    pub iterations_mean: f64,
}

/// Observed order `log(e_prev/e_cur)/log(n_cur/n_prev)`; absent when the
/// newer error is on the round-off plateau (below `1e-13`) or an input is not
/// positive.
pub fn compute_rate(e_prev: f64, e_cur: f64, n_prev: usize, n_cur: usize) -> Option<f64> {
    if !(e_prev > 0.0 && e_cur >= RATE_PLATEAU && n_prev > 0 && n_cur > n_prev) {
        return None;
    }
    Some((e_prev / e_cur).ln() / (n_cur as f64 / n_prev as f64).ln())
}

/// Errors below this level are treated as round-off.
pub const RATE_PLATEAU: f64 = 1e-13;

/// Integrate one configuration with `n` steps; rates are left empty.
pub fn run_single(cfg: &ExperimentConfig, n: usize) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let (instance, y0) = Instance::build(cfg, cfg.modes)?;
    let system = instance.system();
    let h = cfg.t_end / n as f64;
    let solver = cfg.solver();

    let (k, s) = match cfg.fixed_order() {
        Some(ks) => ks,
        None => {
            let order = select_spectral_order(
                system,
                &y0,
                h,
                cfg.shbvm_tol,
                cfg.k_offset,
                &solver,
                SpectralOrderOptions {
                    s_min: cfg.s_min,
                    s_max: cfg.s_max,
                },
            )?;
            (order.k, order.s)
        }
    };
    let tableau = build_tableau(k, s)?;

    let mut e_u = 0.0f64;
    let mut observer = |_step: usize, t: f64, state: &[f64]| {
        e_u = e_u.max(instance.solution_error(state, t));
        Ok(())
    };
    let traj = integrate(system, &y0, cfg.t_end, n, &tableau, &solver, &mut observer)?;
    let (e_1, e_2) = match cfg.problem {
        Problem::Nls => (
            Some(traj.max_invariant_drift[0]),
            Some(traj.max_invariant_drift[1]),
        ),
        _ => (None, None),
    };
    Ok(RunRecord {
        n,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        e_u,
        rate_u: None,
        e_h: traj.max_hamiltonian_drift,
        rate_h: None,
        e_1,
        rate_1: None,
        e_2,
        rate_2: None,
        s,
        k,
        iterations_mean: traj.mean_iterations(),
    })
}

/// Run every `n` of the configuration in order and fill in the rates.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    cfg.validate()?;
    let mut records: Vec<RunRecord> = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        let mut rec = run_single(cfg, n).map_err(|e| Error::RunFailed { n, source: Box::new(e) })?;
        if let Some(prev) = records.last() {
            let rate = |a: Option<f64>, b: Option<f64>| match (a, b) {
                (Some(a), Some(b)) => compute_rate(a, b, prev.n, n),
                _ => None,
            };
            rec.rate_u = rate(Some(prev.e_u), Some(rec.e_u));
            rec.rate_h = rate(Some(prev.e_h), Some(rec.e_h));
            rec.rate_1 = rate(prev.e_1, rec.e_1);
            rec.rate_2 = rate(prev.e_2, rec.e_2);
        }
        records.push(rec);
    }
    Ok(records)
}
