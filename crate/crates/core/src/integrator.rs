//! One-step HBVM(k,s) advancement, trajectory driver and spectral-in-time
//! order selection.
//!
//! The unknowns of one step are the `s` Legendre coefficients `γ_0..γ_{s-1}`
//! of the path derivative, stored as one flat vector of `s` blocks of length
//! `dim`. The step starts from `γ = 0`.

use crate::error::{Error, Result};
use crate::quadrature::{build_tableau, HbvmTableau};
use crate::solver::{
    blended_solve, build_sigma_first, build_sigma_second, dense_newton_solve, norm2, SigmaOperator, SolverConfig,
    SolverKind,
};
use crate::system::{Form, SemiDiscreteSystem};

/// Residual `F(γ) = γ - (P_sᵀΩ ⊗ I) f(e ⊗ y₀ + h I_s ⊗ I γ)`.
pub fn stage_residual_first<S: SemiDiscreteSystem + ?Sized>(
    system: &S,
    y0: &[f64],
    h: f64,
    tableau: &HbvmTableau,
    gamma: &[f64],
) -> Result<Vec<f64>> {
    if system.form() != Form::FirstOrder {
        return Err(Error::InvalidArgument("first-order residual on a second-order system".into()));
    }
    let dim = system.dim();
    let (k, s) = (tableau.k(), tableau.s());
    check_lengths(dim, s, y0, gamma)?;
    let i_s = tableau.i_s();
    let pt_omega = tableau.pt_omega();

    let mut stage = vec![0.0; dim];
    let mut f = vec![0.0; dim];
    let mut acc = vec![0.0; s * dim];
    for node in 0..k {
        stage.copy_from_slice(y0);
        for j in 0..s {
            let c = h * i_s[(node, j)];
            for (y, g) in stage.iter_mut().zip(&gamma[j * dim..(j + 1) * dim]) {
                *y += c * g;
            }
        }
        system.rhs(&stage, &mut f);
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteRhs { node });
        }
        accumulate(&mut acc, &f, pt_omega, node, s, dim);
    }
    Ok(gamma.iter().zip(&acc).map(|(g, a)| g - a).collect())
}

/// Residual `G(γ̄) = γ̄ - (P_sᵀΩ ⊗ I) ∇U(e ⊗ q₀ + h c ⊗ p₀ + h² I_s X_s ⊗ I γ̄)`.
pub fn stage_residual_second<S: SemiDiscreteSystem + ?Sized>(
    system: &S,
    q0: &[f64],
    p0: &[f64],
    h: f64,
    tableau: &HbvmTableau,
    gamma: &[f64],
) -> Result<Vec<f64>> {
    if system.form() != Form::SecondOrder {
        return Err(Error::InvalidArgument("second-order residual on a first-order system".into()));
    }
    let dim = system.dim();
    let (k, s) = (tableau.k(), tableau.s());
    check_lengths(dim, s, q0, gamma)?;
    if p0.len() != dim {
        return Err(Error::InvalidArgument("momentum length mismatch".into()));
    }
    let i_xs = tableau.i_xs();
    let pt_omega = tableau.pt_omega();
    let h2 = h * h;

    let mut stage = vec![0.0; dim];
    let mut f = vec![0.0; dim];
    let mut acc = vec![0.0; s * dim];
    for (node, &c) in tableau.nodes().iter().enumerate().take(k) {
        let hc = h * c;
        for ((y, q), p) in stage.iter_mut().zip(q0).zip(p0) {
            *y = q + hc * p;
        }
        for j in 0..s {
            let w = h2 * i_xs[(node, j)];
            for (y, g) in stage.iter_mut().zip(&gamma[j * dim..(j + 1) * dim]) {
                *y += w * g;
            }
        }
        system.rhs(&stage, &mut f);
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteRhs { node });
        }
        accumulate(&mut acc, &f, pt_omega, node, s, dim);
    }
    Ok(gamma.iter().zip(&acc).map(|(g, a)| g - a).collect())
}

fn check_lengths(dim: usize, s: usize, x0: &[f64], gamma: &[f64]) -> Result<()> {
    if x0.len() != dim || gamma.len() != s * dim {
        return Err(Error::InvalidArgument(format!(
            "expected state of length {dim} and {s} coefficient blocks, got {} and {}",
            x0.len(),
            gamma.len()
        )));
    }
    Ok(())
}

fn accumulate(acc: &mut [f64], f: &[f64], pt_omega: &nalgebra::DMatrix<f64>, node: usize, s: usize, dim: usize) {
    for j in 0..s {
        let w = pt_omega[(j, node)];
        for (a, v) in acc[j * dim..(j + 1) * dim].iter_mut().zip(f) {
            *a += w * v;
        }
    }
}

/// Outcome of one HBVM step.
#[derive(Debug, Clone)]
pub struct StepResult {
    /// `y₁`, or `(q₁, p₁)` concatenated.
    pub new_state: Vec<f64>,
    /// `new_state - state` before rounding: `hγ_0`, or
    /// `(hp₀ + h²(ξ_0γ̄_0 − ξ_1γ̄_1), hγ̄_0)`.
    pub increment: Vec<f64>,
    /// Converged coefficients `γ̂_j` (or `γ̄_j`), `s` blocks of length `dim`.
    pub gamma: Vec<f64>,
    pub iterations: usize,
    /// `‖γ_j‖₂` for `j = 0..s`. For second-order systems these are the
    /// coefficients of the equivalent first-order field `(p, q̈)`.
    pub gamma_norms: Vec<f64>,
}

/// Reusable stepping context. The blended preconditioner is rebuilt only when
/// the step size changes.
pub struct Stepper<'a, S: SemiDiscreteSystem + ?Sized> {
    system: &'a S,
    tableau: &'a HbvmTableau,
    config: SolverConfig,
    sigma: Option<(f64, SigmaOperator)>,
    sigma_builds: usize,
}

impl<'a, S: SemiDiscreteSystem + ?Sized> Stepper<'a, S> {
    pub fn new(system: &'a S, tableau: &'a HbvmTableau, config: SolverConfig) -> Result<Self> {
        config.tolerances.validate()?;
        Ok(Self {
            system,
            tableau,
            config,
            sigma: None,
            sigma_builds: 0,
        })
    }

    /// How many times `Σ` has been assembled.
    pub fn sigma_builds(&self) -> usize {
        self.sigma_builds
    }

    pub fn sigma(&self) -> Option<&SigmaOperator> {
        self.sigma.as_ref().map(|(_, s)| s)
    }

    fn ensure_sigma(&mut self, h: f64) -> Result<()> {
        if matches!(&self.sigma, Some((cached, _)) if *cached == h) {
            return Ok(());
        }
        let lp = self.system.linear_part();
        let rho = self.tableau.rho();
        let sigma = match self.system.form() {
            Form::FirstOrder => build_sigma_first(lp, h, rho)?,
            Form::SecondOrder => build_sigma_second(lp, h, rho)?,
        };
        self.sigma = Some((h, sigma));
        self.sigma_builds += 1;
        Ok(())
    }

    pub fn step(&mut self, state: &[f64], h: f64) -> Result<StepResult> {
        if h == 0.0 || !h.is_finite() {
            return Err(Error::InvalidArgument("step size must be finite and nonzero".into()));
        }
        let system = self.system;
        let tableau = self.tableau;
        let dim = system.dim();
        let s = tableau.s();
        if state.len() != system.state_len() {
            return Err(Error::InvalidArgument(format!(
                "state has length {}, expected {}",
                state.len(),
                system.state_len()
            )));
        }
        let form = system.form();
        let gamma0 = vec![0.0; s * dim];
        let tol = self.config.tolerances;

        let (gamma, iterations) = match form {
            Form::FirstOrder => {
                let residual = |g: &[f64]| stage_residual_first(system, state, h, tableau, g);
                match self.config.kind {
                    SolverKind::Blended => {
                        self.ensure_sigma(h)?;
                        let sigma = &self.sigma.as_ref().expect("sigma built").1;
                        blended_solve(residual, tableau.blend_first(), sigma, &tol, gamma0)?
                    }
                    SolverKind::DenseNewton => {
                        let jac = system.jacobian(state);
                        dense_newton_solve(residual, &jac, tableau, h, form, &tol, gamma0)?
                    }
                }
            }
            Form::SecondOrder => {
                let (q0, p0) = state.split_at(dim);
                let residual = |g: &[f64]| stage_residual_second(system, q0, p0, h, tableau, g);
                match self.config.kind {
                    SolverKind::Blended => {
                        self.ensure_sigma(h)?;
                        let sigma = &self.sigma.as_ref().expect("sigma built").1;
                        blended_solve(residual, tableau.blend_second(), sigma, &tol, gamma0)?
                    }
                    SolverKind::DenseNewton => {
                        let jac = system.jacobian(q0);
                        dense_newton_solve(residual, &jac, tableau, h, form, &tol, gamma0)?
                    }
                }
            }
        };

        let increment: Vec<f64> = match form {
            Form::FirstOrder => gamma[..dim].iter().map(|g| h * g).collect(),
            Form::SecondOrder => {
                let p0 = &state[dim..];
                let xi = tableau.xi();
                let mut out = Vec::with_capacity(2 * dim);
                for i in 0..dim {
                    let mut corr = xi[0] * gamma[i];
                    if s > 1 {
                        corr -= xi[1] * gamma[dim + i];
                    }
                    out.push(h * p0[i] + h * h * corr);
                }
                out.extend(gamma[..dim].iter().map(|g| h * g));
                out
            }
        };
        let new_state = state.iter().zip(&increment).map(|(y, d)| y + d).collect();
        let gamma_norms = match form {
            Form::FirstOrder => gamma.chunks(dim).map(norm2).collect(),
            Form::SecondOrder => first_order_coefficient_norms(&state[dim..], h, &gamma, dim),
        };
        Ok(StepResult {
            new_state,
            increment,
            gamma,
            iterations,
            gamma_norms,
        })
    }
}

/// Norms of the Legendre coefficients of the equivalent first-order field
/// `(q̇, ṗ) = (p, a)` over the step, given the acceleration coefficients
/// `γ̄`: coefficient `i` stacks the velocity coefficient
/// `δ_{i0}p₀ + h(ξ_iγ̄_{i-1} − ξ_{i+1}γ̄_{i+1})` (with `ξ_0γ̄_{-1}` read as
/// `γ̄_0/2`) on top of `γ̄_i`. This keeps the truncation criterion of the
/// spectral order selection independent of the chosen formulation.
fn first_order_coefficient_norms(p0: &[f64], h: f64, gamma: &[f64], dim: usize) -> Vec<f64> {
    let s = gamma.len() / dim;
    let xi = |j: usize| 0.5 / ((4 * j * j) as f64 - 1.0).abs().sqrt();
    let block = |j: usize, d: usize| if j < s { gamma[j * dim + d] } else { 0.0 };
    (0..s)
        .map(|i| {
            let mut sq = 0.0;
            for d in 0..dim {
                let v = if i == 0 {
                    p0[d] + h * (0.5 * block(0, d) - xi(1) * block(1, d))
                } else {
                    h * (xi(i) * block(i - 1, d) - xi(i + 1) * block(i + 1, d))
                };
                let a = block(i, d);
                sq += v * v + a * a;
            }
            sq.sqrt()
        })
        .collect()
}

/// Single HBVM(k,s) step from `state` with step size `h` (negative allowed).
pub fn hbvm_step<S: SemiDiscreteSystem + ?Sized>(
    system: &S,
    state: &[f64],
    h: f64,
    tableau: &HbvmTableau,
    config: &SolverConfig,
) -> Result<StepResult> {
    Stepper::new(system, tableau, *config)?.step(state, h)
}

/// Per-step record of a trajectory plus drift maxima.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub final_state: Vec<f64>,
    pub h: f64,
    pub steps: usize,
    /// Hamiltonian at steps `0..=steps`.
    pub hamiltonian: Vec<f64>,
    /// Extra invariants at steps `0..=steps`, one inner vector per step.
    pub invariants: Vec<Vec<f64>>,
    pub invariant_names: Vec<&'static str>,
    pub max_hamiltonian_drift: f64,
    pub max_invariant_drift: Vec<f64>,
    pub total_iterations: usize,
}

impl Trajectory {
    pub fn mean_iterations(&self) -> f64 {
        self.total_iterations as f64 / self.steps as f64
    }
}

/// Advance `n_steps` steps of size `t_end / n_steps`, calling `observer` with
/// `(step, t, state)` after every step (and once for the initial state).
#[allow(clippy::too_many_arguments)]
pub fn integrate<S: SemiDiscreteSystem + ?Sized>(
    system: &S,
    state0: &[f64],
    t_end: f64,
    n_steps: usize,
    tableau: &HbvmTableau,
    config: &SolverConfig,
    observer: &mut dyn FnMut(usize, f64, &[f64]) -> Result<()>,
) -> Result<Trajectory> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let h = t_end / n_steps as f64;
    let mut stepper = Stepper::new(system, tableau, *config)?;

    let h0 = system.hamiltonian(state0);
    let inv0 = system.invariants(state0);
    let mut hamiltonian = Vec::with_capacity(n_steps + 1);
    let mut invariants = Vec::with_capacity(n_steps + 1);
    hamiltonian.push(h0);
    invariants.push(inv0.clone());
    let mut max_h = 0.0f64;
    let mut max_inv = vec![0.0f64; inv0.len()];
    let mut total_iterations = 0;
    observer(0, 0.0, state0)?;

    // The increments are tiny compared with the state, so plain accumulation
    // rounds with a consistent bias and shows up as a linear drift of the
    // invariants; compensated summation removes it.
    let mut state = state0.to_vec();
    let mut carry = vec![0.0; state.len()];
    for step in 1..=n_steps {
        let res = stepper.step(&state, h).map_err(|e| Error::StepFailed {
            step,
            source: Box::new(e),
        })?;
        total_iterations += res.iterations;
        for ((y, c), d) in state.iter_mut().zip(carry.iter_mut()).zip(&res.increment) {
            let corrected = d + *c;
            let next = *y + corrected;
            *c = corrected - (next - *y);
            *y = next;
        }

        let hv = system.hamiltonian(&state);
        max_h = max_h.max((hv - h0).abs());
        hamiltonian.push(hv);
        let inv = system.invariants(&state);
        for (m, (v, v0)) in max_inv.iter_mut().zip(inv.iter().zip(&inv0)) {
            *m = m.max((v - v0).abs());
        }
        invariants.push(inv);
        observer(step, step as f64 * h, &state)?;
    }

    Ok(Trajectory {
        final_state: state,
        h,
        steps: n_steps,
        hamiltonian,
        invariants,
        invariant_names: system.invariant_names(),
        max_hamiltonian_drift: max_h,
        max_invariant_drift: max_inv,
        total_iterations,
    })
}

/// Search bounds for [`select_spectral_order`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralOrderOptions {
    pub s_min: usize,
    pub s_max: usize,
}

impl Default for SpectralOrderOptions {
    fn default() -> Self {
        Self { s_min: 4, s_max: 32 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralOrder {
    pub s: usize,
    pub k: usize,
    pub gamma_norms: Vec<f64>,
}

/// Smallest `s ≥ s_min` for which the last Legendre coefficient of a trial
/// HBVM(s + k_offset, s) step from `state` is negligible:
/// `‖γ_{s-1}‖ < tol · max_{j<s-1} ‖γ_j‖`.
#[allow(clippy::too_many_arguments)]
pub fn select_spectral_order<S: SemiDiscreteSystem + ?Sized>(
    system: &S,
    state: &[f64],
    h: f64,
    tol: f64,
    k_offset: usize,
    config: &SolverConfig,
    options: SpectralOrderOptions,
) -> Result<SpectralOrder> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("truncation tolerance must be positive".into()));
    }
    if options.s_min < 2 || options.s_min > options.s_max {
        return Err(Error::InvalidArgument("need 2 <= s_min <= s_max".into()));
    }
    for s in options.s_min..=options.s_max {
        let k = s + k_offset;
        let tableau = build_tableau(k, s)?;
        let res = hbvm_step(system, state, h, &tableau, config)?;
        let norms = res.gamma_norms;
        let last = norms[s - 1];
        let lead = norms[..s - 1].iter().cloned().fold(0.0, f64::max);
        if (lead == 0.0 && last == 0.0) || last < tol * lead {
            return Ok(SpectralOrder {
                s,
                k,
                gamma_norms: norms,
            });
        }
    }
    Err(Error::OrderSelectionFailure { s_max: options.s_max })
}
