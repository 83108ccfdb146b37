//! Benchmark problem instances: model, projected initial data and the
//! reference solution used to measure errors.

use super::config::{ExperimentConfig, Problem};
use crate::error::Result;
use crate::fourier::{default_quadrature_size, e0_diagnostic, Field, Layout, SpectralBasis};
use crate::models::reference::{reference_nls, CnoidalWave, SineGordonBreather};
use crate::models::{KdvModel, NlsModel, ScalarNonlinearity, WaveModel};
use crate::system::SemiDiscreteSystem;

pub enum Instance {
    SineGordon { model: WaveModel, breather: SineGordonBreather },
    Nls { model: NlsModel },
    Kdv { model: KdvModel, wave: CnoidalWave },
}

impl Instance {
    /// Model at truncation `modes` (other settings from `cfg`) and its
    /// initial state.
    pub fn build(cfg: &ExperimentConfig, modes: usize) -> Result<(Self, Vec<f64>)> {
        let layout = match cfg.problem {
            Problem::Kdv => Layout::ZeroMean,
            _ => Layout::Full,
        };
        let m = match cfg.m {
            Some(m) if modes == cfg.modes => m,
            _ => default_quadrature_size(modes, layout),
        };
        let basis = SpectralBasis::new(modes, cfg.a, cfg.b, layout, m)?;
        Ok(match cfg.problem {
            Problem::SineGordon => {
                let breather = SineGordonBreather::new(cfg.gamma)?;
                let model = WaveModel::new(basis, ScalarNonlinearity::sine_gordon())?;
                let y0 = model.initial_state(|x| breather.u(x, 0.0), |x| breather.u_t(x, 0.0));
                (Instance::SineGordon { model, breather }, y0)
            }
            Problem::Nls => {
                let model = NlsModel::new(basis, ScalarNonlinearity::square())?;
                let y0 = model.initial_state(|x| reference_nls(x, 0.0).0, |x| reference_nls(x, 0.0).1);
                (Instance::Nls { model }, y0)
            }
            Problem::Kdv => {
                let wave = CnoidalWave::new(cfg.epsilon, cfg.modulus, cfg.x0)?;
                let u0 = |x: f64| wave.u(x, 0.0);
                let mean = basis.mean(u0);
                let y0 = basis.project(u0);
                let model = KdvModel::new(basis, -cfg.epsilon, -1.0, mean)?;
                (Instance::Kdv { model, wave }, y0)
            }
        })
    }

    pub fn system(&self) -> &dyn SemiDiscreteSystem {
        match self {
            Instance::SineGordon { model, .. } => model,
            Instance::Nls { model } => model,
            Instance::Kdv { model, .. } => model,
        }
    }

    pub fn basis(&self) -> &SpectralBasis {
        match self {
            Instance::SineGordon { model, .. } => model.basis(),
            Instance::Nls { model } => model.basis(),
            Instance::Kdv { model, .. } => model.basis(),
        }
    }

    /// Max-norm error on the quadrature grid against the reference solution
    /// at time `t`: displacement for sine-Gordon, `max(|Δu|, |Δv|)` for the
    /// Schrödinger equation, `u` for KdV.
    pub fn solution_error(&self, state: &[f64], t: f64) -> f64 {
        let grid = self.basis().grid();
        let max_abs = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, |acc, v| acc.max(v.abs()));
        match self {
            Instance::SineGordon { model, breather } => {
                let u = model.displacement(state);
                max_abs(&mut u.iter().zip(grid).map(|(u, &x)| u - breather.u(x, t)))
            }
            Instance::Nls { model } => {
                let (u, v) = model.fields(state);
                max_abs(&mut u.iter().zip(&v).zip(grid).map(|((u, v), &x)| {
                    let (ur, vr) = reference_nls(x, t);
                    (u - ur).abs().max((v - vr).abs())
                }))
            }
            Instance::Kdv { model, wave } => {
                let u = model.field(state);
                max_abs(&mut u.iter().zip(grid).map(|(u, &x)| u - wave.u(x, t)))
            }
        }
    }

    /// Initial-data reconstruction error `E₀` of the projected state.
    pub fn e0(&self, y0: &[f64]) -> Result<f64> {
        let basis = self.basis();
        match self {
            Instance::SineGordon { breather, .. } => {
                let (q, p) = y0.split_at(basis.size());
                let u0 = |x: f64| breather.u(x, 0.0);
                let v0 = |x: f64| breather.u_t(x, 0.0);
                e0_diagnostic(
                    basis,
                    &[
                        Field { exact: &u0, coeffs: q, offset: 0.0 },
                        Field { exact: &v0, coeffs: p, offset: 0.0 },
                    ],
                )
            }
            Instance::Nls { .. } => {
                let (q, p) = y0.split_at(basis.size());
                let u0 = |x: f64| reference_nls(x, 0.0).0;
                let v0 = |x: f64| reference_nls(x, 0.0).1;
                e0_diagnostic(
                    basis,
                    &[
                        Field { exact: &u0, coeffs: q, offset: 0.0 },
                        Field { exact: &v0, coeffs: p, offset: 0.0 },
                    ],
                )
            }
            Instance::Kdv { model, wave } => {
                let u0 = |x: f64| wave.u(x, 0.0);
                e0_diagnostic(
                    basis,
                    &[Field {
                        exact: &u0,
                        coeffs: y0,
                        offset: model.u_hat0(),
                    }],
                )
            }
        }
    }
}
