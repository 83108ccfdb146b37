use super::{check_finite, dot, ScalarNonlinearity};
use crate::error::{Error, Result};
use crate::fourier::{Layout, SpectralBasis};
use crate::system::{Form, LinearPart, SemiDiscreteSystem};

/// Nonlinear Schrödinger equation in real form,
/// `u_t = -v_xx - f'(u²+v²)v`, `v_t = u_xx + f'(u²+v²)u`, semi-discretized as
/// `q̇ = D²p - ∫ω f'(U²+V²)V`, `ṗ = -D²q + ∫ω f'(U²+V²)U`.
///
/// The state is `(q, p)`; besides the Hamiltonian it carries the mass
/// `M₁ = qᵀq + pᵀp` and the momentum `M₂ = qᵀD̄p`.
#[derive(Debug, Clone)]
pub struct NlsModel {
    basis: SpectralBasis,
    nonlinearity: ScalarNonlinearity,
    d2: Vec<f64>,
    linear: LinearPart,
}

impl NlsModel {
    pub fn new(basis: SpectralBasis, nonlinearity: ScalarNonlinearity) -> Result<Self> {
        if basis.layout() != Layout::Full {
            return Err(Error::InvalidArgument("Schrödinger model needs the full Fourier layout".into()));
        }
        let d2 = basis.d_squared();
        let size = d2.len();
        let linear = LinearPart::Blocks {
            a11: vec![0.0; size],
            a12: d2.clone(),
            a21: d2.iter().map(|v| -v).collect(),
            a22: vec![0.0; size],
        };
        Ok(Self {
            basis,
            nonlinearity,
            d2,
            linear,
        })
    }

    /// Focusing equation `f(x) = x²` with the default quadrature size.
    pub fn focusing(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(
            SpectralBasis::with_default_m(n, a, b, Layout::Full)?,
            ScalarNonlinearity::square(),
        )
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    // Two separate real transforms: packing both fields into one complex
    // transform couples their rounding errors and makes the mass and momentum
    // drift linearly in time.
    fn synthesize(&self, q: &[f64], p: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let u = self.basis.synthesize(q).expect("layout-sized coefficients");
        let v = self.basis.synthesize(p).expect("layout-sized coefficients");
        (u, v)
    }

    fn half(&self) -> usize {
        self.basis.size()
    }

    /// `(q̇, ṗ)`.
    pub fn nls_rhs(&self, q: &[f64], p: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let (u, v) = self.synthesize(q, p);
        let g: Vec<f64> = u.iter().zip(&v).map(|(u, v)| (self.nonlinearity.f_prime)(u * u + v * v)).collect();
        check_finite(&g)?;
        let gv: Vec<f64> = g.iter().zip(&v).map(|(g, v)| g * v).collect();
        let gu: Vec<f64> = g.iter().zip(&u).map(|(g, u)| g * u).collect();
        let (pv, pu) = (self.basis.analyze(&gv)?, self.basis.analyze(&gu)?);
        let qdot = p.iter().zip(&self.d2).zip(pv).map(|((p, d2), g)| d2 * p - g).collect();
        let pdot = q.iter().zip(&self.d2).zip(pu).map(|((q, d2), g)| -d2 * q + g).collect();
        Ok((qdot, pdot))
    }

    pub fn hamiltonian_qp(&self, q: &[f64], p: &[f64]) -> f64 {
        let (u, v) = self.synthesize(q, p);
        let fu: Vec<f64> = u.iter().zip(&v).map(|(u, v)| (self.nonlinearity.f)(u * u + v * v)).collect();
        let quad: f64 = q.iter().zip(p).zip(&self.d2).map(|((q, p), d)| d * (q * q + p * p)).sum();
        0.5 * (quad - self.basis.integrate_samples(&fu))
    }

    pub fn mass(&self, q: &[f64], p: &[f64]) -> f64 {
        dot(q, q) + dot(p, p)
    }

    pub fn momentum(&self, q: &[f64], p: &[f64]) -> f64 {
        dot(q, &self.basis.apply_dbar(p).expect("full layout"))
    }

    /// `(H, M₁, M₂)`.
    pub fn nls_invariants(&self, q: &[f64], p: &[f64]) -> (f64, f64, f64) {
        (self.hamiltonian_qp(q, p), self.mass(q, p), self.momentum(q, p))
    }

    pub fn initial_state(&self, u0: impl Fn(f64) -> f64, v0: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut state = self.basis.project(u0);
        state.extend(self.basis.project(v0));
        state
    }

    /// `(u, v)` on the quadrature grid.
    pub fn fields(&self, state: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (q, p) = state.split_at(self.half());
        self.synthesize(q, p)
    }
}

impl SemiDiscreteSystem for NlsModel {
    fn form(&self) -> Form {
        Form::FirstOrder
    }

    fn dim(&self) -> usize {
        2 * self.half()
    }

    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        let (q, p) = y.split_at(self.half());
        match self.nls_rhs(q, p) {
            Ok((qd, pd)) => {
                out[..qd.len()].copy_from_slice(&qd);
                out[qd.len()..].copy_from_slice(&pd);
            }
            Err(_) => out.fill(f64::NAN),
        }
    }

    fn linear_part(&self) -> &LinearPart {
        &self.linear
    }

    fn hamiltonian(&self, state: &[f64]) -> f64 {
        let (q, p) = state.split_at(self.half());
        self.hamiltonian_qp(q, p)
    }

    fn invariant_names(&self) -> Vec<&'static str> {
        vec!["mass", "momentum"]
    }

    fn invariants(&self, state: &[f64]) -> Vec<f64> {
        let (q, p) = state.split_at(self.half());
        vec![self.mass(q, p), self.momentum(q, p)]
    }
}
