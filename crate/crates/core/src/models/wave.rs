use super::{check_finite, dot, ScalarNonlinearity};
use crate::error::{Error, Result};
use crate::fourier::{Layout, SpectralBasis};
use crate::system::{Form, LinearPart, SemiDiscreteSystem};

/// Semilinear wave equation `u_tt = u_xx - f'(u)` on a periodic interval, as
/// the special second-order system `q̈ = -D²q - ∫ω f'(ωᵀq)` with
/// `H = ½(pᵀp + qᵀD²q + 2∫f(ωᵀq))`.
#[derive(Debug, Clone)]
pub struct WaveModel {
    basis: SpectralBasis,
    nonlinearity: ScalarNonlinearity,
    d2: Vec<f64>,
    linear: LinearPart,
}

impl WaveModel {
    pub fn new(basis: SpectralBasis, nonlinearity: ScalarNonlinearity) -> Result<Self> {
        if basis.layout() != Layout::Full {
            return Err(Error::InvalidArgument("wave model needs the full Fourier layout".into()));
        }
        let d2 = basis.d_squared();
        let linear = LinearPart::Diagonal(d2.iter().map(|v| -v).collect());
        Ok(Self {
            basis,
            nonlinearity,
            d2,
            linear,
        })
    }

    /// Sine-Gordon (`f' = sin`) with the default quadrature size.
    pub fn sine_gordon(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::new(
            SpectralBasis::with_default_m(n, a, b, Layout::Full)?,
            ScalarNonlinearity::sine_gordon(),
        )
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    /// `-D²q - Bᵀw f'(Bq)`.
    pub fn acceleration(&self, q: &[f64]) -> Result<Vec<f64>> {
        let u = self.basis.synthesize(q)?;
        let fp: Vec<f64> = u.iter().map(|&v| (self.nonlinearity.f_prime)(v)).collect();
        check_finite(&fp)?;
        let proj = self.basis.analyze(&fp)?;
        Ok(q.iter().zip(&self.d2).zip(proj).map(|((q, d2), g)| -d2 * q - g).collect())
    }

    pub fn hamiltonian_qp(&self, q: &[f64], p: &[f64]) -> f64 {
        let u = self.basis.synthesize(q).expect("layout-sized coefficients");
        let fu: Vec<f64> = u.iter().map(|&v| (self.nonlinearity.f)(v)).collect();
        let qd2q: f64 = q.iter().zip(&self.d2).map(|(q, d)| d * q * q).sum();
        0.5 * (dot(p, p) + qd2q + 2.0 * self.basis.integrate_samples(&fu))
    }

    /// `(q₀, p₀)` from the initial displacement and velocity.
    pub fn initial_state(&self, u0: impl Fn(f64) -> f64, v0: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut state = self.basis.project(u0);
        state.extend(self.basis.project(v0));
        state
    }

    /// Displacement `u` on the quadrature grid.
    pub fn displacement(&self, state: &[f64]) -> Vec<f64> {
        self.basis.synthesize(&state[..self.dim()]).expect("layout-sized state")
    }

    /// Velocity `u_t` on the quadrature grid.
    pub fn velocity(&self, state: &[f64]) -> Vec<f64> {
        self.basis.synthesize(&state[self.dim()..]).expect("layout-sized state")
    }
}

impl SemiDiscreteSystem for WaveModel {
    fn form(&self) -> Form {
        Form::SecondOrder
    }

    fn dim(&self) -> usize {
        self.basis.size()
    }

    fn rhs(&self, q: &[f64], out: &mut [f64]) {
        match self.acceleration(q) {
            Ok(v) => out.copy_from_slice(&v),
            Err(_) => out.fill(f64::NAN),
        }
    }

    fn linear_part(&self) -> &LinearPart {
        &self.linear
    }

    fn hamiltonian(&self, state: &[f64]) -> f64 {
        let (q, p) = state.split_at(self.dim());
        self.hamiltonian_qp(q, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::finite_difference_gradient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small() -> WaveModel {
        WaveModel::new(
            SpectralBasis::new(8, -3.0, 4.0, Layout::Full, 40).unwrap(),
            ScalarNonlinearity::sine_gordon(),
        )
        .unwrap()
    }

    #[test]
    fn zero_state_and_linear_case() {
        let model = small();
        let q = vec![0.0; 17];
        assert!(model.acceleration(&q).unwrap().iter().all(|v| *v == 0.0));
        assert_eq!(model.hamiltonian(&[0.0; 34]), 0.0);

        let lin = WaveModel::new(model.basis().clone(), ScalarNonlinearity::zero()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q: Vec<f64> = (0..17).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let acc = lin.acceleration(&q).unwrap();
        for ((a, q), d2) in acc.iter().zip(&q).zip(model.basis().d_squared()) {
            assert!((a + d2 * q).abs() < 1e-15);
        }
    }

    #[test]
    fn acceleration_is_minus_gradient() {
        let model = small();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let q: Vec<f64> = (0..17).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let p: Vec<f64> = (0..17).map(|_| rng.gen_range(-0.5..0.5)).collect();
            let grad = finite_difference_gradient(|x| model.hamiltonian_qp(x, &p), &q, 1e-6);
            let acc = model.acceleration(&q).unwrap();
            let scale = grad.iter().map(|g| g.abs()).fold(0.0, f64::max);
            for (a, g) in acc.iter().zip(&grad) {
                assert!((a + g).abs() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn linear_part_matches_jacobian_at_origin() {
        let model = small();
        let jac = model.jacobian(&[0.0; 17]);
        let dense = model.linear_part().to_dense().unwrap();
        // f'(u) = sin u contributes the identity at the origin
        let diff = jac - dense + nalgebra::DMatrix::<f64>::identity(17, 17);
        assert!(diff.amax() < 1e-8);
    }

    #[test]
    fn breather_initial_energy() {
        use crate::models::reference::SineGordonBreather;
        let sg = SineGordonBreather::new(1.5).unwrap();
        let model = WaveModel::sine_gordon(250, -50.0, 50.0).unwrap();
        let y0 = model.initial_state(|x| sg.u(x, 0.0), |x| sg.u_t(x, 0.0));
        let h0 = model.hamiltonian(&y0);
        assert!((h0 - 16.0 / 1.5).abs() < 1e-3, "{h0}");
    }

    #[test]
    fn rejects_zero_mean_layout() {
        let basis = SpectralBasis::new(4, 0.0, 1.0, Layout::ZeroMean, 13).unwrap();
        assert!(WaveModel::new(basis, ScalarNonlinearity::zero()).is_err());
    }
}
