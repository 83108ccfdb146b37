use super::reference::CnoidalWave;
use super::{check_finite, dot};
use crate::error::{Error, Result};
use crate::fourier::{Layout, SpectralBasis};
use crate::system::{Form, LinearPart, SemiDiscreteSystem};

/// Korteweg–de Vries equation `u_t = αu_xxx + βuu_x` on a periodic interval.
///
/// The solution is expanded as `u = û₀ + cᵀq + sᵀp` with the conserved mean
/// `û₀` kept outside the state, so mean conservation holds by construction.
/// The semi-discrete system is `ẏ = (J₂⊗D)∇H(y)`, `y = (q, p)`, with
/// `H = ½[-α(qᵀD²q + pᵀD²p) + (β/3)∫u³]`.
#[derive(Debug, Clone)]
pub struct KdvModel {
    basis: SpectralBasis,
    alpha: f64,
    beta: f64,
    u_hat0: f64,
    d: Vec<f64>,
    linear: LinearPart,
}

impl KdvModel {
    pub fn new(basis: SpectralBasis, alpha: f64, beta: f64, u_hat0: f64) -> Result<Self> {
        if basis.layout() != Layout::ZeroMean {
            return Err(Error::InvalidArgument("KdV model needs the zero-mean Fourier layout".into()));
        }
        let d = basis.d().to_vec();
        // D·D̂ with D̂ = -αD² + βû₀I: the constant linear part of the vector field
        let b: Vec<f64> = d.iter().map(|&k| k * (-alpha * k * k + beta * u_hat0)).collect();
        let linear = LinearPart::Blocks {
            a11: vec![0.0; d.len()],
            a12: b.clone(),
            a21: b.iter().map(|v| -v).collect(),
            a22: vec![0.0; d.len()],
        };
        Ok(Self {
            basis,
            alpha,
            beta,
            u_hat0,
            d,
            linear,
        })
    }

    /// `u_t + εu_xxx + uu_x = 0` (`α = -ε`, `β = -1`) on `[0, 1]` with the mean
    /// of the given cnoidal wave, together with the projected initial state.
    pub fn cnoidal(wave: &CnoidalWave, n: usize, m: usize) -> Result<(Self, Vec<f64>)> {
        let basis = SpectralBasis::new(n, 0.0, 1.0, Layout::ZeroMean, m)?;
        let u0 = |x: f64| wave.u(x, 0.0);
        let mean = basis.mean(u0);
        let y0 = basis.project(u0);
        Ok((Self::new(basis, -wave.epsilon, -1.0, mean)?, y0))
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn u_hat0(&self) -> f64 {
        self.u_hat0
    }

    fn n(&self) -> usize {
        self.d.len()
    }

    /// `u = û₀ + Cq + Sp` on the quadrature grid.
    pub fn field(&self, state: &[f64]) -> Vec<f64> {
        let mut u = self.basis.synthesize(state).expect("layout-sized state");
        u.iter_mut().for_each(|v| *v += self.u_hat0);
        u
    }

    /// `(q̇, ṗ)` with `q̇ = D[D̂p + (β/2)Sᵀw ũ²]`, `ṗ = -D[D̂q + (β/2)Cᵀw ũ²]`,
    /// where `ũ = u - û₀` and `D̂ = -αD² + βû₀I`.
    ///
    /// The mean enters `u²` only through `2û₀ũ + û₀²`, whose projections are
    /// `2û₀y` and zero; folding them into `D̂` keeps the large constant out of
    /// the transforms, which would otherwise leave a rounding bias that
    /// slowly drifts the energy.
    pub fn kdv_rhs(&self, state: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let u = self.basis.synthesize(state)?;
        let u2: Vec<f64> = u.iter().map(|v| v * v).collect();
        check_finite(&u2)?;
        let proj = self.basis.analyze(&u2)?;
        let n = self.n();
        let (q, p) = state.split_at(n);
        let (cproj, sproj) = proj.split_at(n);
        let hb = 0.5 * self.beta;
        let qdot = (0..n)
            .map(|i| {
                let k = self.d[i];
                k * (self.dhat(i) * p[i] + hb * sproj[i])
            })
            .collect();
        let pdot = (0..n)
            .map(|i| {
                let k = self.d[i];
                -k * (self.dhat(i) * q[i] + hb * cproj[i])
            })
            .collect();
        Ok((qdot, pdot))
    }

    fn dhat(&self, i: usize) -> f64 {
        let k = self.d[i];
        -self.alpha * k * k + self.beta * self.u_hat0
    }

    /// `H = ½[yᵀ(I₂⊗D̂)y + (β/3)∫ũ³] + β(b-a)û₀³/6`, i.e. `½[-α‖Dy‖² + (β/3)∫u³]`
    /// expanded with `∫ũ = 0` and `∫ũ² = ‖y‖²`.
    pub fn hamiltonian_y(&self, state: &[f64]) -> f64 {
        let u = self.basis.synthesize(state).expect("layout-sized state");
        let cubic: Vec<f64> = u.iter().map(|v| v * v * v).collect();
        let n = self.n();
        let quad: f64 = state.iter().enumerate().map(|(i, y)| self.dhat(i % n) * y * y).sum();
        0.5 * (quad + self.beta / 3.0 * self.basis.integrate_samples(&cubic))
            + self.beta * self.basis.length() * self.u_hat0.powi(3) / 6.0
    }

    /// `∫u = (b-a)û₀`, constant by construction.
    pub fn mass(&self) -> f64 {
        self.basis.length() * self.u_hat0
    }

    /// `½∫u²`, the quadratic invariant of the PDE (not conserved exactly by
    /// the time discretization).
    pub fn l2_energy(&self, state: &[f64]) -> f64 {
        0.5 * (dot(state, state) + self.basis.length() * self.u_hat0 * self.u_hat0)
    }
}

impl SemiDiscreteSystem for KdvModel {
    fn form(&self) -> Form {
        Form::FirstOrder
    }

    fn dim(&self) -> usize {
        2 * self.n()
    }

    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        match self.kdv_rhs(y) {
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
        self.hamiltonian_y(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::finite_difference_gradient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn small(beta: f64, mean: f64) -> KdvModel {
        let basis = SpectralBasis::with_default_m(8, 0.0, 1.3, Layout::ZeroMean).unwrap();
        KdvModel::new(basis, -0.02, beta, mean).unwrap()
    }

    fn random(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-0.5..0.5)).collect()
    }

    #[test]
    fn zero_state_and_dispersive_part() {
        let model = small(-1.0, 0.0);
        let (a, b) = model.kdv_rhs(&[0.0; 16]).unwrap();
        assert!(a.iter().chain(&b).all(|v| *v == 0.0));
        assert_eq!(model.hamiltonian(&[0.0; 16]), 0.0);

        let lin = small(0.0, 0.7);
        let y = random(16, 1);
        let (qd, pd) = lin.kdv_rhs(&y).unwrap();
        let d = lin.basis().d();
        for i in 0..8 {
            let d3 = d[i].powi(3);
            assert!((qd[i] - lin.alpha() * -d3 * y[8 + i]).abs() < 1e-12);
            assert!((pd[i] - lin.alpha() * d3 * y[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn poisson_structure_consistency() {
        let model = small(-1.0, 0.4);
        for seed in 0..5 {
            let y = random(16, seed + 10);
            let grad = finite_difference_gradient(|x| model.hamiltonian_y(x), &y, 1e-6);
            let (qd, pd) = model.kdv_rhs(&y).unwrap();
            let d = model.basis().d();
            let scale = grad.iter().zip(d.iter().chain(d)).map(|(g, k)| (g * k).abs()).fold(0.0, f64::max);
            for i in 0..8 {
                assert!((qd[i] - d[i] * grad[8 + i]).abs() <= 1e-6 * scale);
                assert!((pd[i] + d[i] * grad[i]).abs() <= 1e-6 * scale);
            }
        }
    }

    #[test]
    fn linear_part_matches_jacobian_at_origin() {
        let model = small(-1.0, 0.4);
        let jac = model.jacobian(&[0.0; 16]);
        let diff = jac - model.linear_part().to_dense().unwrap();
        assert!(diff.amax() < 1e-6 * model.linear_part().to_dense().unwrap().amax());
    }

    #[test]
    fn cubic_integral_exact_under_refinement() {
        let wave = CnoidalWave::benchmark();
        let (coarse, y0) = KdvModel::cnoidal(&wave, 50, 151).unwrap();
        let fine = KdvModel::new(
            SpectralBasis::new(50, 0.0, 1.0, Layout::ZeroMean, 301).unwrap(),
            coarse.alpha(),
            coarse.beta(),
            coarse.u_hat0(),
        )
        .unwrap();
        let (h1, h2) = (coarse.hamiltonian(&y0), fine.hamiltonian(&y0));
        assert!((h1 - h2).abs() <= 1e-13 * h1.abs().max(1.0), "{h1} {h2}");
    }

    #[test]
    fn rejects_full_layout() {
        let basis = SpectralBasis::new(4, 0.0, 1.0, Layout::Full, 13).unwrap();
        assert!(KdvModel::new(basis, -1.0, -1.0, 0.0).is_err());
    }
}
