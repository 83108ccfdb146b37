//! Small test systems shared by the integration tests.

#![allow(dead_code)]

use hbvm::{BlendedConfig, Form, HbvmTableau, LinearPart, SemiDiscreteSystem, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `q̇ = p, ṗ = -V'(q)` in first-order form.
pub struct Oscillator {
    dv: fn(f64) -> f64,
    v: fn(f64) -> f64,
    lp: LinearPart,
}

fn free_particle_part() -> LinearPart {
    LinearPart::Blocks {
        a11: vec![0.0],
        a12: vec![1.0],
        a21: vec![0.0],
        a22: vec![0.0],
    }
}

impl Oscillator {
    pub fn pendulum() -> Self {
        Self {
            dv: f64::sin,
            v: |q| 1.0 - q.cos(),
            lp: free_particle_part(),
        }
    }

    pub fn quartic() -> Self {
        Self {
            dv: |q| q * q * q,
            v: |q| 0.25 * q.powi(4),
            lp: free_particle_part(),
        }
    }
}

impl SemiDiscreteSystem for Oscillator {
    fn form(&self) -> Form {
        Form::FirstOrder
    }
    fn dim(&self) -> usize {
        2
    }
    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        out[0] = y[1];
        out[1] = -(self.dv)(y[0]);
    }
    fn linear_part(&self) -> &LinearPart {
        &self.lp
    }
    fn hamiltonian(&self, y: &[f64]) -> f64 {
        0.5 * y[1] * y[1] + (self.v)(y[0])
    }
}

/// `ẏ = Ly + ε·g(y)` with a random structured `L` and a smooth coupling
/// `g_i = c_i sin(y_{i+1}) + e_i y_i²`.
pub struct RandomSemilinear {
    dim: usize,
    lp: LinearPart,
    c: Vec<f64>,
    e: Vec<f64>,
}

impl RandomSemilinear {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let half = rng.gen_range(1..=8);
        let dim = 2 * half;
        let lp = if rng.gen_bool(0.5) {
            LinearPart::Diagonal((0..dim).map(|_| rng.gen_range(-5.0..0.0)).collect())
        } else {
            let d: Vec<f64> = (0..half).map(|_| rng.gen_range(0.0..5.0)).collect();
            LinearPart::Blocks {
                a11: vec![0.0; half],
                a12: d.clone(),
                a21: d.iter().map(|v| -v).collect(),
                a22: vec![0.0; half],
            }
        };
        let c = (0..dim).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let e = (0..dim).map(|_| rng.gen_range(-0.2..0.2)).collect();
        Self { dim, lp, c, e }
    }

    pub fn initial_state(&self, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        (0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }
}

impl SemiDiscreteSystem for RandomSemilinear {
    fn form(&self) -> Form {
        Form::FirstOrder
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn rhs(&self, y: &[f64], out: &mut [f64]) {
        let lin = self.lp.apply(y).expect("structured linear part");
        for i in 0..self.dim {
            let next = y[(i + 1) % self.dim];
            out[i] = lin[i] + self.c[i] * next.sin() + self.e[i] * y[i] * y[i];
        }
    }
    fn linear_part(&self) -> &LinearPart {
        &self.lp
    }
    fn hamiltonian(&self, y: &[f64]) -> f64 {
        0.5 * y.iter().map(|v| v * v).sum::<f64>()
    }
}

pub fn tight() -> SolverConfig {
    SolverConfig::blended(BlendedConfig {
        tol_rel: 1e-15,
        tol_abs: 1e-16,
        max_iter: 500,
    })
}

/// One step of the s-stage Gauss collocation method, computed from its
/// Butcher matrix by fixed-point iteration on the stage derivatives.
pub fn gauss_collocation_step(sys: &dyn SemiDiscreteSystem, tableau: &HbvmTableau, y: &[f64], h: f64) -> Vec<f64> {
    let a = tableau.runge_kutta_matrix();
    let b = tableau.weights();
    let s = tableau.k();
    let dim = y.len();
    let mut k = vec![vec![0.0; dim]; s];
    let mut stage = vec![0.0; dim];
    for _ in 0..300 {
        let mut next = k.clone();
        for i in 0..s {
            stage.copy_from_slice(y);
            for (j, kj) in k.iter().enumerate() {
                for d in 0..dim {
                    stage[d] += h * a[(i, j)] * kj[d];
                }
            }
            sys.rhs(&stage, &mut next[i]);
        }
        k = next;
    }
    (0..dim)
        .map(|d| y[d] + h * (0..s).map(|i| b[i] * k[i][d]).sum::<f64>())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
