//! Closed-form solutions used as references for the benchmark problems.

use super::elliptic::{elliptic_k, jacobi};
use crate::error::{Error, Result};

/// Sine-Gordon breather `u = 4·atan(sech(x/γ)·sin(ωt)/√(γ²-1))`,
/// `ω = √(1-γ⁻²)`, solving `u_tt = u_xx - sin u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineGordonBreather {
    gamma: f64,
    omega: f64,
    amp: f64,
}

impl SineGordonBreather {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!("breather requires γ > 1, got {gamma}")));
        }
        Ok(Self {
            gamma,
            omega: (1.0 - 1.0 / (gamma * gamma)).sqrt(),
            amp: 1.0 / (gamma * gamma - 1.0).sqrt(),
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        let sech = 1.0 / (x / self.gamma).cosh();
        4.0 * (sech * (self.omega * t).sin() * self.amp).atan()
    }

    pub fn u_t(&self, x: f64, t: f64) -> f64 {
        let sech = 1.0 / (x / self.gamma).cosh();
        let (s, c) = (self.omega * t).sin_cos();
        let r = sech * s * self.amp;
        4.0 * sech * self.amp * self.omega * c / (1.0 + r * r)
    }
}

pub fn reference_sine_gordon(gamma: f64, x: f64, t: f64) -> Result<f64> {
    Ok(SineGordonBreather::new(gamma)?.u(x, t))
}

/// Travelling soliton `u + iv = sech(x-4t)·e^{i(2x-3t)}` of the focusing
/// equation `u_t = -v_xx - 2(u²+v²)v`, `v_t = u_xx + 2(u²+v²)u`.
pub fn reference_nls(x: f64, t: f64) -> (f64, f64) {
    let sech = 1.0 / (x - 4.0 * t).cosh();
    let (s, c) = (2.0 * x - 3.0 * t).sin_cos();
    (sech * c, sech * s)
}

/// Cnoidal wave `u = a·cn²(4K(m)(x - νt - x₀) | m)` of
/// `u_t + εu_xxx + uu_x = 0`, with `a = 192mεK²` and `ν = 64ε(2m-1)K²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnoidalWave {
    pub epsilon: f64,
    pub modulus: f64,
    pub x0: f64,
    k: f64,
    amplitude: f64,
    speed: f64,
}

impl CnoidalWave {
    pub fn new(epsilon: f64, modulus: f64, x0: f64) -> Result<Self> {
        let k = elliptic_k(modulus)?;
        Ok(Self {
            epsilon,
            modulus,
            x0,
            k,
            amplitude: 192.0 * modulus * epsilon * k * k,
            speed: 64.0 * epsilon * (2.0 * modulus - 1.0) * k * k,
        })
    }

    /// The benchmark parameters `ε = 10⁻², m = 0.9, x₀ = ½`.
    pub fn benchmark() -> Self {
        Self::new(1e-2, 0.9, 0.5).expect("valid benchmark parameters")
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn complete_integral(&self) -> f64 {
        self.k
    }

    pub fn u(&self, x: f64, t: f64) -> f64 {
        let z = 4.0 * self.k * (x - self.speed * t - self.x0);
        let cn = jacobi(z, self.modulus).expect("modulus validated on construction").cn;
        self.amplitude * cn * cn
    }
}

pub fn reference_kdv(wave: &CnoidalWave, x: f64, t: f64) -> f64 {
    wave.u(x, t)
}
