//! Truncated orthonormal Fourier basis on a periodic interval `[a, b]`.
//!
//! With `L = b - a` and `θ(x) = 2π(x - a)/L` the basis functions are
//! `c₀ = L^{-1/2}`, `c_j = √(2/L)·cos(jθ)`, `s_j = √(2/L)·sin(jθ)`.
//!
//! Two coefficient layouts are supported:
//!
//! - [`Layout::Full`]: `2N+1` entries ordered `(c₀, s₁, c₁, …, s_N, c_N)`;
//! - [`Layout::ZeroMean`]: `2N` entries, the cosine block `c₁..c_N` followed by
//!   the sine block `s₁..s_N`. The mean is carried separately.
//!
//! Integrals use the composite trapezoidal rule on `m` equispaced abscissae
//! `x_i = a + iL/m`, `i < m` (the right endpoint is identified with `a`), so all
//! weights equal `L/m`. Synthesis on the grid and the weighted projections
//! `Bᵀ·w·g` are evaluated with FFTs; [`SpectralBasis::basis_matrix`] provides the
//! equivalent dense matrix.

use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::DMatrix;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    Full,
    ZeroMean,
}

/// Orthonormal trigonometric basis plus its quadrature grid.
#[derive(Clone)]
pub struct SpectralBasis {
    n: usize,
    a: f64,
    b: f64,
    layout: Layout,
    m: usize,
    grid: Vec<f64>,
    d: Vec<f64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    matrix: OnceLock<DMatrix<f64>>,
}

impl fmt::Debug for SpectralBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralBasis")
            .field("n", &self.n)
            .field("a", &self.a)
            .field("b", &self.b)
            .field("layout", &self.layout)
            .field("m", &self.m)
            .finish()
    }
}

/// Cosine amplitudes `α_0..α_N` and sine amplitudes `β_0..β_N` (`β_0` unused)
/// of the orthonormal basis functions.
struct Modes {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl SpectralBasis {
    /// Basis with an explicit quadrature size. `m > 2N` is required so that
    /// the grid resolves every product of two basis functions.
    pub fn new(n: usize, a: f64, b: f64, layout: Layout, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("truncation index N must be at least 1".into()));
        }
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::InvalidArgument(format!("invalid interval [{a}, {b}]")));
        }
        if m <= 2 * n {
            return Err(Error::InvalidArgument(format!(
                "quadrature size m = {m} must exceed 2N = {}",
                2 * n
            )));
        }
        let len = b - a;
        let grid = (0..m).map(|i| a + i as f64 * len / m as f64).collect();
        let kappa = 2.0 * PI / len;
        let d = match layout {
            Layout::Full => {
                let mut d = Vec::with_capacity(2 * n + 1);
                d.push(0.0);
                for j in 1..=n {
                    d.push(kappa * j as f64);
                    d.push(kappa * j as f64);
                }
                d
            }
            Layout::ZeroMean => (1..=n).map(|j| kappa * j as f64).collect(),
        };
        let mut planner = FftPlanner::new();
        Ok(Self {
            n,
            a,
            b,
            layout,
            m,
            grid,
            d,
            forward: planner.plan_fft_forward(m),
            inverse: planner.plan_fft_inverse(m),
            matrix: OnceLock::new(),
        })
    }

    /// Basis with the default quadrature size: `4N` for the full layout and
    /// `3N+1` for the zero-mean layout (exact for cubic integrands).
    pub fn with_default_m(n: usize, a: f64, b: f64, layout: Layout) -> Result<Self> {
        Self::new(n, a, b, layout, default_quadrature_size(n, layout))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of coefficients: `2N+1` (full) or `2N` (zero-mean).
    pub fn size(&self) -> usize {
        match self.layout {
            Layout::Full => 2 * self.n + 1,
            Layout::ZeroMean => 2 * self.n,
        }
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// Uniform trapezoidal weight `(b-a)/m`.
    pub fn weight(&self) -> f64 {
        self.length() / self.m as f64
    }

    /// `2π/(b-a)`.
    pub fn kappa(&self) -> f64 {
        2.0 * PI / self.length()
    }

    /// Diagonal of `D`: `κ·(0, 1, 1, …, N, N)` (full) or `κ·(1, …, N)` (zero-mean).
    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Diagonal of `D²`, one entry per coefficient.
    pub fn d_squared(&self) -> Vec<f64> {
        match self.layout {
            Layout::Full => self.d.iter().map(|x| x * x).collect(),
            Layout::ZeroMean => self.d.iter().chain(&self.d).map(|x| x * x).collect(),
        }
    }

    /// `D̄ v` for the full layout: on each `(s_j, c_j)` pair `D̄` acts as
    /// `κj·[[0, 1], [-1, 0]]`, so that `u_x = (D̄ω)ᵀq`.
    pub fn apply_dbar(&self, v: &[f64]) -> Result<Vec<f64>> {
        if self.layout != Layout::Full {
            return Err(Error::InvalidArgument("D̄ is defined for the full layout only".into()));
        }
        self.check_len(v)?;
        let mut out = vec![0.0; v.len()];
        for j in 1..=self.n {
            let (si, ci) = (2 * j - 1, 2 * j);
            let kj = self.d[ci];
            out[si] = kj * v[ci];
            out[ci] = -kj * v[si];
        }
        Ok(out)
    }

    /// Dense `D̄` (full layout).
    pub fn dbar_matrix(&self) -> Result<DMatrix<f64>> {
        let size = self.size();
        let mut mat = DMatrix::zeros(size, size);
        let mut e = vec![0.0; size];
        for col in 0..size {
            e[col] = 1.0;
            let c = self.apply_dbar(&e)?;
            e[col] = 0.0;
            for (row, v) in c.into_iter().enumerate() {
                mat[(row, col)] = v;
            }
        }
        Ok(mat)
    }

    /// Value of the `index`-th basis function of the layout at `x`.
    pub fn basis_function(&self, index: usize, x: f64) -> f64 {
        let len = self.length();
        let theta = 2.0 * PI * (x - self.a) / len;
        let sc = (2.0 / len).sqrt();
        match self.layout {
            Layout::Full => {
                if index == 0 {
                    1.0 / len.sqrt()
                } else {
                    let j = (index + 1) / 2;
                    if index % 2 == 1 {
                        sc * (j as f64 * theta).sin()
                    } else {
                        sc * (j as f64 * theta).cos()
                    }
                }
            }
            Layout::ZeroMean => {
                if index < self.n {
                    sc * ((index + 1) as f64 * theta).cos()
                } else {
                    sc * ((index + 1 - self.n) as f64 * theta).sin()
                }
            }
        }
    }

    /// `m × size` matrix whose row `i` holds the basis functions at `x_i`,
    /// built on first use and cached.
    pub fn basis_matrix(&self) -> &DMatrix<f64> {
        self.matrix.get_or_init(|| {
            DMatrix::from_fn(self.m, self.size(), |i, j| self.basis_function(j, self.grid[i]))
        })
    }

    fn check_len(&self, coeffs: &[f64]) -> Result<()> {
        if coeffs.len() != self.size() {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector has length {}, layout needs {}",
                coeffs.len(),
                self.size()
            )));
        }
        Ok(())
    }

    fn to_modes(&self, coeffs: &[f64]) -> Modes {
        let n = self.n;
        let mut alpha = vec![0.0; n + 1];
        let mut beta = vec![0.0; n + 1];
        match self.layout {
            Layout::Full => {
                alpha[0] = coeffs[0];
                for j in 1..=n {
                    beta[j] = coeffs[2 * j - 1];
                    alpha[j] = coeffs[2 * j];
                }
            }
            Layout::ZeroMean => {
                alpha[1..].copy_from_slice(&coeffs[..n]);
                beta[1..].copy_from_slice(&coeffs[n..]);
            }
        }
        Modes { alpha, beta }
    }

    fn from_modes(&self, modes: &Modes) -> Vec<f64> {
        let n = self.n;
        match self.layout {
            Layout::Full => {
                let mut out = Vec::with_capacity(2 * n + 1);
                out.push(modes.alpha[0]);
                for j in 1..=n {
                    out.push(modes.beta[j]);
                    out.push(modes.alpha[j]);
                }
                out
            }
            Layout::ZeroMean => modes.alpha[1..].iter().chain(&modes.beta[1..]).copied().collect(),
        }
    }

    /// Hermitian spectrum of the grid samples of one expansion, scaled so
    /// that an unnormalised inverse DFT returns the samples.
    fn spectrum_into(&self, modes: &Modes, buf: &mut [Complex64]) {
        let len = self.length();
        let c0 = 1.0 / len.sqrt();
        let half = 0.5 * (2.0 / len).sqrt();
        let m = self.m;
        buf[0] += Complex64::new(modes.alpha[0] * c0, 0.0);
        for j in 1..=self.n {
            let z = Complex64::new(modes.alpha[j], -modes.beta[j]) * half;
            buf[j] += z;
            buf[m - j] += z.conj();
        }
    }

    /// Basis coefficients from the DFT of real grid samples. Averaging each
    /// bin with its conjugate partner keeps the rounding errors of the
    /// transform unbiased; reading one half only makes invariants drift.
    fn modes_from_spectrum(&self, buf: &[Complex64]) -> Modes {
        let len = self.length();
        let w = self.weight();
        let sc = w * (2.0 / len).sqrt();
        let n = self.n;
        let mut g = Modes {
            alpha: vec![0.0; n + 1],
            beta: vec![0.0; n + 1],
        };
        let m = self.m;
        g.alpha[0] = w / len.sqrt() * buf[0].re;
        for k in 1..=n {
            let z = (buf[k] + buf[m - k].conj()) * 0.5;
            g.alpha[k] = sc * z.re;
            g.beta[k] = -sc * z.im;
        }
        g
    }

    /// Grid samples `B·q` of the expansion (without any mean offset).
    pub fn synthesize(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        self.check_len(coeffs)?;
        let mut buf = vec![Complex64::new(0.0, 0.0); self.m];
        self.spectrum_into(&self.to_modes(coeffs), &mut buf);
        self.inverse.process(&mut buf);
        Ok(buf.iter().map(|z| z.re).collect())
    }

    /// Trapezoidal projections `Bᵀ·w·g` of grid samples `g` onto the basis.
    pub fn analyze(&self, samples: &[f64]) -> Result<Vec<f64>> {
        self.check_grid_len(samples)?;
        let mut buf: Vec<Complex64> = samples.iter().map(|&g| Complex64::new(g, 0.0)).collect();
        self.forward.process(&mut buf);
        Ok(self.from_modes(&self.modes_from_spectrum(&buf)))
    }

    fn check_grid_len(&self, samples: &[f64]) -> Result<()> {
        if samples.len() != self.m {
            return Err(Error::InvalidArgument(format!(
                "expected {} grid samples, got {}",
                self.m,
                samples.len()
            )));
        }
        Ok(())
    }

    /// Trapezoidal `∫ g` from grid samples.
    pub fn integrate_samples(&self, samples: &[f64]) -> f64 {
        self.weight() * samples.iter().sum::<f64>()
    }

    /// Coefficients `q_j ≈ ∫ basis_j · u` of a function.
    pub fn project(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let samples: Vec<f64> = self.grid.iter().map(|&x| u(x)).collect();
        self.analyze(&samples).expect("grid-sized samples")
    }

    /// Mean value `(b-a)^{-1}∫u`, the conserved offset of the zero-mean layout.
    pub fn mean(&self, u: impl Fn(f64) -> f64) -> f64 {
        self.grid.iter().map(|&x| u(x)).sum::<f64>() / self.m as f64
    }

    /// Pointwise values `offset + Σ q_j basis_j(x)` at arbitrary points.
    pub fn reconstruct(&self, coeffs: &[f64], offset: f64, points: &[f64]) -> Result<Vec<f64>> {
        self.check_len(coeffs)?;
        let modes = self.to_modes(coeffs);
        let len = self.length();
        let c0 = 1.0 / len.sqrt();
        let sc = (2.0 / len).sqrt();
        Ok(points
            .iter()
            .map(|&x| {
                let theta = 2.0 * PI * (x - self.a) / len;
                let mut u = offset + modes.alpha[0] * c0;
                for j in 1..=self.n {
                    let (s, c) = (j as f64 * theta).sin_cos();
                    u += sc * (modes.alpha[j] * c + modes.beta[j] * s);
                }
                u
            })
            .collect())
    }

    /// Values of the expansion on the refined grid `a + iL/(factor·m)`,
    /// `i < factor·m`, by zero-padded inverse FFT.
    pub fn synthesize_refined(&self, coeffs: &[f64], factor: usize) -> Result<Vec<f64>> {
        self.check_len(coeffs)?;
        if factor == 0 {
            return Err(Error::InvalidArgument("refinement factor must be positive".into()));
        }
        let big = factor * self.m;
        let len = self.length();
        let modes = self.to_modes(coeffs);
        let half = 0.5 * (2.0 / len).sqrt();
        let mut buf = vec![Complex64::new(0.0, 0.0); big];
        buf[0] = Complex64::new(modes.alpha[0] / len.sqrt(), 0.0);
        for j in 1..=self.n {
            let z = Complex64::new(modes.alpha[j], -modes.beta[j]) * half;
            buf[j] += z;
            buf[big - j] += z.conj();
        }
        FftPlanner::new().plan_fft_inverse(big).process(&mut buf);
        Ok(buf.iter().map(|z| z.re).collect())
    }

    /// The `factor·m` sampling abscissae used by [`synthesize_refined`](Self::synthesize_refined).
    pub fn refined_points(&self, factor: usize) -> Vec<f64> {
        let big = factor * self.m;
        (0..big).map(|i| self.a + i as f64 * self.length() / big as f64).collect()
    }
}

pub fn default_quadrature_size(n: usize, layout: Layout) -> usize {
    match layout {
        Layout::Full => 4 * n,
        Layout::ZeroMean => 3 * n + 1,
    }
}

/// Refinement factor of the grid on which reconstruction errors are sampled.
pub const DIAGNOSTIC_REFINEMENT: usize = 10;

/// One field entering [`e0_diagnostic`]: the exact function, its coefficient
/// vector and the constant offset added on reconstruction (the conserved
/// mean for the zero-mean layout, zero otherwise).
pub struct Field<'a> {
    pub exact: &'a dyn Fn(f64) -> f64,
    pub coeffs: &'a [f64],
    pub offset: f64,
}

/// `E₀`: largest max-norm reconstruction error over all fields, sampled on
/// `10m` uniform points.
pub fn e0_diagnostic(basis: &SpectralBasis, fields: &[Field<'_>]) -> Result<f64> {
    let points = basis.refined_points(DIAGNOSTIC_REFINEMENT);
    let mut worst = 0.0f64;
    for field in fields {
        let approx = basis.synthesize_refined(field.coeffs, DIAGNOSTIC_REFINEMENT)?;
        for (x, u) in points.iter().zip(approx) {
            worst = worst.max(((field.exact)(*x) - (u + field.offset)).abs());
        }
    }
    Ok(worst)
}

/// Default spacing between consecutive truncations in [`delta_h0_diagnostic`].
pub const DEFAULT_SCAN_STEP: usize = 10;

/// `ΔH₀ = |H₀(N) - H₀(N - scan_step)|` where `initial_hamiltonian(N)` builds
/// the semi-discrete model at truncation `N` and evaluates `H` at the
/// projected initial data.
pub fn delta_h0_diagnostic(
    initial_hamiltonian: impl Fn(usize) -> Result<f64>,
    n: usize,
    scan_step: usize,
) -> Result<f64> {
    if scan_step == 0 || n <= scan_step {
        return Err(Error::InvalidArgument(format!(
            "need N > scan_step > 0, got N = {n}, scan_step = {scan_step}"
        )));
    }
    Ok((initial_hamiltonian(n)? - initial_hamiltonian(n - scan_step)?).abs())
}
