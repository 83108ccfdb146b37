//! Shifted orthonormal Legendre polynomials on `[0, 1]`, Gauss-Legendre
//! quadrature and the HBVM(k,s) tableau.
//!
//! The polynomials satisfy `∫_0^1 P_i P_j = δ_ij` with positive leading
//! coefficient, i.e. `P_j(c) = √(2j+1) L_j(2c-1)` where `L_j` is the classical
//! Legendre polynomial on `[-1, 1]`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default upper bound on the number of quadrature nodes and on the stage degree.
pub const DEFAULT_MAX_ORDER: usize = 64;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// Classical Legendre pair `(L_n(x), L_{n-1}(x))` by the three-term recurrence.
/// For `n = 0` the second entry is 0.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * x * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Shifted orthonormal Legendre polynomial `P_j(c)`.
pub fn legendre_eval(j: usize, c: f64) -> f64 {
    let (l, _) = legendre_pair(j, 2.0 * c - 1.0);
    (2.0 * j as f64 + 1.0).sqrt() * l
}

/// Values `P_0(c), ..., P_{count-1}(c)` in one recurrence sweep.
pub fn legendre_values(count: usize, c: f64) -> Vec<f64> {
    let x = 2.0 * c - 1.0;
    let mut out = Vec::with_capacity(count);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..count {
        let jf = j as f64;
        out.push((2.0 * jf + 1.0).sqrt() * cur);
        let next = ((2.0 * jf + 1.0) * x * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    out
}

/// `∫_0^c P_j(τ) dτ`, evaluated in closed form.
///
/// Uses `∫ L_j = (L_{j+1} - L_{j-1}) / (2j+1)`; the lower limit contributes
/// nothing for `j ≥ 1` because `L_{j+1}(-1) = L_{j-1}(-1)`.
pub fn legendre_integral(j: usize, c: f64) -> f64 {
    if j == 0 {
        return c;
    }
    let x = 2.0 * c - 1.0;
    let jf = j as f64;
    let (l_j, l_prev) = legendre_pair(j, x);
    let l_next = ((2.0 * jf + 1.0) * x * l_j - jf * l_prev) / (jf + 1.0);
    (l_next - l_prev) / (2.0 * (2.0 * jf + 1.0).sqrt())
}

/// Gauss-Legendre rule on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn k(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes `0 < c_1 < ... < c_k < 1`.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `Σ_ℓ b_ℓ g(c_ℓ)`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&c, &b)| b * g(c)).sum()
    }
}

/// Gauss-Legendre rule with `k` nodes on `(0, 1)`, `1 ≤ k ≤ 64`.
pub fn gauss_rule(k: usize) -> Result<QuadratureRule> {
    gauss_rule_with_limit(k, DEFAULT_MAX_ORDER)
}

/// As [`gauss_rule`], with a caller-supplied maximum `k`.
pub fn gauss_rule_with_limit(k: usize, max_k: usize) -> Result<QuadratureRule> {
    if k == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    if k > max_k {
        return Err(Error::InvalidArgument(format!(
            "k = {k} exceeds the configured maximum {max_k}"
        )));
    }

    // Roots of L_k in (-1, 1), computed for the upper half and mirrored.
    let mut roots = vec![0.0; k];
    let kf = k as f64;
    let half = k.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        for _ in 0..NEWTON_MAX_ITER {
            let (l, l_prev) = legendre_pair(k, x);
            let dl = kf * (x * l - l_prev) / (x * x - 1.0);
            let dx = l / dl;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                break;
            }
        }
        roots[k - 1 - i] = x;
        roots[i] = -x;
    }
    if k % 2 == 1 {
        roots[k / 2] = 0.0;
    }

    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for &x in &roots {
        let (l, l_prev) = legendre_pair(k, x);
        let dl = kf * (x * l - l_prev) / (x * x - 1.0);
        nodes.push(0.5 * (1.0 + x));
        weights.push(1.0 / ((1.0 - x * x) * dl * dl));
    }
    Ok(QuadratureRule { nodes, weights })
}

/// `ξ_i = (2√|4i²-1|)^{-1}`.
pub fn xi(i: usize) -> f64 {
    let i = i as f64;
    1.0 / (2.0 * (4.0 * i * i - 1.0).abs().sqrt())
}

/// Closed tridiagonal form of `X_s`: diagonal `(ξ_0, 0, ..., 0)`, subdiagonal
/// `ξ_i`, superdiagonal `-ξ_i`.
pub fn xs_closed_form(s: usize) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(s, s);
    if s > 0 {
        x[(0, 0)] = xi(0);
    }
    for i in 1..s {
        x[(i, i - 1)] = xi(i);
        x[(i - 1, i)] = -xi(i);
    }
    x
}

/// All matrices defining an HBVM(k,s) method.
#[derive(Debug, Clone)]
pub struct HbvmTableau {
    k: usize,
    s: usize,
    rule: QuadratureRule,
    /// `k×s`, entries `P_j(c_i)`.
    p: DMatrix<f64>,
    /// `k×s`, entries `∫_0^{c_i} P_j`.
    i: DMatrix<f64>,
    xs: DMatrix<f64>,
    xi: Vec<f64>,
    rho: f64,
    /// `s×k`, `P_sᵀ Ω`.
    pt_omega: DMatrix<f64>,
    /// `k×s`, `I_s X_s`.
    i_xs: DMatrix<f64>,
    /// `ρ_s X_s^{-1}`.
    blend_first: DMatrix<f64>,
    /// `ρ_s² X_s^{-2}`.
    blend_second: DMatrix<f64>,
}

/// Assemble the HBVM(k,s) tableau, `1 ≤ s ≤ k ≤ 64`.
pub fn build_tableau(k: usize, s: usize) -> Result<HbvmTableau> {
    build_tableau_with_limit(k, s, DEFAULT_MAX_ORDER)
}

pub fn build_tableau_with_limit(k: usize, s: usize, max_order: usize) -> Result<HbvmTableau> {
    if s == 0 {
        return Err(Error::InvalidArgument("stage degree s must be at least 1".into()));
    }
    if k < s {
        return Err(Error::InvalidArgument(format!("HBVM(k,s) requires k >= s, got k = {k}, s = {s}")));
    }
    if s > max_order {
        return Err(Error::InvalidArgument(format!(
            "s = {s} exceeds the configured maximum {max_order}"
        )));
    }
    let rule = gauss_rule_with_limit(k, max_order)?;

    let mut p = DMatrix::zeros(k, s);
    let mut i_mat = DMatrix::zeros(k, s);
    for (row, &c) in rule.nodes().iter().enumerate() {
        let vals = legendre_values(s, c);
        for j in 0..s {
            p[(row, j)] = vals[j];
            i_mat[(row, j)] = legendre_integral(j, c);
        }
    }
    let mut pt_omega = p.transpose();
    for (col, &b) in rule.weights().iter().enumerate() {
        pt_omega.column_mut(col).scale_mut(b);
    }

    let xs = xs_closed_form(s);
    let xi_vals: Vec<f64> = (0..s).map(xi).collect();
    let rho = xs
        .complex_eigenvalues()
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min);
    let xs_inv = xs.clone().try_inverse().ok_or(Error::SingularMatrix)?;
    let blend_first = &xs_inv * rho;
    let blend_second = &xs_inv * &xs_inv * (rho * rho);
    let i_xs = &i_mat * &xs;

    Ok(HbvmTableau {
        k,
        s,
        rule,
        p,
        i: i_mat,
        xs,
        xi: xi_vals,
        rho,
        pt_omega,
        i_xs,
        blend_first,
        blend_second,
    })
}

impl HbvmTableau {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    /// Abscissae `c`.
    pub fn nodes(&self) -> &[f64] {
        self.rule.nodes()
    }

    /// Weights `b` (the diagonal of `Ω`).
    pub fn weights(&self) -> &[f64] {
        self.rule.weights()
    }

    pub fn p_s(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn i_s(&self) -> &DMatrix<f64> {
        &self.i
    }

    pub fn omega(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(self.weights()))
    }

    pub fn x_s(&self) -> &DMatrix<f64> {
        &self.xs
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Minimum eigenvalue modulus of `X_s`.
    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn pt_omega(&self) -> &DMatrix<f64> {
        &self.pt_omega
    }

    pub fn i_xs(&self) -> &DMatrix<f64> {
        &self.i_xs
    }

    pub fn blend_first(&self) -> &DMatrix<f64> {
        &self.blend_first
    }

    pub fn blend_second(&self) -> &DMatrix<f64> {
        &self.blend_second
    }

    /// `P_sᵀ Ω I_s`, assembled from the quadrature data rather than the closed form.
    pub fn assembled_x_s(&self) -> DMatrix<f64> {
        &self.pt_omega * &self.i
    }

    /// Butcher matrix `I_s P_sᵀ Ω` of the equivalent k-stage Runge-Kutta method.
    pub fn runge_kutta_matrix(&self) -> DMatrix<f64> {
        &self.i * &self.pt_omega
    }
}
