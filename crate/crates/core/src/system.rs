//! Abstract semi-discrete Hamiltonian systems.

use nalgebra::DMatrix;

/// Shape of the ODE the integrator advances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `ẏ = f(y)`; the state is `y` of length `dim`.
    FirstOrder,
    /// `q̈ = ∇U(q)`; the state is `(q, p)` stored as one slice of length `2·dim`.
    SecondOrder,
}

/// Constant matrix `L` with `rhs(x) = L x + g(x)` and `g` of moderate norm.
///
/// For first-order systems `L = A`; for special second-order systems
/// `L = -A²`. Only structured forms can back a blended-iteration preconditioner.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearPart {
    Diagonal(Vec<f64>),
    /// `[[diag(a11), diag(a12)], [diag(a21), diag(a22)]]` acting on `(u, v)`
    /// halves of the state.
    Blocks {
        a11: Vec<f64>,
        a12: Vec<f64>,
        a21: Vec<f64>,
        a22: Vec<f64>,
    },
    Unstructured,
}

impl LinearPart {
    pub fn zeros_diagonal(dim: usize) -> Self {
        LinearPart::Diagonal(vec![0.0; dim])
    }

    /// Dense `dim×dim` matrix, or `None` for [`LinearPart::Unstructured`].
    pub fn to_dense(&self) -> Option<DMatrix<f64>> {
        match self {
            LinearPart::Diagonal(d) => Some(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d))),
            LinearPart::Blocks { a11, a12, a21, a22 } => {
                let n = a11.len();
                let mut m = DMatrix::zeros(2 * n, 2 * n);
                for i in 0..n {
                    m[(i, i)] = a11[i];
                    m[(i, n + i)] = a12[i];
                    m[(n + i, i)] = a21[i];
                    m[(n + i, n + i)] = a22[i];
                }
                Some(m)
            }
            LinearPart::Unstructured => None,
        }
    }

    /// `L x`.
    pub fn apply(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            LinearPart::Diagonal(d) => Some(d.iter().zip(x).map(|(a, b)| a * b).collect()),
            LinearPart::Blocks { a11, a12, a21, a22 } => {
                let n = a11.len();
                let (u, v) = x.split_at(n);
                let mut out = vec![0.0; 2 * n];
                for i in 0..n {
                    out[i] = a11[i] * u[i] + a12[i] * v[i];
                    out[n + i] = a21[i] * u[i] + a22[i] * v[i];
                }
                Some(out)
            }
            LinearPart::Unstructured => None,
        }
    }
}

/// A finite-dimensional Hamiltonian system as seen by the integrator.
///
/// `rhs` must be a pure function of its input. For [`Form::FirstOrder`] it is
/// the vector field `f(y)`; for [`Form::SecondOrder`] it is the acceleration
/// `∇U(q)`. In both cases input and output have length [`dim`](Self::dim).
pub trait SemiDiscreteSystem: Send + Sync {
    fn form(&self) -> Form;

    fn dim(&self) -> usize;

    fn rhs(&self, x: &[f64], out: &mut [f64]);

    fn linear_part(&self) -> &LinearPart;

    /// Hamiltonian of the full state (`y`, or `q` followed by `p`).
    fn hamiltonian(&self, state: &[f64]) -> f64;

    fn invariant_names(&self) -> Vec<&'static str> {
        Vec::new()
    }

    fn invariants(&self, _state: &[f64]) -> Vec<f64> {
        Vec::new()
    }

    /// Jacobian of `rhs` at `x`; central differences unless overridden.
    fn jacobian(&self, x: &[f64]) -> DMatrix<f64> {
        finite_difference_jacobian(|v, out| self.rhs(v, out), x)
    }

    /// Length of the full state vector.
    fn state_len(&self) -> usize {
        match self.form() {
            Form::FirstOrder => self.dim(),
            Form::SecondOrder => 2 * self.dim(),
        }
    }
}

/// Central-difference Jacobian of `f` at `x`.
pub fn finite_difference_jacobian(f: impl Fn(&[f64], &mut [f64]), x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let mut jac = DMatrix::zeros(n, n);
    let mut xp = x.to_vec();
    let mut fp = vec![0.0; n];
    let mut fm = vec![0.0; n];
    for j in 0..n {
        let step = 1e-6 * (1.0 + x[j].abs());
        xp[j] = x[j] + step;
        f(&xp, &mut fp);
        xp[j] = x[j] - step;
        f(&xp, &mut fm);
        xp[j] = x[j];
        for i in 0..n {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * step);
        }
    }
    jac
}

/// Central-difference gradient of a scalar function.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], step: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|j| {
            xp[j] = x[j] + step;
            let fp = f(&xp);
            xp[j] = x[j] - step;
            let fm = f(&xp);
            xp[j] = x[j];
            (fp - fm) / (2.0 * step)
        })
        .collect()
}
