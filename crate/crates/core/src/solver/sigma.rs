use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::system::LinearPart;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SigmaKind {
    Diagonal,
    TwoByTwoBlocks,
}

#[derive(Debug, Clone)]
enum SigmaData {
    Diagonal {
        sigma: Vec<f64>,
        inv: Vec<f64>,
    },
    /// Per-index 2×2 blocks `[[m11, m12], [m21, m22]]` of `Σ` and of `Σ^{-1}`.
    Blocks {
        sigma: [Vec<f64>; 4],
        inv: [Vec<f64>; 4],
    },
}

/// `Σ = I - t·L` for a structured linear part `L`, stored with its inverse.
///
/// Only diagonal vectors are kept, so applying `Σ^{-1}` costs `O(dim)`.
#[derive(Debug, Clone)]
pub struct SigmaOperator {
    data: SigmaData,
    scale: f64,
}

/// `Σ = I - hρ_s L` for first-order systems.
pub fn build_sigma_first(linear_part: &LinearPart, h: f64, rho: f64) -> Result<SigmaOperator> {
    build_sigma(linear_part, h * rho)
}

/// `Σ = I - h²ρ_s² L` for special second-order systems; with `L = -A²` this
/// is `I + h²ρ_s² A²`.
pub fn build_sigma_second(linear_part: &LinearPart, h: f64, rho: f64) -> Result<SigmaOperator> {
    build_sigma(linear_part, (h * rho).powi(2))
}

/// `Σ = I - scale·L`.
pub fn build_sigma(linear_part: &LinearPart, scale: f64) -> Result<SigmaOperator> {
    let data = match linear_part {
        LinearPart::Diagonal(d) => {
            let sigma: Vec<f64> = d.iter().map(|a| 1.0 - scale * a).collect();
            if sigma.iter().any(|&x| x == 0.0 || !x.is_finite()) {
                return Err(Error::SingularMatrix);
            }
            let inv = sigma.iter().map(|x| 1.0 / x).collect();
            SigmaData::Diagonal { sigma, inv }
        }
        LinearPart::Blocks { a11, a12, a21, a22 } => {
            let n = a11.len();
            let m11: Vec<f64> = a11.iter().map(|a| 1.0 - scale * a).collect();
            let m12: Vec<f64> = a12.iter().map(|a| -scale * a).collect();
            let m21: Vec<f64> = a21.iter().map(|a| -scale * a).collect();
            let m22: Vec<f64> = a22.iter().map(|a| 1.0 - scale * a).collect();
            let mut inv = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
            for i in 0..n {
                let det = m11[i] * m22[i] - m12[i] * m21[i];
                if det == 0.0 || !det.is_finite() {
                    return Err(Error::SingularMatrix);
                }
                inv[0][i] = m22[i] / det;
                inv[1][i] = -m12[i] / det;
                inv[2][i] = -m21[i] / det;
                inv[3][i] = m11[i] / det;
            }
            SigmaData::Blocks {
                sigma: [m11, m12, m21, m22],
                inv,
            }
        }
        LinearPart::Unstructured => return Err(Error::UnstructuredLinearPart),
    };
    Ok(SigmaOperator { data, scale })
}

fn apply_blocks(m: &[Vec<f64>; 4], x: &[f64], out: &mut [f64]) {
    let n = m[0].len();
    let (u, v) = x.split_at(n);
    let (ou, ov) = out.split_at_mut(n);
    for i in 0..n {
        ou[i] = m[0][i] * u[i] + m[1][i] * v[i];
        ov[i] = m[2][i] * u[i] + m[3][i] * v[i];
    }
}

impl SigmaOperator {
    pub fn kind(&self) -> SigmaKind {
        match self.data {
            SigmaData::Diagonal { .. } => SigmaKind::Diagonal,
            SigmaData::Blocks { .. } => SigmaKind::TwoByTwoBlocks,
        }
    }

    /// The factor `t` in `Σ = I - t·L`.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn dim(&self) -> usize {
        match &self.data {
            SigmaData::Diagonal { sigma, .. } => sigma.len(),
            SigmaData::Blocks { sigma, .. } => 2 * sigma[0].len(),
        }
    }

    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        match &self.data {
            SigmaData::Diagonal { sigma, .. } => {
                for ((o, a), b) in out.iter_mut().zip(sigma).zip(x) {
                    *o = a * b;
                }
            }
            SigmaData::Blocks { sigma, .. } => apply_blocks(sigma, x, out),
        }
    }

    pub fn apply_inverse(&self, x: &[f64], out: &mut [f64]) {
        match &self.data {
            SigmaData::Diagonal { inv, .. } => {
                for ((o, a), b) in out.iter_mut().zip(inv).zip(x) {
                    *o = a * b;
                }
            }
            SigmaData::Blocks { inv, .. } => apply_blocks(inv, x, out),
        }
    }

    /// Diagonal of `Σ` (diagonal kind only).
    pub fn diagonal(&self) -> Option<&[f64]> {
        match &self.data {
            SigmaData::Diagonal { sigma, .. } => Some(sigma),
            SigmaData::Blocks { .. } => None,
        }
    }

    /// The four diagonals `[i11, i12, i21, i22]` of `Σ^{-1}` (block kind only).
    pub fn inverse_blocks(&self) -> Option<&[Vec<f64>; 4]> {
        match &self.data {
            SigmaData::Blocks { inv, .. } => Some(inv),
            SigmaData::Diagonal { .. } => None,
        }
    }

    fn materialize(&self, inverse: bool) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![0.0; n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            if inverse {
                self.apply_inverse(&e, &mut col);
            } else {
                self.apply(&e, &mut col);
            }
            e[j] = 0.0;
            m.column_mut(j).copy_from_slice(&col);
        }
        m
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        self.materialize(false)
    }

    pub fn inverse_to_dense(&self) -> DMatrix<f64> {
        self.materialize(true)
    }
}
