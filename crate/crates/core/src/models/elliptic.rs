//! Complete elliptic integral of the first kind and Jacobi elliptic functions.
//!
//! Both come from the same arithmetic–geometric mean sequence
//! `a₀ = 1, b₀ = √(1-m), c₀ = √m`. `K(m) = π/(2a_N)`, and `sn`, `cn` follow
//! from the descending Landen recursion on the amplitude
//! `φ_{n-1} = ½(φ_n + asin(c_n/a_n · sin φ_n))`, `φ_N = 2^N a_N z`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

fn check_modulus(m: f64) -> Result<()> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::InvalidArgument(format!("elliptic parameter m = {m} outside [0, 1)")));
    }
    Ok(())
}

struct Agm {
    a: Vec<f64>,
    c: Vec<f64>,
}

fn agm(m: f64) -> Agm {
    let mut a = vec![1.0];
    let mut b = (1.0 - m).sqrt();
    let mut c = vec![m.sqrt()];
    while c.last().unwrap().abs() > f64::EPSILON * a.last().unwrap() && a.len() < MAX_AGM_STEPS {
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    Agm { a, c }
}

/// `K(m) = ∫₀^{π/2} (1 - m sin²θ)^{-1/2} dθ`.
pub fn elliptic_k(m: f64) -> Result<f64> {
    check_modulus(m)?;
    Ok(0.5 * PI / agm(m).a.last().unwrap())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiValues {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// `sn(z|m)`, `cn(z|m)`, `dn(z|m)`; the argument is first reduced modulo
/// the real period `4K(m)`.
pub fn jacobi(z: f64, m: f64) -> Result<JacobiValues> {
    check_modulus(m)?;
    if !z.is_finite() {
        return Err(Error::InvalidArgument("non-finite argument".into()));
    }
    let seq = agm(m);
    let n = seq.a.len() - 1;
    let an = seq.a[n];
    let period = 2.0 * PI / an;
    let z = z - period * (z / period).round();

    let mut phi = 2f64.powi(n as i32) * an * z;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (seq.c[i] / seq.a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    Ok(JacobiValues {
        sn,
        cn,
        dn: (1.0 - m * sn * sn).sqrt(),
    })
}

pub fn jacobi_cn(z: f64, m: f64) -> Result<f64> {
    jacobi(z, m).map(|v| v.cn)
}

pub fn jacobi_sn(z: f64, m: f64) -> Result<f64> {
    jacobi(z, m).map(|v| v.sn)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Trapezoidal rule on the periodic integrand; converges geometrically.
    fn k_by_quadrature(m: f64) -> f64 {
        let n = 4000;
        let h = 2.0 * PI / n as f64;
        let total: f64 = (0..n)
            .map(|i| {
                let s = (i as f64 * h).sin();
                1.0 / (1.0 - m * s * s).sqrt()
            })
            .sum();
        total * h / 4.0
    }

    #[test]
    fn complete_integral_values() {
        assert!((elliptic_k(0.0).unwrap() - PI / 2.0).abs() < 1e-15);
        let k = elliptic_k(0.9).unwrap();
        assert!((k - 2.5780921133481732).abs() < 1e-14);
        for m in [0.1, 0.5, 0.9, 0.99] {
            let k = elliptic_k(m).unwrap();
            assert!((k - k_by_quadrature(m)).abs() < 1e-13 * k, "m = {m}");
        }
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
    }

    #[test]
    fn degenerate_modulus_is_trigonometric() {
        for z in [-7.3, -1.0, 0.0, 0.4, 2.0, 11.5] {
            let v = jacobi(z, 0.0).unwrap();
            assert!((v.cn - z.cos()).abs() < 1e-14);
            assert!((v.sn - z.sin()).abs() < 1e-14);
            assert!((v.dn - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn special_points() {
        let m = 0.9;
        let k = elliptic_k(m).unwrap();
        let v = jacobi(0.0, m).unwrap();
        assert_eq!((v.sn, v.cn, v.dn), (0.0, 1.0, 1.0));
        let v = jacobi(k, m).unwrap();
        assert!((v.sn - 1.0).abs() < 1e-14);
        assert!(v.cn.abs() < 1e-12, "{}", v.cn);
        assert!((v.dn - (1.0 - m).sqrt()).abs() < 1e-12);
        assert!((jacobi_cn(2.0 * k, m).unwrap() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn derivative_matches_sn_dn() {
        // d/dz cn = -sn·dn
        let m = 0.7;
        let h = 1e-5;
        for z in [0.1, 0.9, 2.3, -4.0] {
            let fd = (jacobi_cn(z + h, m).unwrap() - jacobi_cn(z - h, m).unwrap()) / (2.0 * h);
            let v = jacobi(z, m).unwrap();
            assert!((fd + v.sn * v.dn).abs() < 1e-9);
        }
    }

    proptest! {
        #[test]
        fn pythagorean_identities(z in -40.0f64..40.0, m in 0.0f64..0.999) {
            let v = jacobi(z, m).unwrap();
            prop_assert!((v.sn * v.sn + v.cn * v.cn - 1.0).abs() < 1e-13);
            prop_assert!((v.dn * v.dn + m * v.sn * v.sn - 1.0).abs() < 1e-13);
            prop_assert!(v.cn.abs() <= 1.0);
        }

        #[test]
        fn period_four_k(z in -5.0f64..5.0, m in 0.0f64..0.95) {
            let k = elliptic_k(m).unwrap();
            let a = jacobi_cn(z, m).unwrap();
            let b = jacobi_cn(z + 4.0 * k, m).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
