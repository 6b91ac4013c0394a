use std::f64::consts::PI;
use std::sync::Arc;

use super::{unit_weight, DiagonalForm, FunctionFn, Kernel};
use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::qcore::{circular_unit, Quaternion, C64};
use crate::qlinalg::QuaternionMatrix;

/// `σ_N4(θ) = (1/2π) Σ_{p=1/2}^{N−1/2} (cos pθ + a_p sin pθ)` by direct
/// summation over half-integers.
pub fn sigma_n4(n: usize, theta: f64) -> Quaternion {
    let (mut c, mut xi, mut yj) = (0.0, 0.0, 0.0);
    for k in 0..n {
        let p = k as f64 + 0.5;
        let (s, co) = (p * theta).sin_cos();
        c += co;
        xi += s * (p * p - 1.0) / (2.0 * p);
        yj += s * (p * p + 1.0) / (2.0 * p);
    }
    let f = 1.0 / (2.0 * PI);
    Quaternion::new(C64::new(c * f, 0.0), C64::new(0.0, xi * f), C64::new(yj * f, 0.0), C64::new(0.0, 0.0))
}

/// The circular symplectic kernel `K(θ, θ′) = σ_N4(θ − θ′)` on the circle
/// with Lebesgue measure, with diagonal form
/// `u_p(θ) = (cos pθ + a_p sin pθ)/√(2π)`, `λ_p = 1`.
pub fn circular_symplectic(n: usize) -> Result<Kernel> {
    if n == 0 {
        return Err(Error::InvalidArgument("cse needs N ≥ 1".into()));
    }
    let eval = Arc::new(move |x: &Point, y: &Point| match (x, y) {
        (Point::Angle(a), Point::Angle(b)) => sigma_n4(n, a - b),
        _ => Quaternion::ZERO,
    });
    let norm = 1.0 / (2.0 * PI).sqrt();
    let functions: Vec<FunctionFn> = (0..n)
        .map(|k| {
            let p = k as f64 + 0.5;
            let a = circular_unit(p);
            Arc::new(move |x: &Point| {
                let t = x.coord().unwrap_or(0.0);
                let (s, c) = (p * t).sin_cos();
                (Quaternion::from_real(c) + a * s) * norm
            }) as FunctionFn
        })
        .collect();
    let diag = DiagonalForm::new(vec![C64::new(1.0, 0.0); n], functions)?;
    Ok(Kernel::new(format!("cse:N={n}"), Domain::Circle, unit_weight(), eval).with_diagonal(diag))
}

/// Real basis `(π^{-1/2} cos pθ, π^{-1/2} sin pθ)_{p = 1/2, …, N−1/2}`.
pub fn cse_basis(n: usize, theta: f64) -> Vec<f64> {
    let norm = 1.0 / PI.sqrt();
    (0..n)
        .flat_map(|k| {
            let (s, c) = ((k as f64 + 0.5) * theta).sin_cos();
            [c * norm, s * norm]
        })
        .collect()
}

/// Block-diagonal representation of `σ_N4` in the basis of [`cse_basis`].
#[derive(Clone, Debug)]
pub struct CseBlockMatrix {
    /// `2N×2N`, blocks `½((1, a_p), (−a_p, 1))`.
    pub matrix: QuaternionMatrix,
    /// Columns `v_p` with `v_p* = (1/√2)(0, …, 0, 1, a_p, 0, …, 0)`; the matrix is
    /// `Σ v_p v_p*`.
    pub factors: Vec<QuaternionMatrix>,
}

impl CseBlockMatrix {
    /// `f(θ′)ᵀ K f(θ)`, which equals `σ_N4(θ − θ′)`.
    pub fn eval(&self, theta: f64, theta_prime: f64) -> Quaternion {
        let n = self.matrix.rows() / 2;
        let f = cse_basis(n, theta);
        let g = cse_basis(n, theta_prime);
        let mut acc = Quaternion::ZERO;
        for k in 0..n {
            for a in 0..2 {
                for b in 0..2 {
                    acc += self.matrix[(2 * k + a, 2 * k + b)] * (g[2 * k + a] * f[2 * k + b]);
                }
            }
        }
        acc
    }
}

pub fn circular_symplectic_block_matrix(n: usize) -> Result<CseBlockMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("cse needs N ≥ 1".into()));
    }
    let mut m = QuaternionMatrix::zeros(2 * n, 2 * n);
    let mut factors = Vec::with_capacity(n);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for k in 0..n {
        let a = circular_unit(k as f64 + 0.5);
        m[(2 * k, 2 * k)] = Quaternion::from_real(0.5);
        m[(2 * k, 2 * k + 1)] = a * 0.5;
        m[(2 * k + 1, 2 * k)] = -a * 0.5;
        m[(2 * k + 1, 2 * k + 1)] = Quaternion::from_real(0.5);
        let mut v = QuaternionMatrix::zeros(2 * n, 1);
        v[(2 * k, 0)] = Quaternion::from_real(h);
        v[(2 * k + 1, 0)] = a.conj() * h;
        factors.push(v);
    }
    Ok(CseBlockMatrix { matrix: m, factors })
}
