use std::f64::consts::PI;
use std::sync::Arc;

use super::{DiagonalForm, FunctionFn, Kernel, WeightFn};
use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::qcore::{Complex2x2, Quaternion, C64};

fn quat(p: &Point) -> Quaternion {
    p.as_quaternion().unwrap_or(Quaternion::ZERO)
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, j| a * j as f64)
}

/// `Σ_{k=0}^{n} c_k z^k (w*)^k`.
fn monomial_sum(coef: &[f64], z: Quaternion, w: Quaternion) -> Quaternion {
    let wc = w.conj();
    let (mut zk, mut wk) = (Quaternion::ONE, Quaternion::ONE);
    let mut acc = Quaternion::ZERO;
    for (k, &c) in coef.iter().enumerate() {
        if k > 0 {
            zk = zk * z;
            wk = wk * wc;
        }
        acc += zk * wk * c;
    }
    acc
}

fn monomial_functions(norms: &[f64]) -> Vec<FunctionFn> {
    norms
        .iter()
        .enumerate()
        .map(|(k, &c)| Arc::new(move |x: &Point| quat(x).powi(k as u32) * c) as FunctionFn)
        .collect()
}

/// Quaternion Ginibre kernel `Σ_{k=0}^{n} z^k (w*)^k / (k+1)!` on ℍ with
/// `dμ = π^{−2} e^{−|z|²} dm`.
pub fn ginibre_quaternion(n: usize) -> Result<Kernel> {
    let coef: Vec<f64> = (0..=n).map(|k| 1.0 / factorial(k + 1)).collect();
    let norms: Vec<f64> = coef.iter().map(|c| c.sqrt()).collect();
    let eval = Arc::new(move |x: &Point, y: &Point| monomial_sum(&coef, quat(x), quat(y)));
    let weight: WeightFn = Arc::new(|x: &Point| {
        let r2 = quat(x).norm_sqr().re;
        C64::new((-r2).exp() / (PI * PI), 0.0)
    });
    let diag = DiagonalForm::new(vec![C64::new(1.0, 0.0); n + 1], monomial_functions(&norms))?;
    Ok(Kernel::new(format!("ginibre-q:n={n}"), Domain::QuaternionSpace, weight, eval).with_diagonal(diag))
}

/// Quaternion Bergman kernel `Σ_{k=0}^{n} (k+2) z^k (w*)^k` on the unit
/// ball of ℍ with `dμ = π^{−2} dm`.
pub fn bergman_quaternion(n: usize) -> Result<Kernel> {
    let coef: Vec<f64> = (0..=n).map(|k| (k + 2) as f64).collect();
    let norms: Vec<f64> = coef.iter().map(|c| c.sqrt()).collect();
    let eval = Arc::new(move |x: &Point, y: &Point| monomial_sum(&coef, quat(x), quat(y)));
    let weight: WeightFn = Arc::new(|_: &Point| C64::new(1.0 / (PI * PI), 0.0));
    let diag = DiagonalForm::new(vec![C64::new(1.0, 0.0); n + 1], monomial_functions(&norms))?;
    Ok(Kernel::new(format!("bergman-q:n={n}"), Domain::QuaternionBall, weight, eval).with_diagonal(diag))
}

/// `φ_N(u, v) = (1/2π) Σ_{0≤i≤j≤N−1} (2^j j!)/(2^i i!) (u^{2i} v^{2j+1} − v^{2i} u^{2j+1}) / (2j+1)!`.
pub fn phi_n(n: usize, u: C64, v: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for j in 0..n {
        let inv_fact = 1.0 / factorial(2 * j + 1);
        let (u_odd, v_odd) = (u.powu(2 * j as u32 + 1), v.powu(2 * j as u32 + 1));
        let mut ratio = 1.0;
        for i in (0..=j).rev() {
            if i < j {
                ratio *= 2.0 * (i + 1) as f64;
            }
            let t = u.powu(2 * i as u32) * v_odd - v.powu(2 * i as u32) * u_odd;
            acc += t * (ratio * inv_fact);
        }
    }
    acc / (2.0 * PI)
}

/// Pfaffian Ginibre kernel on ℂ given through
/// `φ(K_N(z, w)) = ((φ_N(w, z̄), φ_N(w̄, z̄)), (φ_N(z, w), φ_N(z, w̄)))`
/// with the signed measure `e^{−|z|²} (z − z̄) dm(z)`.
pub fn pfaffian_ginibre_complex(n: usize) -> Result<Kernel> {
    if n == 0 {
        return Err(Error::InvalidArgument("pfaffian-ginibre-c needs N ≥ 1".into()));
    }
    let eval = Arc::new(move |x: &Point, y: &Point| {
        let (Some(z), Some(w)) = (x.as_complex(), y.as_complex()) else {
            return Quaternion::ZERO;
        };
        let m = Complex2x2::new(
            phi_n(n, w, z.conj()),
            phi_n(n, w.conj(), z.conj()),
            phi_n(n, z, w),
            phi_n(n, z, w.conj()),
        );
        Quaternion::phi_inv(&m)
    });
    let weight: WeightFn = Arc::new(|x: &Point| {
        let z = x.as_complex().unwrap_or_default();
        C64::new(0.0, 2.0 * z.im) * (-z.norm_sqr()).exp()
    });
    Ok(Kernel::new(format!("pfaffian-ginibre-c:N={n}"), Domain::ComplexPlane, weight, eval))
}
