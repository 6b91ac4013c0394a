//! Quadrature rules for the one-dimensional domains.
//!
//! Weights always integrate against the Lebesgue (or counting) measure of
//! the domain. The Gauss–Hermite rule therefore carries `ω_k e^{x_k²}`,
//! computed in scaled form.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Point, SubDomain};
use crate::error::{Error, Result};

/// Default node count for the circle: trapezoid rule, exact for
/// trigonometric polynomials of degree below 512.
pub const CIRCLE_NODES: usize = 512;
/// Default node count for the line: Gauss–Hermite for weight `e^{−x²}`.
pub const LINE_NODES: usize = 80;
/// Node count used on sub-intervals.
pub const SUBDOMAIN_NODES: usize = 256;
/// Infinite ends of a line interval are clipped here before mapping.
const LINE_CLIP: f64 = 14.0;
/// Radial cutoff for Gaussian-weighted rules on ℂ and ℍ.
pub const RADIAL_CLIP: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<Point>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform trapezoid rule on `[−π, π)`.
    pub fn trapezoid_circle(n: usize) -> Self {
        let h = 2.0 * PI / n as f64;
        QuadratureRule {
            nodes: (0..n).map(|k| Point::Angle(-PI + h * k as f64)).collect(),
            weights: vec![h; n],
        }
    }

    /// Gauss–Hermite nodes with Lebesgue weights `ω_k e^{x_k²}`.
    pub fn gauss_hermite_line(n: usize) -> Self {
        let (x, w) = gauss_hermite(n);
        QuadratureRule { nodes: x.into_iter().map(Point::Real).collect(), weights: w }
    }

    /// Gauss–Legendre on `[a, b]`, nodes tagged as angles or reals.
    pub fn gauss_legendre(a: f64, b: f64, n: usize, angles: bool) -> Self {
        let (x, w) = gauss_legendre(n);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let nodes = x
            .iter()
            .map(|&t| {
                let v = mid + half * t;
                if angles {
                    Point::Angle(crate::domain::wrap_angle(v))
                } else {
                    Point::Real(v)
                }
            })
            .collect();
        QuadratureRule { nodes, weights: w.iter().map(|w| w * half).collect() }
    }

    /// Counting measure on `{0, …, n−1}`.
    pub fn finite(n: usize) -> Self {
        QuadratureRule { nodes: (0..n).map(Point::Index).collect(), weights: vec![1.0; n] }
    }

    /// Polar product rule on the disc `|z| < r_max`: Gauss–Legendre in the
    /// radius, trapezoid in the angle.
    pub fn complex_disc(r_max: f64, n_r: usize, n_angle: usize) -> Self {
        let (x, w) = gauss_legendre(n_r);
        let h = 2.0 * PI / n_angle as f64;
        let mut nodes = Vec::with_capacity(n_r * n_angle);
        let mut weights = Vec::with_capacity(n_r * n_angle);
        for (t, wt) in x.iter().zip(&w) {
            let r = 0.5 * r_max * (t + 1.0);
            for k in 0..n_angle {
                let a = h * k as f64;
                nodes.push(Point::Complex([r * a.cos(), r * a.sin()]));
                weights.push(0.5 * r_max * wt * r * h);
            }
        }
        QuadratureRule { nodes, weights }
    }

    /// Hyperspherical product rule on the ball `|q| < r_max` in ℍ ≅ ℝ⁴.
    ///
    /// `q = r (cos α + sin α (cos θ 𝐢 + sin θ cos ϕ 𝐣 + sin θ sin ϕ 𝐤))` with
    /// Gauss–Legendre in `r`, `α` and `cos θ` and the trapezoid rule in `ϕ`.
    pub fn quaternion_ball(r_max: f64, n_r: usize, n_alpha: usize, n_theta: usize, n_phi: usize) -> Self {
        let (xr, wr) = gauss_legendre(n_r);
        let (xa, wa) = gauss_legendre(n_alpha);
        let (xt, wt) = gauss_legendre(n_theta);
        let h = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(n_r * n_alpha * n_theta * n_phi);
        let mut weights = Vec::with_capacity(nodes.capacity());
        for (tr, w_r) in xr.iter().zip(&wr) {
            let r = 0.5 * r_max * (tr + 1.0);
            let w_r = 0.5 * r_max * w_r * r.powi(3);
            for (ta, w_a) in xa.iter().zip(&wa) {
                let a = 0.5 * PI * (ta + 1.0);
                let w_a = 0.5 * PI * w_a * a.sin().powi(2);
                for (ct, w_t) in xt.iter().zip(&wt) {
                    let st = (1.0 - ct * ct).sqrt();
                    for k in 0..n_phi {
                        let ph = h * k as f64;
                        let v = r * a.sin();
                        nodes.push(Point::Quat([r * a.cos(), v * ct, v * st * ph.cos(), v * st * ph.sin()]));
                        weights.push(w_r * w_a * w_t * h);
                    }
                }
            }
        }
        QuadratureRule { nodes, weights }
    }

    /// The default rule of a domain.
    pub fn native(domain: &Domain) -> Result<Self> {
        match domain {
            Domain::Circle => Ok(Self::trapezoid_circle(CIRCLE_NODES)),
            Domain::Line => Ok(Self::gauss_hermite_line(LINE_NODES)),
            Domain::Finite(n) => Ok(Self::finite(*n)),
            Domain::ComplexPlane => Ok(Self::complex_disc(RADIAL_CLIP, 64, 64)),
            Domain::QuaternionSpace => Ok(Self::quaternion_ball(RADIAL_CLIP, 64, 24, 12, 16)),
            Domain::QuaternionBall => Ok(Self::quaternion_ball(1.0, 24, 24, 12, 16)),
        }
    }

    /// A rule for `sub` inside `domain`: Gauss–Legendre on arcs and intervals,
    /// the native rule for the full domain, the index subset for finite
    /// spaces.
    pub fn for_subdomain(domain: &Domain, sub: &SubDomain) -> Result<Self> {
        sub.check_within(domain)?;
        match (domain, sub) {
            (_, SubDomain::Full) => Self::native(domain),
            (Domain::Circle, SubDomain::Arc { start, length }) => {
                if *length >= 2.0 * PI {
                    Ok(Self::trapezoid_circle(CIRCLE_NODES))
                } else {
                    Ok(Self::gauss_legendre(*start, start + length, SUBDOMAIN_NODES, true))
                }
            }
            (Domain::Line, SubDomain::Interval { lo, hi }) => {
                let (a, b) = (lo.max(-LINE_CLIP), hi.min(LINE_CLIP));
                if a >= b {
                    return Ok(QuadratureRule { nodes: vec![], weights: vec![] });
                }
                Ok(Self::gauss_legendre(a, b, 2 * SUBDOMAIN_NODES, false))
            }
            (Domain::Finite(_), SubDomain::Indices(ix)) => Ok(QuadratureRule {
                nodes: ix.iter().map(|&i| Point::Index(i)).collect(),
                weights: vec![1.0; ix.len()],
            }),
            _ => Err(Error::SubDomain(format!("{sub:?} in {domain:?}"))),
        }
    }

    /// `Σ w_k f(x_k)`.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T> + Default,
        F: FnMut(&Point) -> T,
    {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::default(), |acc, (p, &w)| acc + f(p) * w)
    }
}

/// Gauss–Legendre nodes and weights on `[−1, 1]` by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp;
        loop {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j as f64 + 1.0) * z * p2 - j as f64 * p3) / (j as f64 + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss–Hermite nodes for weight `e^{−x²}` with Lebesgue weights
/// `ω_k e^{x_k²}`, by Newton iteration on the orthonormal Hermite
/// recurrence.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..100 {
            // orthonormal Hermite functions scaled by e^{z²/2} to avoid overflow
            let (mut p1, mut p2) = (PIM4, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        // ω e^{z²} = 2 e^{z²} / pp²
        let scaled = (0.5 * z * z).exp() / pp;
        w[i] = 2.0 * scaled * scaled;
        w[n - 1 - i] = w[i];
    }
    x.reverse();
    w.reverse();
    (x, w)
}
