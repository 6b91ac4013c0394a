use std::sync::Arc;

use super::{unit_weight, DiagonalForm, FunctionFn, Kernel};
use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::qcore::{Complex2x2, Quaternion, C64};

/// Largest supported pair count for the skew Gram–Schmidt construction.
pub const GSE_MAX_PAIRS: usize = 12;

/// Real polynomial, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Poly(c)
    }

    /// Degree of the highest non-zero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.0.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_deriv(&self, x: f64) -> f64 {
        self.0.iter().enumerate().skip(1).rev().fold(0.0, |acc, (k, &c)| acc * x + k as f64 * c)
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: f64, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n)
            .map(|k| self.0.get(k).copied().unwrap_or(0.0) + c * other.0.get(k).copied().unwrap_or(0.0))
            .collect())
    }

    pub fn scaled(&self, c: f64) -> Poly {
        Poly(self.0.iter().map(|v| v * c).collect())
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0)
    }
}

/// `∫ x^k e^{−x²} dx`: `Γ((k+1)/2)` for even `k`, zero for odd `k`.
fn gaussian_moment(k: usize) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    // Γ(j + 1/2) = √π (2j−1)!! / 2^j
    (0..k / 2).fold(std::f64::consts::PI.sqrt(), |acc, j| acc * (j as f64 + 0.5))
}

/// Skew product `⟨p, q⟩ = ∫ (p q′ − p′ q) e^{−x²} dx` from exact moments,
/// with `⟨x^a, x^b⟩ = (b − a) m_{a+b−1}`. Also returns the sum of absolute
/// contributions as a conditioning scale.
fn skew_with_scale(p: &Poly, q: &Poly) -> (f64, f64) {
    let (mut v, mut scale) = (0.0, 0.0);
    for (a, &pa) in p.0.iter().enumerate() {
        if pa == 0.0 {
            continue;
        }
        for (b, &qb) in q.0.iter().enumerate() {
            if qb == 0.0 || a == b || (a + b) % 2 == 0 {
                continue;
            }
            let t = pa * qb * (b as f64 - a as f64) * gaussian_moment(a + b - 1);
            v += t;
            scale += t.abs();
        }
    }
    (v, scale)
}

pub fn skew_inner(p: &Poly, q: &Poly) -> f64 {
    skew_with_scale(p, q).0
}

/// Skew-orthogonal polynomials `Q_0, …, Q_{2N−1}` for the weight `e^{−x²}`,
/// with `⟨Q_{2j}, Q_{2j+1}⟩ = 1`, all other pairings zero, and the
/// coefficient of `x^{2j}` in `Q_{2j+1}` equal to zero.
pub fn skew_orthogonal_polys(n: usize) -> Result<Vec<Poly>> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one pair".into()));
    }
    if n > GSE_MAX_PAIRS {
        return Err(Error::TooLarge { what: "skew Gram–Schmidt", n, limit: GSE_MAX_PAIRS });
    }
    let mut qs: Vec<Poly> = Vec::with_capacity(2 * n);
    for j in 0..n {
        let mut p = Poly::monomial(2 * j);
        let mut q = Poly::monomial(2 * j + 1);
        for k in 0..j {
            let (e, o) = (&qs[2 * k], &qs[2 * k + 1]);
            p = p.axpy(-skew_inner(&p, o), e).axpy(skew_inner(&p, e), o);
            q = q.axpy(-skew_inner(&q, o), e).axpy(skew_inner(&q, e), o);
        }
        let (c, scale) = skew_with_scale(&p, &q);
        if !(c.abs() > 1e-10 * scale) {
            return Err(Error::Breakdown { pair: j, pivot: c });
        }
        let s = c.abs().sqrt();
        let e = p.scaled(1.0 / s);
        let mut o = q.scaled(s / c);
        let lead = e.coeff(2 * j);
        o = o.axpy(-o.coeff(2 * j) / lead, &e);
        qs.push(e);
        qs.push(o);
    }
    // Conformance of the computed family.
    for k in 0..2 * n {
        for l in k + 1..2 * n {
            let expect = if k % 2 == 0 && l == k + 1 { 1.0 } else { 0.0 };
            let (v, scale) = skew_with_scale(&qs[k], &qs[l]);
            if (v - expect).abs() > 1e-8 * (1.0 + scale) {
                return Err(Error::Breakdown { pair: k / 2, pivot: v });
            }
        }
    }
    Ok(qs)
}

struct PairValues {
    e: f64,
    de: f64,
    o: f64,
    d_o: f64,
}

fn values(polys: &[Poly], x: f64) -> Vec<PairValues> {
    polys
        .chunks(2)
        .map(|pq| PairValues {
            e: pq[0].eval(x),
            de: pq[0].eval_deriv(x),
            o: pq[1].eval(x),
            d_o: pq[1].eval_deriv(x),
        })
        .collect()
}

fn c(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// The Gaussian symplectic kernel `K_N(x, y) = Σ_{k<N} χ_k*(x) χ_k(y)` on
/// the line with Lebesgue measure (the `√w` factors are part of the kernel).
pub fn gse(n: usize) -> Result<Kernel> {
    let polys = skew_orthogonal_polys(n)?;
    let mut k = gse_from_polys(polys)?;
    k.descriptor = format!("gse:N={n}");
    Ok(k)
}

/// The kernel assembled from any skew-orthonormal family `Q_0..Q_{2N−1}`.
pub fn gse_from_polys(polys: Vec<Poly>) -> Result<Kernel> {
    if polys.is_empty() || polys.len() % 2 != 0 {
        return Err(Error::InvalidArgument("need an even, non-empty family".into()));
    }
    let n = polys.len() / 2;
    let polys = Arc::new(polys);
    let pk = polys.clone();
    let eval = Arc::new(move |x: &Point, y: &Point| {
        let (Some(x), Some(y)) = (x.coord(), y.coord()) else {
            return Quaternion::ZERO;
        };
        let (vx, vy) = (values(&pk, x), values(&pk, y));
        let (mut s_xy, mut s_yx, mut d, mut i) = (0.0, 0.0, 0.0, 0.0);
        for (a, b) in vx.iter().zip(&vy) {
            s_xy += a.d_o * b.e - a.de * b.o;
            s_yx += b.d_o * a.e - b.de * a.o;
            d += -a.d_o * b.de + a.de * b.d_o;
            i += a.o * b.e - a.e * b.o;
        }
        let w = (-0.5 * (x * x + y * y)).exp();
        Quaternion::phi_inv(&Complex2x2::new(c(w * s_xy), c(w * d), c(w * i), c(w * s_yx)))
    });
    let functions: Vec<FunctionFn> = (0..n)
        .map(|k| {
            let p = polys.clone();
            Arc::new(move |x: &Point| {
                let t = x.coord().unwrap_or(0.0);
                let (e, o) = (&p[2 * k], &p[2 * k + 1]);
                let w = (-0.5 * t * t).exp();
                // χ_k*(x)
                Quaternion::phi_inv(&Complex2x2::new(
                    c(w * o.eval_deriv(t)),
                    c(w * e.eval_deriv(t)),
                    c(w * o.eval(t)),
                    c(w * e.eval(t)),
                ))
            }) as FunctionFn
        })
        .collect();
    let diag = DiagonalForm::new(vec![c(1.0); n], functions)?;
    Ok(Kernel::new(format!("gse-polys:N={n}"), Domain::Line, unit_weight(), eval).with_diagonal(diag))
}
