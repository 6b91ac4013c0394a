use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::spectrum::restricted_spectrum;
use crate::domain::{Domain, SubDomain};
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::par::{map_indexed, Exec};
use crate::domain::Point;
use crate::qcore::C64;
use crate::qlinalg::{moore_dyson_via_pfaffian, QuaternionMatrix};
use crate::quadrature::QuadratureRule;

/// Relative size of the first term beyond the rank above which the
/// quadrature is declared under-resolved.
pub const UNDER_RESOLVED_TOL: f64 = 1e-6;
/// Upper bound on the number of node subsets visited.
pub const MAX_SUBSETS: f64 = 2e8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FredholmValue {
    pub value: C64,
    /// `terms[n-1]` is the order-`n` term including `scale^n`.
    pub terms: Vec<C64>,
    /// The order `r+1` term, zero for an exactly resolved rank-`r` kernel.
    pub check_term: C64,
    pub nodes: usize,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// A compact rule for Fredholm series of the shipped kernels.
///
/// The full circle uses `2r+2` trapezoid nodes (exact for trigonometric
/// integrands of degree `≤ 2r+1`), the full line `2r+4` Gauss–Hermite
/// nodes, finite spaces their points, and sub-arcs or sub-intervals
/// Gauss–Legendre rules sized by the rank and the length.
pub fn fredholm_rule(k: &Kernel) -> Result<QuadratureRule> {
    let r = k.rank().ok_or(Error::MissingDiagonalForm)?;
    match (k.domain(), k.support()) {
        (Domain::Circle, SubDomain::Full) => Ok(QuadratureRule::trapezoid_circle(2 * r + 2)),
        (Domain::Circle, SubDomain::Arc { start, length }) => {
            if *length >= 2.0 * PI {
                return Ok(QuadratureRule::trapezoid_circle(2 * r + 2));
            }
            let n = (1.5 * r as f64 * length).ceil() as usize + 12;
            Ok(QuadratureRule::gauss_legendre(*start, start + length, n, true))
        }
        (Domain::Line, SubDomain::Full) => {
            Ok(QuadratureRule::gauss_hermite_line(2 * r + 4))
        }
        (Domain::Line, SubDomain::Interval { lo, hi }) => {
            let (a, b) = (lo.max(-14.0), hi.min(14.0));
            Ok(QuadratureRule::gauss_legendre(a, b.max(a), 24 + 4 * r, false))
        }
        _ => k.quadrature(),
    }
}

/// `Det_M(I + s K) = 1 + Σ_n (s^n / n!) ∫ Det_M(K(x_i, x_j)) dμ^n`, the
/// series truncated at the rank `r` of `K`.
///
/// Each integral is a tensor quadrature; by symmetry of the integrand and
/// vanishing on coinciding nodes it reduces to a sum over strictly
/// increasing node tuples. The order `r+1` term is computed as a resolution
/// check.
pub fn fredholm_det(k: &Kernel, scale: C64, quad: &QuadratureRule) -> Result<FredholmValue> {
    fredholm_det_with(k, scale, quad, Exec::default())
}

pub fn fredholm_det_with(k: &Kernel, scale: C64, quad: &QuadratureRule, exec: Exec) -> Result<FredholmValue> {
    let r = k.rank().ok_or(Error::MissingDiagonalForm)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (x, &w) in quad.nodes.iter().zip(&quad.weights) {
        k.domain().check(x)?;
        if k.support().contains(x) {
            let c = k.weight(x) * w;
            if c != C64::new(0.0, 0.0) {
                nodes.push(*x);
                weights.push(c);
            }
        }
    }
    let m = nodes.len();
    let top = r + 1;
    if binomial(m, top.min(m)) * top as f64 > MAX_SUBSETS {
        return Err(Error::TooLarge { what: "Fredholm node subsets", n: m, limit: top });
    }
    let gram = QuaternionMatrix::from_fn(m, m, |a, b| k.eval_unchecked(&nodes[a], &nodes[b]));
    let tol = 1e-8 * (1.0 + gram.max_abs());

    let partial = map_indexed(m, exec, |first| -> Result<Vec<C64>> {
        let mut acc = vec![C64::new(0.0, 0.0); top];
        let mut chosen = vec![first];
        walk(&gram, &weights, tol, top, &mut chosen, weights[first], &mut acc)?;
        Ok(acc)
    });
    let mut sums = vec![C64::new(0.0, 0.0); top];
    for p in partial {
        for (s, v) in sums.iter_mut().zip(p?) {
            *s += v;
        }
    }
    let mut power = C64::new(1.0, 0.0);
    let terms: Vec<C64> = sums
        .iter()
        .map(|s| {
            power *= scale;
            power * s
        })
        .collect();
    let check_term = terms[r];
    let terms = terms[..r].to_vec();
    let value = terms.iter().fold(C64::new(1.0, 0.0), |a, t| a + t);
    let magnitude = 1.0 + terms.iter().map(|t| t.norm()).sum::<f64>();
    if check_term.norm() > UNDER_RESOLVED_TOL * magnitude {
        return Err(Error::UnderResolved { order: top, magnitude: check_term.norm() });
    }
    Ok(FredholmValue { value, terms, check_term, nodes: m })
}

fn walk(
    gram: &QuaternionMatrix,
    weights: &[C64],
    tol: f64,
    top: usize,
    chosen: &mut Vec<usize>,
    w: C64,
    acc: &mut [C64],
) -> Result<()> {
    let n = chosen.len();
    let sub = QuaternionMatrix::from_fn(n, n, |i, j| gram[(chosen[i], chosen[j])]);
    let det = if n == 1 { sub[(0, 0)].s } else { moore_dyson_via_pfaffian(&sub, tol)? };
    acc[n - 1] += w * det;
    if n == top {
        return Ok(());
    }
    let last = *chosen.last().expect("non-empty");
    for next in last + 1..gram.rows() {
        chosen.push(next);
        walk(gram, weights, tol, top, chosen, w * weights[next], acc)?;
        chosen.pop();
    }
    Ok(())
}

/// Both routes for `E e^{it 𝒩(D)}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharFunction {
    pub t: f64,
    /// `∏ (1 + (e^{it} − 1) λ_k)` over the restricted spectrum.
    pub product: C64,
    /// `Det_M(I + (e^{it} − 1) K_D)`.
    pub fredholm: C64,
    pub discrepancy: f64,
    pub spectrum: Vec<C64>,
}

/// Characteristic function of the number of points in `sub`, by the
/// eigenvalue product and by the Fredholm series.
pub fn char_function_count(k: &Kernel, sub: &SubDomain, t: f64) -> Result<CharFunction> {
    let spectrum = restricted_spectrum(k, sub)?;
    let s = C64::new(0.0, t).exp() - 1.0;
    let product = spectrum.iter().fold(C64::new(1.0, 0.0), |a, l| a * (1.0 + s * l));
    let restricted = k.restrict(sub)?;
    let quad = fredholm_rule(&restricted)?;
    let fredholm = fredholm_det(&restricted, s, &quad)?.value;
    Ok(CharFunction { t, product, fredholm, discrepancy: (product - fredholm).norm(), spectrum })
}

/// `E ∏ (1 + f(x_k)) = Det_M(I + √f(x) K(x, y) √f(y))` with the principal
/// square root.
pub fn expected_product(
    k: &Kernel,
    f: Arc<dyn Fn(&Point) -> C64 + Send + Sync>,
    quad: &QuadratureRule,
) -> Result<FredholmValue> {
    let sym = k.symmetrized(Arc::new(move |x| f(x).sqrt()));
    fredholm_det(&sym, C64::new(1.0, 0.0), quad)
}
