//! Correlation functions, Fredholm determinants and counting statistics of
//! Pfaffian point fields.

mod checks;
mod counting;
mod fredholm;
mod spectrum;

use serde::Serialize;

use crate::domain::Point;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::qlinalg::{moore_dyson_det, moore_dyson_via_pfaffian, CAYLEY_LIMIT};

pub use checks::{dyson_integration_check, reproducing_check, DysonReport, ReproducingForm, ReproducingReport};
pub use counting::{bernoulli_count_distribution, clt_diagnostic, kolmogorov_distance, CltReport, CltRow, CountDistribution};
pub use fredholm::{
    char_function_count, expected_product, fredholm_det, fredholm_det_with, fredholm_rule, CharFunction, FredholmValue,
};
pub use spectrum::{
    complete_positivity_check, diagonal_form_check, restricted_rule, random_configurations, restricted_spectrum, restricted_spectrum_with,
    DiagonalFormReport, PositivityReport,
};

/// Relative tolerance on the non-scalar part of a correlation.
pub const SCALAR_TOL: f64 = 1e-9;
/// Configurations up to this size are cross-checked with the Cayley
/// expansion.
pub const CAYLEY_CHECK: usize = 6;

/// `R_m(x₁, …, x_m)` and its diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Correlation {
    /// Real part of `Det_M` of the Gram matrix.
    pub value: f64,
    pub imag: f64,
    /// Largest non-scalar component of the Cayley expansion, or the
    /// self-duality residual of the Gram matrix for larger configurations,
    /// relative to `1 + |R_m|`.
    pub nonscalar_residual: f64,
}

/// `R_m = Det_M(K(x_i, x_j))` by the Pfaffian route.
pub fn correlation(k: &Kernel, points: &[Point]) -> Result<Correlation> {
    if points.len() > CAYLEY_LIMIT {
        return Err(Error::TooLarge { what: "correlation order", n: points.len(), limit: CAYLEY_LIMIT });
    }
    let g = k.gram(points)?;
    let scale = 1.0 + g.max_abs();
    let v = moore_dyson_via_pfaffian(&g, 1e-8 * scale)?;
    let residual = if points.len() <= CAYLEY_CHECK {
        let c = moore_dyson_det(&g)?;
        c.vector_max_abs().max((c.s - v).norm())
    } else {
        g.self_dual_residual()
    } / (1.0 + v.norm());
    if residual > SCALAR_TOL {
        return Err(Error::NonScalar { residual, tol: SCALAR_TOL });
    }
    Ok(Correlation { value: v.re, imag: v.im, nonscalar_residual: residual })
}

/// `R_m` without the scalarity cross-check.
pub fn correlation_value(k: &Kernel, points: &[Point]) -> Result<f64> {
    let g = k.gram(points)?;
    let scale = 1.0 + g.max_abs();
    Ok(moore_dyson_via_pfaffian(&g, 1e-8 * scale)?.re)
}
