use serde::Serialize;

use super::correlation_value;
use crate::domain::Point;
use crate::error::Result;
use crate::kernels::Kernel;
use crate::par::{map_indexed, Exec};
use crate::qcore::{Complex2x2, Quaternion, C64};
use crate::quadrature::QuadratureRule;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DysonReport {
    pub operation: &'static str,
    pub kernel: String,
    pub order: usize,
    /// `N = ∫ K(x, x) dμ`.
    pub total: f64,
    /// `∫ R_m dx_m` per probe.
    pub integrals: Vec<f64>,
    /// `(N − m + 1) R_{m−1}` per probe.
    pub predictions: Vec<f64>,
    pub max_relative_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Integrates `R_m(x₁, …, x_{m−1}, x)` over `x` for each probe and compares
/// with `(N − m + 1) R_{m−1}(x₁, …, x_{m−1})`.
pub fn dyson_integration_check(
    k: &Kernel,
    m: usize,
    quad: &QuadratureRule,
    probes: &[Vec<Point>],
    tol: f64,
) -> Result<DysonReport> {
    let weighted: Vec<(Point, f64, C64)> =
        quad.nodes.iter().zip(&quad.weights).map(|(x, &w)| (*x, w, k.weight(x))).collect();
    let total = weighted
        .iter()
        .map(|(x, w, mu)| (k.eval_unchecked(x, x).s * mu).re * w)
        .sum::<f64>();
    let mut integrals = Vec::with_capacity(probes.len());
    let mut predictions = Vec::with_capacity(probes.len());
    let mut worst: f64 = 0.0;
    for probe in probes {
        if probe.len() + 1 != m {
            return Err(crate::error::Error::Shape(format!("probe of size {} for order {m}", probe.len())));
        }
        let lower = if probe.is_empty() { 1.0 } else { correlation_value(k, probe)? };
        let terms = map_indexed(weighted.len(), Exec::default(), |i| -> Result<f64> {
            let (x, w, mu) = &weighted[i];
            let mut pts = probe.clone();
            pts.push(*x);
            Ok(correlation_value(k, &pts)? * mu.re * w)
        });
        let mut integral = 0.0;
        for t in terms {
            integral += t?;
        }
        let prediction = (total - m as f64 + 1.0) * lower;
        worst = worst.max((integral - prediction).abs() / prediction.abs().max(1e-12));
        integrals.push(integral);
        predictions.push(prediction);
    }
    Ok(DysonReport {
        operation: "dyson_integration_check",
        kernel: k.descriptor().to_string(),
        order: m,
        total,
        integrals,
        predictions,
        max_relative_deviation: worst,
        tolerance: tol,
        pass: worst <= tol,
    })
}

/// Which reproducing identity a kernel satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReproducingForm {
    /// `∫ K(x,y) K(y,z) dμ(y) = K(x,z)`.
    Projection,
    /// `φ(∫ K K) = φ(K) + E φ(K) − φ(K) E` with `E = diag(1, 0)`.
    Twisted,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReproducingReport {
    pub operation: &'static str,
    pub kernel: String,
    pub pairs: usize,
    pub projection_residual: f64,
    pub twisted_residual: f64,
    pub tolerance: f64,
    pub holds: Option<ReproducingForm>,
}

/// Evaluates both reproducing identities in the `2 × 2` representation.
pub fn reproducing_check(k: &Kernel, quad: &QuadratureRule, pairs: &[(Point, Point)], tol: f64) -> ReproducingReport {
    let e = Complex2x2::new(C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let (mut proj, mut twist): (f64, f64) = (0.0, 0.0);
    for (x, z) in pairs {
        let integral = quad.nodes.iter().zip(&quad.weights).fold(Quaternion::ZERO, |acc, (y, &w)| {
            acc + k.eval_unchecked(x, y) * k.eval_unchecked(y, z) * (k.weight(y) * w)
        });
        let kxz = k.eval_unchecked(x, z);
        let lhs = integral.phi();
        let target = kxz.phi();
        let scale = 1.0 + kxz.max_abs();
        proj = proj.max(lhs.max_abs_diff(&target) / scale);
        let twisted = target + e * target - target * e;
        twist = twist.max(lhs.max_abs_diff(&twisted) / scale);
    }
    let holds = if proj <= tol {
        Some(ReproducingForm::Projection)
    } else if twist <= tol {
        Some(ReproducingForm::Twisted)
    } else {
        None
    };
    ReproducingReport {
        operation: "reproducing_check",
        kernel: k.descriptor().to_string(),
        pairs: pairs.len(),
        projection_residual: proj,
        twisted_residual: twist,
        tolerance: tol,
        holds,
    }
}
