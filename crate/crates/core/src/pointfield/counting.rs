use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use super::spectrum::{restricted_spectrum, SPECTRUM_TOL};
use crate::domain::SubDomain;
use crate::error::{Error, Result};
use crate::kernels::Kernel;
use crate::qcore::C64;

/// Exact law of `ξ₁ + … + ξ_r` for independent `ξ_k ~ Bernoulli(λ_k)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountDistribution {
    pub eigenvalues: Vec<f64>,
    /// `pmf[j] = P(𝒩 = j)`, `j = 0..=r`.
    pub pmf: Vec<f64>,
    /// `|Σ pmf − 1|` before renormalization.
    pub normalization_defect: f64,
}

fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for v in values {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

impl CountDistribution {
    /// Accepts eigenvalues with `|Im λ| ≤ tol` and `Re λ ∈ [−tol, 1 + tol]`,
    /// clamped into `[0, 1]`.
    pub fn from_spectrum(spectrum: &[C64], tol: f64) -> Result<Self> {
        let mut eigenvalues = Vec::with_capacity(spectrum.len());
        for l in spectrum {
            if l.im.abs() > tol || l.re < -tol || l.re > 1.0 + tol {
                return Err(Error::EigenvalueRange(format!("{l} is not a probability")));
            }
            eigenvalues.push(l.re.clamp(0.0, 1.0));
        }
        Ok(Self::from_probabilities(eigenvalues))
    }

    fn from_probabilities(eigenvalues: Vec<f64>) -> Self {
        let mut pmf: Vec<f64> = vec![1.0];
        for &p in &eigenvalues {
            let mut next = vec![0.0; pmf.len() + 1];
            for (j, &q) in pmf.iter().enumerate() {
                next[j] = q.mul_add(1.0 - p, next[j]);
                next[j + 1] = q.mul_add(p, next[j + 1]);
            }
            pmf = next;
        }
        let total = compensated_sum(pmf.iter().copied());
        for v in pmf.iter_mut() {
            *v /= total;
        }
        CountDistribution { eigenvalues, pmf, normalization_defect: (total - 1.0).abs() }
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.eigenvalues.iter().copied())
    }

    pub fn variance(&self) -> f64 {
        compensated_sum(self.eigenvalues.iter().map(|l| l * (1.0 - l)))
    }

    /// `Σ_j pmf[j] e^{ijt}`.
    pub fn char_function(&self, t: f64) -> C64 {
        let re = compensated_sum(self.pmf.iter().enumerate().map(|(j, p)| p * (j as f64 * t).cos()));
        let im = compensated_sum(self.pmf.iter().enumerate().map(|(j, p)| p * (j as f64 * t).sin()));
        C64::new(re, im)
    }

    /// `P(𝒩 ≤ j)`.
    pub fn cdf(&self, j: usize) -> f64 {
        compensated_sum(self.pmf.iter().take(j + 1).copied()).min(1.0)
    }
}

/// Law of the number of points for a kernel with a diagonal form, from its
/// operator spectrum.
pub fn bernoulli_count_distribution(k: &Kernel) -> Result<CountDistribution> {
    CountDistribution::from_spectrum(&restricted_spectrum(k, &SubDomain::Full)?, SPECTRUM_TOL)
}

/// `sup_x |P((𝒩 − E𝒩)/σ ≤ x) − Φ(x)|`.
pub fn kolmogorov_distance(dist: &CountDistribution) -> Result<f64> {
    let var = dist.variance();
    if var <= 0.0 {
        return Err(Error::ZeroVariance);
    }
    let (mu, sigma) = (dist.mean(), var.sqrt());
    let normal = Normal::standard();
    let mut below = 0.0;
    let mut worst: f64 = 0.0;
    for (j, p) in dist.pmf.iter().enumerate() {
        let phi = normal.cdf((j as f64 - mu) / sigma);
        let above = (below + p).min(1.0);
        worst = worst.max((phi - below).abs()).max((above - phi).abs());
        below = above;
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltRow {
    pub label: String,
    pub rank: usize,
    pub mean: f64,
    pub variance: f64,
    pub kolmogorov: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltReport {
    pub operation: &'static str,
    pub rows: Vec<CltRow>,
    pub tie_tolerance: f64,
    /// Distances are non-increasing along the rows, up to the tie tolerance.
    pub monotone: bool,
}

/// Kolmogorov distances of the standardized counts for a sequence of
/// spectra.
pub fn clt_diagnostic(spectra: &[(String, Vec<C64>)], tie_tolerance: f64) -> Result<CltReport> {
    let mut rows = Vec::with_capacity(spectra.len());
    for (label, spectrum) in spectra {
        let dist = CountDistribution::from_spectrum(spectrum, SPECTRUM_TOL)?;
        rows.push(CltRow {
            label: label.clone(),
            rank: spectrum.len(),
            mean: dist.mean(),
            variance: dist.variance(),
            kolmogorov: kolmogorov_distance(&dist)?,
        });
    }
    let monotone = rows.windows(2).all(|w| w[1].kolmogorov <= w[0].kolmogorov + tie_tolerance);
    Ok(CltReport { operation: "clt_diagnostic", rows, tie_tolerance, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{circular_symplectic, gse};
    use crate::pointfield::{char_function_count, correlation_value, restricted_rule};
    use std::f64::consts::PI;

    fn real(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&x| C64::new(x, 0.0)).collect()
    }

    #[test]
    fn projection_is_a_point_mass() {
        let d = bernoulli_count_distribution(&circular_symplectic(3).unwrap()).unwrap();
        assert!((d.pmf[3] - 1.0).abs() < 1e-9 && d.pmf[..3].iter().all(|p| p.abs() < 1e-9));
        let g = bernoulli_count_distribution(&gse(2).unwrap()).unwrap();
        assert!((g.mean() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn two_fair_coins() {
        let d = CountDistribution::from_spectrum(&real(&[0.5, 0.5]), 0.0).unwrap();
        assert_eq!(d.pmf, vec![0.25, 0.5, 0.25]);
        assert_eq!(d.mean(), 1.0);
        assert_eq!(d.variance(), 0.5);
        let single = CountDistribution::from_spectrum(&real(&[0.5]), 0.0).unwrap();
        assert!(single.char_function(PI).norm() < 1e-15);
    }

    #[test]
    fn pmf_char_function_matches_both_routes() {
        let k = circular_symplectic(3).unwrap();
        let arc = SubDomain::arc(-1.0, 1.4).unwrap();
        let d = CountDistribution::from_spectrum(&restricted_spectrum(&k, &arc).unwrap(), 1e-8).unwrap();
        for t in [0.3, 1.1, 2.9] {
            let cf = char_function_count(&k, &arc, t).unwrap();
            assert!((d.char_function(t) - cf.product).norm() < 1e-10);
            assert!((d.char_function(t) - cf.fredholm).norm() < 1e-8);
        }
        assert!((d.char_function(0.0) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_probabilities() {
        assert!(matches!(CountDistribution::from_spectrum(&real(&[1.2]), 1e-8), Err(Error::EigenvalueRange(_))));
        assert!(CountDistribution::from_spectrum(&[C64::new(0.5, 0.1)], 1e-8).is_err());
        let d = CountDistribution::from_spectrum(&real(&[1.0]), 1e-8).unwrap();
        assert!(matches!(kolmogorov_distance(&d), Err(Error::ZeroVariance)));
        assert!(matches!(clt_diagnostic(&[("one".into(), real(&[1.0]))], 1e-3), Err(Error::ZeroVariance)));
    }

    #[test]
    fn binomial_rate() {
        let mut previous = f64::INFINITY;
        let mut scaled = Vec::new();
        for r in [4usize, 16, 64] {
            let d = CountDistribution::from_spectrum(&real(&vec![0.5; r]), 0.0).unwrap();
            let k = kolmogorov_distance(&d).unwrap();
            assert!(k < previous);
            previous = k;
            scaled.push(k * (r as f64).sqrt());
        }
        // central atom of height ≈ √(2/(π r)) dominates: K ≈ 0.4/√r
        assert!(scaled.iter().all(|s| (0.3..0.5).contains(s)), "{scaled:?}");
    }

    #[test]
    fn kolmogorov_of_a_fair_coin() {
        let d = CountDistribution::from_spectrum(&real(&[0.5]), 0.0).unwrap();
        // atoms at ±1: sup is 1/2 − Φ(−1) just below +1
        let expect = 0.5 - Normal::standard().cdf(-1.0);
        assert!((kolmogorov_distance(&d).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn counting_identities_on_an_arc() {
        let n = 3;
        let k = circular_symplectic(n).unwrap();
        let arc = SubDomain::arc(-0.7, 1.6).unwrap();
        let d = CountDistribution::from_spectrum(&restricted_spectrum(&k, &arc).unwrap(), 1e-8).unwrap();
        let q = restricted_rule(&k, &arc).unwrap();
        let r1: f64 = q.integrate(|x| correlation_value(&k, std::slice::from_ref(x)).unwrap());
        assert!((r1 - d.mean()).abs() < 1e-10);
        let q2 = crate::quadrature::QuadratureRule::gauss_legendre(-0.7, 1.6, 48, true);
        let r2: f64 = q2.integrate(|x| q2.integrate(|y| correlation_value(&k, &[*x, *y]).unwrap()));
        let factorial_moment = d.variance() + d.mean() * d.mean() - d.mean();
        assert!((r2 - factorial_moment).abs() < 1e-10, "{r2} {factorial_moment}");
    }

    #[test]
    fn clt_rows_and_monotonicity() {
        let spectra: Vec<(String, Vec<C64>)> =
            [4usize, 16, 64].iter().map(|&r| (format!("r={r}"), real(&vec![0.5; r]))).collect();
        let rep = clt_diagnostic(&spectra, 1e-3).unwrap();
        assert!(rep.monotone);
        assert_eq!(rep.rows.len(), 3);
        let rev: Vec<_> = spectra.into_iter().rev().collect();
        assert!(!clt_diagnostic(&rev, 1e-3).unwrap().monotone);
    }
}
