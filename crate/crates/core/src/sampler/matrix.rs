use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::PointConfiguration;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Exec};
use crate::qcore::{Quaternion, DEFAULT_TOL};
use crate::qlinalg::{pair_kramers, QuaternionMatrix, PAIR_TOL};

/// Self-dual real-quaternion matrix with density `∝ exp(−2 Tr H²)`:
/// diagonal entries `N(0, 1/4)`, off-diagonal components `N(0, 1/8)`.
pub fn sample_gse_matrix<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> Result<QuaternionMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix size must be at least 1".into()));
    }
    let diag = Normal::new(0.0, 0.5).expect("valid");
    let off = Normal::new(0.0, 0.125f64.sqrt()).expect("valid");
    let mut h = QuaternionMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = Quaternion::from_real(diag.sample(rng));
        for j in i + 1..n {
            let q = Quaternion::real(off.sample(rng), off.sample(rng), off.sample(rng), off.sample(rng));
            h[(i, j)] = q;
            h[(j, i)] = q.conj();
        }
    }
    Ok(h)
}

/// The `N` real eigenvalues of a self-dual real-quaternion matrix, ascending.
pub fn gse_matrix_eigenvalues(h: &QuaternionMatrix) -> Result<Vec<f64>> {
    h.require_self_dual(DEFAULT_TOL)?;
    let psi = h.psi_adjoint(DEFAULT_TOL)?;
    let eig = psi.symmetric_eigen();
    let values: Vec<_> = eig.eigenvalues.iter().map(|&v| crate::qcore::C64::new(v, 0.0)).collect();
    let mut out: Vec<f64> = pair_kramers(&values, PAIR_TOL)?.into_iter().map(|v| v.re).collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Eigenvalue samples of independent matrices, one ChaCha stream each.
pub fn sample_gse_matrix_spectra(n: usize, count: usize, seed: u64, exec: Exec) -> Result<Vec<PointConfiguration>> {
    map_indexed(count, exec, |k| -> Result<PointConfiguration> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let h = sample_gse_matrix(n, &mut rng)?;
        Ok(PointConfiguration { chain: 0, step: k, points: gse_matrix_eigenvalues(&h)?, log_density: None })
    })
    .into_iter()
    .collect()
}

/// Scale `σ` with `E Σ (σλ)² = E Σ x²` between matrix eigenvalues `λ` and
/// reference samples `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleFit {
    pub sigma: f64,
    pub reference_mean_square: f64,
    pub matrix_mean_square: f64,
}

impl ScaleFit {
    pub fn apply(&self, samples: &[PointConfiguration]) -> Vec<PointConfiguration> {
        samples
            .iter()
            .map(|c| PointConfiguration { points: c.points.iter().map(|x| x * self.sigma).collect(), ..c.clone() })
            .collect()
    }
}

fn mean_sum_sq(samples: &[PointConfiguration]) -> f64 {
    samples.iter().map(|c| c.points.iter().map(|x| x * x).sum::<f64>()).sum::<f64>() / samples.len() as f64
}

pub fn scale_fit(reference: &[PointConfiguration], matrix: &[PointConfiguration]) -> Result<ScaleFit> {
    if reference.is_empty() || matrix.is_empty() {
        return Err(Error::InvalidArgument("scale fit needs samples on both sides".into()));
    }
    let (r, m) = (mean_sum_sq(reference), mean_sum_sq(matrix));
    Ok(ScaleFit { sigma: (r / m).sqrt(), reference_mean_square: r, matrix_mean_square: m })
}
