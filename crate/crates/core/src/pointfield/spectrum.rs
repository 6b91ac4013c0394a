use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{Point, SubDomain};
use crate::error::{Error, Result};
use crate::kernels::{DiagonalForm, Kernel};
use crate::qcore::{Quaternion, C64};
use crate::qlinalg::{moore_dyson_via_pfaffian, selfdual_eigenvalues, QuaternionMatrix, PAIR_TOL};
use crate::quadrature::QuadratureRule;

/// Largest rank for which all eigenfunction subsets are enumerated.
pub const MAX_POSITIVITY_RANK: usize = 12;
/// Tolerance for realness of eigenvalues and membership in `[0, 1]`.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// The quadrature used for restricted Gram integrals.
pub fn restricted_rule(k: &Kernel, sub: &SubDomain) -> Result<QuadratureRule> {
    QuadratureRule::for_subdomain(k.domain(), sub)
}

/// Spectrum of `1_D K 1_D` with the default rule.
pub fn restricted_spectrum(k: &Kernel, sub: &SubDomain) -> Result<Vec<C64>> {
    restricted_spectrum_with(k, sub, &restricted_rule(k, sub)?)
}

/// Spectrum of `1_D K 1_D` from the `r × r` self-dual matrix
/// `√λ_k G_kl √λ_l` with `G_kl = ∫_D u_k* u_l dμ`, sorted by real part.
pub fn restricted_spectrum_with(k: &Kernel, sub: &SubDomain, quad: &QuadratureRule) -> Result<Vec<C64>> {
    let d = k.diagonal().ok_or(Error::MissingDiagonalForm)?;
    sub.check_within(k.domain())?;
    let inside = QuadratureRule {
        nodes: quad.nodes.iter().filter(|x| sub.contains(x)).copied().collect(),
        weights: quad.nodes.iter().zip(&quad.weights).filter(|(x, _)| sub.contains(x)).map(|(_, &w)| w).collect(),
    };
    let m = effective_matrix(d, &inside, k);
    let mut values = selfdual_eigenvalues(&m, PAIR_TOL)?;
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(values)
}

fn effective_matrix(d: &DiagonalForm, quad: &QuadratureRule, k: &Kernel) -> QuaternionMatrix {
    let g = d.gram(quad, k.weight_fn());
    let roots: Vec<C64> = d.lambdas.iter().map(|l| l.sqrt()).collect();
    let m = QuaternionMatrix::from_fn(g.rows(), g.cols(), |a, b| g[(a, b)] * (roots[a] * roots[b]));
    (&m + &m.dual()).scale(C64::new(0.5, 0.0))
}

/// Classification of a kernel's diagonal form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalFormReport {
    pub operation: &'static str,
    pub kernel: String,
    pub rank: usize,
    /// Eigenvalues of the integral operator on the full domain.
    pub spectrum: Vec<[f64; 2]>,
    /// `max |G − I|` for the Gram matrix of the supplied eigenfunctions.
    pub orthonormality_residual: f64,
    /// `max |K − Σ λ u u*|` at sampled pairs.
    pub reconstruction_residual: f64,
    /// The kernel takes real-quaternion values at sampled pairs.
    pub kernel_real: bool,
    /// The supplied eigenfunctions are real-quaternion valued.
    pub functions_real: bool,
    pub is_quasi_real: bool,
    pub is_real_form: bool,
    /// All eigenvalues real and in `[0, 1]`.
    pub eigenvalues_in_unit_interval: bool,
    pub tolerance: f64,
    pub pass: bool,
}

/// Classifies `K` as having a real diagonal form, a quasi-real one, or
/// neither.
///
/// The operator spectrum is computed from the diagonal form and its Gram
/// matrix, so a non-orthonormal expansion is classified by the operator it
/// represents. A self-dual kernel with real-quaternion values is a Hermitian
/// operator and therefore has a real diagonal form once its spectrum is
/// real.
pub fn diagonal_form_check(k: &Kernel, samples: usize, seed: u64) -> Result<DiagonalFormReport> {
    let d = k.diagonal().ok_or(Error::MissingDiagonalForm)?;
    let quad = restricted_rule(k, &SubDomain::Full)?;
    let g = d.gram(&quad, k.weight_fn());
    let orthonormality_residual = g.max_abs_diff(&QuaternionMatrix::identity(d.rank()));
    let spectrum = restricted_spectrum_with(k, &SubDomain::Full, &quad)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point> = (0..samples.max(1)).map(|_| k.domain().random_point(&mut rng)).collect();
    let mut reconstruction_residual: f64 = 0.0;
    let mut kernel_real = true;
    for (a, x) in points.iter().enumerate() {
        let y = &points[(a + 1) % points.len()];
        let kv = k.eval_unchecked(x, y);
        reconstruction_residual = reconstruction_residual.max((kv - d.reconstruct(x, y)).max_abs() / (1.0 + kv.max_abs()));
        kernel_real &= kv.is_real(1e-10 * (1.0 + kv.max_abs()));
    }
    let functions_real = d.functions_real_at(&points, 1e-10);
    let is_quasi_real = spectrum.iter().all(|l| l.im.abs() <= SPECTRUM_TOL * (1.0 + l.norm()));
    let eigenvalues_in_unit_interval =
        is_quasi_real && spectrum.iter().all(|l| l.re >= -SPECTRUM_TOL && l.re <= 1.0 + SPECTRUM_TOL);
    let pass = reconstruction_residual <= 1e-8;
    Ok(DiagonalFormReport {
        operation: "diagonal_form_check",
        kernel: k.descriptor().to_string(),
        rank: d.rank(),
        spectrum: spectrum.iter().map(|l| [l.re, l.im]).collect(),
        orthonormality_residual,
        reconstruction_residual,
        kernel_real,
        functions_real,
        is_quasi_real,
        is_real_form: is_quasi_real && kernel_real,
        eigenvalues_in_unit_interval,
        tolerance: SPECTRUM_TOL,
        pass,
    })
}

/// Smallest `Det_M` of a partial-kernel Gram matrix found by
/// [`complete_positivity_check`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityReport {
    pub operation: &'static str,
    pub kernel: String,
    pub rank: usize,
    pub evaluations: usize,
    pub min_value: f64,
    pub argmin_subset: Vec<usize>,
    pub argmin_points: Vec<Point>,
    pub tolerance: f64,
    /// No value below `−tolerance` was found.
    pub pass: bool,
}

/// Evaluates `Det_M(K_I(x_a, x_b))` with `K_I = Σ_{i∈I} u_i u_i*` for every
/// non-empty subset `I` of eigenfunctions and every trial configuration.
pub fn complete_positivity_check(k: &Kernel, trials: &[Vec<Point>], tol: f64) -> Result<PositivityReport> {
    let d = k.diagonal().ok_or(Error::MissingDiagonalForm)?;
    let r = d.rank();
    if r > MAX_POSITIVITY_RANK {
        return Err(Error::TooLarge { what: "eigenfunction subsets", n: r, limit: MAX_POSITIVITY_RANK });
    }
    let mut report = PositivityReport {
        operation: "complete_positivity_check",
        kernel: k.descriptor().to_string(),
        rank: r,
        evaluations: 0,
        min_value: f64::INFINITY,
        argmin_subset: vec![],
        argmin_points: vec![],
        tolerance: tol,
        pass: true,
    };
    for pts in trials {
        for p in pts {
            k.domain().check(p)?;
        }
        let vals: Vec<Vec<Quaternion>> = pts.iter().map(|x| (0..r).map(|i| d.u(i, x)).collect()).collect();
        for mask in 1u32..(1 << r) {
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let g = QuaternionMatrix::from_fn(pts.len(), pts.len(), |a, b| {
                subset.iter().fold(Quaternion::ZERO, |acc, &i| acc + vals[a][i] * vals[b][i].conj())
            });
            let v = if pts.len() == 1 {
                g[(0, 0)].s.re
            } else {
                moore_dyson_via_pfaffian(&g, 1e-8 * (1.0 + g.max_abs()))?.re
            };
            report.evaluations += 1;
            if v < report.min_value {
                report.min_value = v;
                report.argmin_subset = subset;
                report.argmin_points = pts.clone();
            }
        }
    }
    report.pass = report.min_value >= -tol;
    Ok(report)
}

/// Random configurations of sizes `1..=max_size` in the kernel's support.
pub fn random_configurations<R: Rng + ?Sized>(k: &Kernel, count: usize, max_size: usize, rng: &mut R) -> Vec<Vec<Point>> {
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=max_size.max(1));
            (0..m).map(|_| k.domain().random_point(rng)).collect()
        })
        .collect()
}
