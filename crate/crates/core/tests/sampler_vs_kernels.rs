//! Monte Carlo samples checked against kernel predictions, in standard-error
//! units.

use std::f64::consts::PI;
use std::sync::Arc;

use pfaff_core::domain::{Domain, Point, SubDomain};
use pfaff_core::kernels::{circular_symplectic, gse};
use pfaff_core::pointfield::{correlation_value, expected_product, fredholm_rule, restricted_spectrum};
use pfaff_core::quadrature::gauss_legendre;
use pfaff_core::sampler::{
    estimate_counting, estimate_r1, estimate_r2, mcmc, mcmc_cse, mcmc_gse, read_jsonl, sample_gse_matrix_spectra,
    scale_fit, write_jsonl, ChainConfig, Ensemble, PointConfiguration,
};
use pfaff_core::{Exec, C64};

fn config(steps: usize, thin: usize, seed: u64) -> ChainConfig {
    ChainConfig { steps, burn_in: 2_000, thin, step_size: 0.5, seed, chains: 8, tune: true, start: None }
}

/// Mean of `f` over `[a, b] × [c, d]` by tensor Gauss–Legendre.
fn box_mean(a: f64, b: f64, c: f64, d: f64, f: impl Fn(f64, f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(10);
    let mut total = 0.0;
    for (s, ws) in x.iter().zip(&w) {
        for (t, wt) in x.iter().zip(&w) {
            let u = a + 0.5 * (b - a) * (s + 1.0);
            let v = c + 0.5 * (d - c) * (t + 1.0);
            total += 0.25 * ws * wt * f(u, v);
        }
    }
    total
}

fn interval_mean(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(12);
    x.iter().zip(&w).map(|(t, w)| 0.5 * w * f(a + 0.5 * (b - a) * (t + 1.0))).sum()
}

/// Largest `|estimate − prediction| / SE` over bins with at least `min_hits`.
fn worst_r1_z(samples: &[PointConfiguration], edges: &[f64], min_hits: usize, predict: impl Fn(f64, f64) -> f64) -> f64 {
    let r1 = estimate_r1(samples, edges).unwrap();
    let mut worst: f64 = 0.0;
    for b in 0..edges.len() - 1 {
        if r1.hits[b] >= min_hits {
            let z = (r1.density[b].unwrap() - predict(edges[b], edges[b + 1])) / r1.se[b].unwrap();
            worst = worst.max(z.abs());
        }
    }
    worst
}

#[test]
fn cse4_one_point_density_is_flat() {
    let s = mcmc_cse(4, &config(42_000, 2, 11)).unwrap();
    let edges: Vec<f64> = (0..=16).map(|k| -PI + 2.0 * PI * k as f64 / 16.0).collect();
    let z = worst_r1_z(&s.samples, &edges, 1, |_, _| 4.0 / (2.0 * PI));
    assert!(z <= 4.0, "worst bin {z:.2} SE");
}

#[test]
fn cse3_arc_count_matches_restricted_spectrum() {
    let sub = SubDomain::arc(0.3, 1.9).unwrap();
    let s = mcmc_cse(3, &config(42_000, 2, 12)).unwrap();
    let est = estimate_counting(&s.samples, &Domain::Circle, &sub).unwrap();
    let mu = restricted_spectrum(&circular_symplectic(3).unwrap(), &sub).unwrap();
    let mean: f64 = mu.iter().map(|l| l.re).sum();
    let var: f64 = mu.iter().map(|l| l.re * (1.0 - l.re)).sum();
    assert!((mean - 3.0 * 1.6 / (2.0 * PI)).abs() < 1e-10);
    assert!((est.mean - mean).abs() <= 3.0 * est.mean_se, "{est:?} vs {mean}");
    assert!((est.variance - var).abs() <= 4.0 * est.variance_se, "{est:?} vs {var}");
}

#[test]
fn cse2_antipodal_pair_density() {
    let k = circular_symplectic(2).unwrap();
    let s = mcmc_cse(2, &config(82_000, 2, 13)).unwrap();
    let edges: Vec<f64> = (0..=16).map(|j| -PI + 2.0 * PI * j as f64 / 16.0).collect();
    let r2 = estimate_r2(&s.samples, &edges).unwrap();
    assert!((r2.integral() - 2.0).abs() < 1e-9);
    let predicted = box_mean(edges[0], edges[1], edges[8], edges[9], |a, b| {
        correlation_value(&k, &[Point::Angle(a), Point::Angle(b)]).unwrap()
    });
    let at_antipode = correlation_value(&k, &[Point::Angle(0.0), Point::Angle(-PI)]).unwrap();
    assert!((predicted - at_antipode).abs() < 0.1 * at_antipode);
    let (v, se) = (r2.values[0][8].unwrap(), r2.se[0][8].unwrap());
    assert!((v - predicted).abs() <= 4.0 * se, "{v} ± {se} vs {predicted}");
    assert!(r2.values[0][0].unwrap_or(0.0) < 0.1 * predicted);
}

#[test]
fn cse2_hole_probability() {
    let k = circular_symplectic(2).unwrap();
    let arc = SubDomain::arc(-0.6, 0.6).unwrap();
    let quad = fredholm_rule(&k.restrict(&arc).unwrap()).unwrap();
    let a = arc.clone();
    let indicator = Arc::new(move |x: &Point| if a.contains(x) { C64::new(-1.0, 0.0) } else { C64::new(0.0, 0.0) });
    let predicted = expected_product(&k, indicator, &quad).unwrap().value.re;

    let s = mcmc_cse(2, &config(52_000, 2, 14)).unwrap();
    let empty: Vec<f64> = s
        .samples
        .iter()
        .map(|c| c.points.iter().all(|&t| !arc.contains(&Point::Angle(t))) as u8 as f64)
        .collect();
    let batches = 50;
    let size = empty.len() / batches;
    let means: Vec<f64> = empty.chunks(size).take(batches).map(|b| b.iter().sum::<f64>() / b.len() as f64).collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let se = (means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (batches * (batches - 1)) as f64).sqrt();
    assert!((m - predicted).abs() <= 4.0 * se, "{m} ± {se} vs {predicted}");
}

#[test]
fn gse3_one_point_density() {
    let k = gse(3).unwrap();
    let s = mcmc_gse(3, &config(52_000, 2, 15)).unwrap();
    let edges: Vec<f64> = (0..=24).map(|j| -3.6 + 0.3 * j as f64).collect();
    let z = worst_r1_z(&s.samples, &edges, 500, |a, b| {
        interval_mean(a, b, |x| correlation_value(&k, &[Point::Real(x)]).unwrap())
    });
    assert!(z <= 4.0, "worst bin {z:.2} SE");
}

#[test]
fn gse_matrix_model_after_scale_fit() {
    let n = 3;
    let reference = mcmc_gse(n, &config(42_000, 2, 16)).unwrap();
    let matrix = sample_gse_matrix_spectra(n, 200_000, 16, Exec::Parallel).unwrap();
    let fit = scale_fit(&reference.samples, &matrix).unwrap();
    assert!((fit.sigma - 2f64.sqrt()).abs() < 0.03, "{fit:?}");
    let scaled = fit.apply(&matrix);
    let k = gse(n).unwrap();
    let edges: Vec<f64> = (0..=24).map(|j| -3.6 + 0.3 * j as f64).collect();
    let z = worst_r1_z(&scaled, &edges, 500, |a, b| {
        interval_mean(a, b, |x| correlation_value(&k, &[Point::Real(x)]).unwrap())
    });
    assert!(z <= 4.5, "worst bin {z:.2} SE");
}

#[test]
fn chains_are_reproducible_and_round_trip() {
    let cfg = ChainConfig { steps: 600, burn_in: 100, thin: 5, chains: 3, seed: 99, ..ChainConfig::default() };
    let a = mcmc(Ensemble::Gse, 3, &cfg, Exec::Parallel).unwrap();
    let b = mcmc(Ensemble::Gse, 3, &cfg, Exec::Sequential).unwrap();
    assert_eq!(a.samples, b.samples);
    assert_eq!(a.samples.len(), 3 * cfg.retained());
    assert!(a.samples.iter().all(|c| c.points.len() == 3));
    let mut buf = Vec::new();
    write_jsonl(&a.samples, &mut buf).unwrap();
    assert_eq!(read_jsonl(&buf[..]).unwrap(), a.samples);
    let c = mcmc(Ensemble::Cse, 4, &cfg, Exec::Parallel).unwrap();
    assert!(c.samples.iter().flat_map(|s| &s.points).all(|t| (-PI..PI).contains(t)));
}
