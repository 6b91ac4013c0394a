use serde::{Deserialize, Serialize};

use super::PointConfiguration;
use crate::domain::{Domain, Point, SubDomain};
use crate::error::{Error, Result};

/// Fewer batches than this are rejected.
pub const MIN_BATCHES: usize = 10;
/// Number of batches used when enough samples are available.
const BATCHES: usize = 50;

fn to_point(domain: &Domain, x: f64) -> Point {
    match domain {
        Domain::Circle => Point::Angle(x),
        _ => Point::Real(x),
    }
}

/// Batch index of each of `n` samples, in order, and the batch count.
fn batching(n: usize) -> Result<(usize, impl Fn(usize) -> usize)> {
    let b = BATCHES.min(n);
    if b < MIN_BATCHES {
        return Err(Error::TooFewBatches { got: b, need: MIN_BATCHES });
    }
    Ok((b, move |i: usize| i * b / n))
}

/// Mean of `sums[k] / sizes[k]` and its standard error.
fn batch_mean_se(sums: &[f64], sizes: &[usize]) -> (f64, f64) {
    let means: Vec<f64> = sums.iter().zip(sizes).map(|(s, &n)| s / n as f64).collect();
    let b = means.len() as f64;
    let m = means.iter().sum::<f64>() / b;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (b - 1.0);
    (m, (var / b).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountEstimate {
    pub samples: usize,
    pub batches: usize,
    pub mean: f64,
    pub mean_se: f64,
    pub variance: f64,
    pub variance_se: f64,
    /// `Var / SE(mean)²`; the sample count when the count is constant.
    pub effective_samples: f64,
}

/// Mean and variance of the number of points in `sub`, with batch-means
/// standard errors over the samples in their stored order.
pub fn estimate_counting(samples: &[PointConfiguration], domain: &Domain, sub: &SubDomain) -> Result<CountEstimate> {
    sub.check_within(domain)?;
    let n = samples.len();
    let (b, batch_of) = batching(n)?;
    let counts: Vec<f64> = samples
        .iter()
        .map(|c| c.points.iter().filter(|&&x| sub.contains(&to_point(domain, x))).count() as f64)
        .collect();
    let mean = counts.iter().sum::<f64>() / n as f64;
    let mut sizes = vec![0usize; b];
    let mut sums = vec![0.0; b];
    let mut sq = vec![0.0; b];
    for (i, c) in counts.iter().enumerate() {
        let k = batch_of(i);
        sizes[k] += 1;
        sums[k] += c;
        sq[k] += (c - mean).powi(2);
    }
    let (_, mean_se) = batch_mean_se(&sums, &sizes);
    let variance = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n as f64;
    let (_, variance_se) = batch_mean_se(&sq, &sizes);
    let effective_samples = if mean_se > 0.0 { variance / (mean_se * mean_se) } else { n as f64 };
    Ok(CountEstimate { samples: n, batches: b, mean, mean_se, variance, variance_se, effective_samples })
}

/// Binned one-point density with batch-means standard errors; bins without
/// hits are `None`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedR1 {
    pub edges: Vec<f64>,
    pub density: Vec<Option<f64>>,
    pub se: Vec<Option<f64>>,
    pub hits: Vec<usize>,
}

fn bin_of(edges: &[f64], x: f64) -> Option<usize> {
    if x < edges[0] || x >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|e| *e <= x) - 1)
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("bin edges must be increasing with at least two entries".into()));
    }
    Ok(())
}

/// Estimates `R₁` averaged over each bin `[e_k, e_{k+1})`.
pub fn estimate_r1(samples: &[PointConfiguration], edges: &[f64]) -> Result<BinnedR1> {
    check_edges(edges)?;
    let n = samples.len();
    let (b, batch_of) = batching(n)?;
    let bins = edges.len() - 1;
    let mut sums = vec![vec![0.0; b]; bins];
    let mut sizes = vec![0usize; b];
    let mut hits = vec![0usize; bins];
    for (i, c) in samples.iter().enumerate() {
        let k = batch_of(i);
        sizes[k] += 1;
        for &x in &c.points {
            if let Some(j) = bin_of(edges, x) {
                sums[j][k] += 1.0;
                hits[j] += 1;
            }
        }
    }
    let mut density = Vec::with_capacity(bins);
    let mut se = Vec::with_capacity(bins);
    for j in 0..bins {
        let width = edges[j + 1] - edges[j];
        if hits[j] == 0 {
            density.push(None);
            se.push(None);
            continue;
        }
        let (_, s) = batch_mean_se(&sums[j], &sizes);
        density.push(Some(hits[j] as f64 / n as f64 / width));
        se.push(Some(s / width));
    }
    Ok(BinnedR1 { edges: edges.to_vec(), density, se, hits })
}

/// Binned two-point density over ordered pairs of distinct points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinnedR2 {
    pub edges: Vec<f64>,
    /// `values[a][b]` for the bin `[e_a, e_{a+1}) × [e_b, e_{b+1})`.
    pub values: Vec<Vec<Option<f64>>>,
    pub se: Vec<Vec<Option<f64>>>,
    pub hits: Vec<Vec<usize>>,
}

impl BinnedR2 {
    /// `Σ R₂ · |bin_a| |bin_b|` over bins with hits.
    pub fn integral(&self) -> f64 {
        let w: Vec<f64> = self.edges.windows(2).map(|e| e[1] - e[0]).collect();
        let mut total = 0.0;
        for (a, row) in self.values.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                total += v.unwrap_or(0.0) * w[a] * w[b];
            }
        }
        total
    }
}

/// Estimates `R₂` averaged over each product bin.
pub fn estimate_r2(samples: &[PointConfiguration], edges: &[f64]) -> Result<BinnedR2> {
    check_edges(edges)?;
    let n = samples.len();
    let (b, batch_of) = batching(n)?;
    let bins = edges.len() - 1;
    let mut sums = vec![vec![vec![0.0; b]; bins]; bins];
    let mut sizes = vec![0usize; b];
    let mut hits = vec![vec![0usize; bins]; bins];
    for (i, c) in samples.iter().enumerate() {
        let k = batch_of(i);
        sizes[k] += 1;
        let idx: Vec<Option<usize>> = c.points.iter().map(|&x| bin_of(edges, x)).collect();
        for (p, ip) in idx.iter().enumerate() {
            for (q, iq) in idx.iter().enumerate() {
                if let (true, Some(u), Some(v)) = (p != q, ip, iq) {
                    sums[*u][*v][k] += 1.0;
                    hits[*u][*v] += 1;
                }
            }
        }
    }
    let w: Vec<f64> = edges.windows(2).map(|e| e[1] - e[0]).collect();
    let mut values = vec![vec![None; bins]; bins];
    let mut se = vec![vec![None; bins]; bins];
    for u in 0..bins {
        for v in 0..bins {
            if hits[u][v] == 0 {
                continue;
            }
            let area = w[u] * w[v];
            let (_, s) = batch_mean_se(&sums[u][v], &sizes);
            values[u][v] = Some(hits[u][v] as f64 / n as f64 / area);
            se[u][v] = Some(s / area);
        }
    }
    Ok(BinnedR2 { edges: edges.to_vec(), values, se, hits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampler::{mcmc_cse, ChainConfig};
    use std::f64::consts::PI;

    fn fake(points: &[Vec<f64>]) -> Vec<PointConfiguration> {
        points
            .iter()
            .enumerate()
            .map(|(k, p)| PointConfiguration { chain: 0, step: k, points: p.clone(), log_density: None })
            .collect()
    }

    #[test]
    fn full_domain_count_is_exact() {
        let s = fake(&vec![vec![0.1, -2.0, 3.0]; 40]);
        let e = estimate_counting(&s, &Domain::Circle, &SubDomain::Full).unwrap();
        assert_eq!((e.mean, e.variance, e.mean_se), (3.0, 0.0, 0.0));
    }

    #[test]
    fn too_few_batches() {
        let s = fake(&vec![vec![0.0]; 9]);
        assert!(matches!(
            estimate_counting(&s, &Domain::Circle, &SubDomain::Full),
            Err(Error::TooFewBatches { got: 9, need: 10 })
        ));
        assert!(estimate_counting(&[], &Domain::Circle, &SubDomain::Full).is_err());
    }

    #[test]
    fn alternating_counts() {
        let s = fake(&(0..100).map(|k| if k % 2 == 0 { vec![0.5] } else { vec![-0.5] }).collect::<Vec<_>>());
        let e = estimate_counting(&s, &Domain::Line, &SubDomain::Interval { lo: 0.0, hi: 1.0 }).unwrap();
        assert_eq!(e.mean, 0.5);
        assert_eq!(e.variance, 0.25);
        assert_eq!(e.batches, 50);
    }

    #[test]
    fn empty_bins_are_missing() {
        let s = fake(&vec![vec![0.25, 0.75]; 20]);
        let r1 = estimate_r1(&s, &[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(r1.density[0], Some(2.0));
        assert_eq!(r1.density[2], None);
        let r2 = estimate_r2(&s, &[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(r2.values[0][0], None);
        assert_eq!(r2.values[0][1], Some(4.0));
        assert!((r2.integral() - 2.0).abs() < 1e-12);
        assert!(estimate_r1(&s, &[1.0, 0.0]).is_err());
    }

    #[test]
    fn cse2_pair_statistics() {
        let cfg = ChainConfig { steps: 40_000, burn_in: 1_000, thin: 2, step_size: 0.5, seed: 21, chains: 4, tune: true, start: None };
        let s = mcmc_cse(2, &cfg).unwrap();
        let edges: Vec<f64> = (0..=16).map(|k| -PI + 2.0 * PI * k as f64 / 16.0).collect();
        let r2 = estimate_r2(&s.samples, &edges).unwrap();
        assert!((r2.integral() - 2.0).abs() < 1e-9);
        // repulsion: diagonal bins are much emptier than antipodal ones
        let diag: f64 = (0..16).map(|a| r2.values[a][a].unwrap_or(0.0)).sum::<f64>() / 16.0;
        let anti: f64 = (0..16).map(|a| r2.values[a][(a + 8) % 16].unwrap()).sum::<f64>() / 16.0;
        assert!(diag < 0.05 * anti, "{diag} {anti}");
    }
}
