use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{ChainConfig, Ensemble, PointConfiguration, ACCEPTANCE_RANGE, TARGET_ACCEPTANCE};
use crate::domain::wrap_angle;
use crate::error::{Error, Result};
use crate::par::{map_indexed, Exec};

/// Sweeps between step-size adjustments during burn-in.
const TUNE_INTERVAL: usize = 50;
/// Points closer than this count as coincident in a starting configuration.
const COINCIDENT: f64 = 1e-9;

/// Pair interaction `4 log |e^{ia} − e^{ib}|` or `4 log |a − b|`.
fn pair_term(ensemble: Ensemble, a: f64, b: f64) -> f64 {
    match ensemble {
        Ensemble::Cse => 4.0 * (2.0 * (0.5 * (a - b)).sin().abs()).ln(),
        Ensemble::Gse => 4.0 * (a - b).abs().ln(),
    }
}

fn site_term(ensemble: Ensemble, x: f64) -> f64 {
    match ensemble {
        Ensemble::Cse => 0.0,
        Ensemble::Gse => -x * x,
    }
}

/// Unnormalized log joint density.
pub fn log_density(ensemble: Ensemble, points: &[f64]) -> f64 {
    let mut s = 0.0;
    for (j, &a) in points.iter().enumerate() {
        s += site_term(ensemble, a);
        for &b in &points[j + 1..] {
            s += pair_term(ensemble, a, b);
        }
    }
    s
}

/// Contribution of coordinate `i` at value `x`.
fn local(ensemble: Ensemble, points: &[f64], i: usize, x: f64) -> f64 {
    let mut s = site_term(ensemble, x);
    for (j, &b) in points.iter().enumerate() {
        if j != i {
            s += pair_term(ensemble, x, b);
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainStats {
    pub chain: usize,
    /// Acceptance rate after burn-in.
    pub acceptance: f64,
    /// Proposal standard deviation after tuning.
    pub step_size: f64,
    /// The starting configuration had coincident points and was jittered.
    pub jittered: bool,
    /// Acceptance rate outside [`ACCEPTANCE_RANGE`].
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub ensemble: Ensemble,
    pub n: usize,
    pub config: ChainConfig,
    pub chains: Vec<ChainStats>,
    /// Ordered by chain, then by step.
    pub samples: Vec<PointConfiguration>,
}

impl SampleSet {
    pub fn any_flagged(&self) -> bool {
        self.chains.iter().any(|c| c.flagged)
    }
}

fn default_start(ensemble: Ensemble, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match ensemble {
        Ensemble::Cse => {
            let offset = rng.random_range(-PI..PI);
            (0..n).map(|k| wrap_angle(offset + 2.0 * PI * k as f64 / n as f64)).collect()
        }
        Ensemble::Gse => {
            let half = (n as f64 - 1.0) / 2.0;
            (0..n).map(|k| (k as f64 - half) * (2.0 / (n as f64).sqrt()).min(1.0)).collect()
        }
    }
}

fn is_degenerate(ensemble: Ensemble, points: &[f64]) -> bool {
    log_density(ensemble, points).is_infinite()
        || points.iter().enumerate().any(|(j, a)| points[j + 1..].iter().any(|b| (a - b).abs() < COINCIDENT))
}

fn run_chain(ensemble: Ensemble, n: usize, cfg: &ChainConfig, chain: usize) -> (ChainStats, Vec<PointConfiguration>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(chain as u64);
    let mut x = cfg.start.clone().unwrap_or_else(|| default_start(ensemble, n, &mut rng));
    let mut jittered = false;
    while is_degenerate(ensemble, &x) {
        jittered = true;
        for v in x.iter_mut() {
            let e: f64 = StandardNormal.sample(&mut rng);
            *v += 1e-3 * e;
            if ensemble == Ensemble::Cse {
                *v = wrap_angle(*v);
            }
        }
    }
    let mut step = cfg.step_size;
    let (mut accepted, mut proposed) = (0usize, 0usize);
    let (mut window_acc, mut window_prop) = (0usize, 0usize);
    let mut samples = Vec::with_capacity(cfg.retained());
    for s in 1..=cfg.steps {
        for i in 0..n {
            let e: f64 = StandardNormal.sample(&mut rng);
            let mut y = x[i] + step * e;
            if ensemble == Ensemble::Cse {
                y = wrap_angle(y);
            }
            let delta = local(ensemble, &x, i, y) - local(ensemble, &x, i, x[i]);
            let u: f64 = rng.random();
            let accept = delta >= 0.0 || u < delta.exp();
            if accept {
                x[i] = y;
            }
            if s > cfg.burn_in {
                proposed += 1;
                accepted += accept as usize;
            } else {
                window_prop += 1;
                window_acc += accept as usize;
            }
        }
        if s <= cfg.burn_in && cfg.tune && s % TUNE_INTERVAL == 0 {
            let rate = window_acc as f64 / window_prop as f64;
            step = (step * (2.0 * (rate - TARGET_ACCEPTANCE)).exp()).clamp(1e-4, 2.0 * PI);
            window_acc = 0;
            window_prop = 0;
        }
        if s > cfg.burn_in && (s - cfg.burn_in) % cfg.thin == 0 {
            samples.push(PointConfiguration { chain, step: s, points: x.clone(), log_density: Some(log_density(ensemble, &x)) });
        }
    }
    let acceptance = if proposed == 0 { 0.0 } else { accepted as f64 / proposed as f64 };
    let flagged = !(ACCEPTANCE_RANGE.0..=ACCEPTANCE_RANGE.1).contains(&acceptance);
    (ChainStats { chain, acceptance, step_size: step, jittered, flagged }, samples)
}

/// Independent Metropolis chains, one ChaCha stream per chain.
pub fn mcmc(ensemble: Ensemble, n: usize, cfg: &ChainConfig, exec: Exec) -> Result<SampleSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("ensemble size {n} must be at least 2")));
    }
    cfg.validate()?;
    if let Some(start) = &cfg.start {
        if start.len() != n {
            return Err(Error::Shape(format!("start has {} points for N = {n}", start.len())));
        }
    }
    let runs = map_indexed(cfg.chains, exec, |c| run_chain(ensemble, n, cfg, c));
    let mut chains = Vec::with_capacity(runs.len());
    let mut samples = Vec::with_capacity(cfg.chains * cfg.retained());
    for (stats, s) in runs {
        chains.push(stats);
        samples.extend(s);
    }
    Ok(SampleSet { ensemble, n, config: cfg.clone(), chains, samples })
}

pub fn mcmc_cse(n: usize, cfg: &ChainConfig) -> Result<SampleSet> {
    mcmc(Ensemble::Cse, n, cfg, Exec::default())
}

pub fn mcmc_gse(n: usize, cfg: &ChainConfig) -> Result<SampleSet> {
    mcmc(Ensemble::Gse, n, cfg, Exec::default())
}
