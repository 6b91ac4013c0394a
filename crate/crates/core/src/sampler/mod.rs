//! Monte Carlo samplers for the circular and Gaussian symplectic ensembles
//! and estimators of counting and correlation statistics.

mod estimate;
mod io;
mod matrix;
mod mcmc;

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};

pub use estimate::{estimate_counting, estimate_r1, estimate_r2, BinnedR1, BinnedR2, CountEstimate, MIN_BATCHES};
pub use io::{read_jsonl, write_jsonl};
pub use matrix::{gse_matrix_eigenvalues, sample_gse_matrix, sample_gse_matrix_spectra, scale_fit, ScaleFit};
pub use mcmc::{log_density, mcmc, mcmc_cse, mcmc_gse, ChainStats, SampleSet};

/// The two eigenvalue ensembles with explicit joint densities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// `∏_{j<k} |e^{iθ_j} − e^{iθ_k}|⁴` on `[−π, π)^N`.
    Cse,
    /// `∏_{j<k} (x_j − x_k)⁴ ∏ e^{−x_j²}` on `ℝ^N`.
    Gse,
}

impl Ensemble {
    pub fn domain(self) -> Domain {
        match self {
            Ensemble::Cse => Domain::Circle,
            Ensemble::Gse => Domain::Line,
        }
    }

    pub fn point(self, x: f64) -> Point {
        match self {
            Ensemble::Cse => Point::Angle(x),
            Ensemble::Gse => Point::Real(x),
        }
    }
}

impl std::str::FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cse" => Ok(Ensemble::Cse),
            "gse" => Ok(Ensemble::Gse),
            other => Err(Error::InvalidArgument(format!("unknown ensemble `{other}`"))),
        }
    }
}

/// One retained configuration of a chain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub chain: usize,
    pub step: usize,
    /// Angles in `[−π, π)` or real coordinates.
    pub points: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_density: Option<f64>,
}

/// Chain length, burn-in, thinning and proposal settings. One step is a
/// sweep of single-site updates over all coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub steps: usize,
    pub burn_in: usize,
    pub thin: usize,
    /// Initial standard deviation of the Gaussian proposal.
    pub step_size: f64,
    pub seed: u64,
    pub chains: usize,
    /// Tune the step size towards [`TARGET_ACCEPTANCE`] during burn-in.
    pub tune: bool,
    /// Starting configuration shared by all chains; jittered if degenerate.
    #[serde(default)]
    pub start: Option<Vec<f64>>,
}

/// Target acceptance rate for single-site updates.
pub const TARGET_ACCEPTANCE: f64 = 0.44;
/// Acceptance rates outside this range are flagged.
pub const ACCEPTANCE_RANGE: (f64, f64) = (0.1, 0.9);

impl Default for ChainConfig {
    fn default() -> Self {
        ChainConfig { steps: 10_000, burn_in: 1_000, thin: 1, step_size: 0.5, seed: 0, chains: 1, tune: true, start: None }
    }
}

impl ChainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps <= self.burn_in {
            return Err(Error::InvalidArgument(format!("steps {} must exceed burn-in {}", self.steps, self.burn_in)));
        }
        if self.thin == 0 || self.chains == 0 {
            return Err(Error::InvalidArgument("thinning and chain count must be at least 1".into()));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidArgument(format!("step size {} must be positive", self.step_size)));
        }
        Ok(())
    }

    /// Retained configurations per chain.
    pub fn retained(&self) -> usize {
        (self.steps - self.burn_in) / self.thin
    }
}
