//! `pfaff`: verification suites, spectra surveys and samplers for Pfaffian
//! point fields.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage,
//! configuration and input errors.

mod mc;
mod report;
mod survey;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pfaff_core::sampler::ChainConfig;

use mc::{CompareArgs, SampleArgs, SampleKind};
use report::RunReport;
use verify::Suite;

#[derive(Parser)]
#[command(name = "pfaff", version, about = "Quaternion determinant identities and Pfaffian point field checks")]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, env = "PFAFF_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a property suite over random inputs and fixed fixtures.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Spectra of a kernel restricted to arcs or intervals.
    Spectrum {
        /// Kernel descriptor such as `cse:N=4`.
        kernel: String,
        /// `a,b`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        arc: Vec<String>,
        /// Number of additional random arcs.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Draw eigenvalue samples and write them as JSON lines.
    Sample {
        #[arg(value_enum)]
        ensemble: SampleKind,
        #[arg(long = "n")]
        n: usize,
        #[arg(long, default_value_t = 20_000)]
        steps: usize,
        #[arg(long, default_value_t = 2_000)]
        burn: usize,
        #[arg(long, default_value_t = 1)]
        thin: usize,
        #[arg(long, default_value_t = 1)]
        chains: usize,
        #[arg(long, default_value_t = 0.5)]
        step_size: f64,
        /// Keep the initial step size during burn-in.
        #[arg(long)]
        no_tune: bool,
        /// Matrices drawn by `gse-matrix`.
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        /// Sweeps of the reference chain for the `gse-matrix` scale fit.
        #[arg(long, default_value_t = 20_000)]
        reference_steps: usize,
        #[arg(short = 'o', long)]
        out: PathBuf,
    },
    /// Compare a sample file with kernel predictions in standard-error units.
    Compare {
        kernel: String,
        samples: PathBuf,
        #[arg(long, default_value_t = 16)]
        bins: usize,
        /// `a,b`; repeatable. Defaults to half of the domain.
        #[arg(long, allow_hyphen_values = true)]
        arc: Vec<String>,
        /// Bins with fewer hits are reported in the CSV only.
        #[arg(long, default_value_t = 500)]
        min_hits: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Kolmogorov distances of standardized counts for cse:N on one arc.
    Clt {
        #[arg(long, value_delimiter = ',', default_values_t = [4, 8, 16, 32])]
        ns: Vec<usize>,
        #[arg(long, allow_hyphen_values = true, default_value = "-1.5707963267948966,1.5707963267948966")]
        arc: String,
        /// Allowed increase between consecutive distances.
        #[arg(long, default_value_t = 1e-3)]
        tie: f64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> pfaff_core::Result<RunReport> {
    let seed = cli.seed;
    match &cli.command {
        Command::Verify { suite, trials } => verify::run(*suite, *trials, seed),
        Command::Spectrum { kernel, arc, random, csv } => survey::spectrum(kernel, arc, *random, seed, csv.as_deref()),
        Command::Sample { ensemble, n, steps, burn, thin, chains, step_size, no_tune, count, reference_steps, out } => {
            let chain = ChainConfig {
                steps: *steps,
                burn_in: *burn,
                thin: *thin,
                step_size: *step_size,
                seed,
                chains: *chains,
                tune: !no_tune,
                start: None,
            };
            let args = SampleArgs { kind: *ensemble, n: *n, chain, count: *count, reference_steps: *reference_steps };
            mc::sample(&args, out)
        }
        Command::Compare { kernel, samples, bins, arc, min_hits, csv } => {
            let args =
                CompareArgs { kernel: kernel.clone(), samples: samples.clone(), bins: *bins, arcs: arc.clone(), min_hits: *min_hits };
            mc::compare(&args, seed, csv.as_deref())
        }
        Command::Clt { ns, arc, tie, csv } => survey::clt(ns, arc, *tie, seed, csv.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = report.emit(cli.json.as_deref()) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.pass {
        return ExitCode::SUCCESS;
    }
    for r in report.failing() {
        eprintln!("FAIL {}: value {:e}, reference {:e}, tolerance {:e}", r.name, r.value, r.reference, r.tolerance);
    }
    ExitCode::from(1)
}
