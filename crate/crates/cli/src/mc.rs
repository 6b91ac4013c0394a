use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use clap::ValueEnum;
use pfaff_core::domain::{Domain, Point, SubDomain};
use pfaff_core::kernels::{from_descriptor, Kernel};
use pfaff_core::pointfield::{correlation_value, restricted_spectrum};
use pfaff_core::quadrature::gauss_legendre;
use pfaff_core::sampler::{
    estimate_counting, estimate_r1, estimate_r2, mcmc, read_jsonl, sample_gse_matrix_spectra, scale_fit, write_jsonl,
    ChainConfig, Ensemble, PointConfiguration, MIN_BATCHES,
};
use pfaff_core::{Error, Exec, Result};
use serde_json::json;

use crate::report::{write_csv, Provenance, Record, RunReport};
use crate::survey::{bounds, parse_subdomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    Cse,
    Gse,
    GseMatrix,
}

/// Flags of the `sample` command.
#[derive(Clone, Debug)]
pub struct SampleArgs {
    pub kind: SampleKind,
    pub n: usize,
    pub chain: ChainConfig,
    /// Matrices drawn by `gse-matrix`.
    pub count: usize,
    /// Sweeps of the reference chain used for the `gse-matrix` scale fit.
    pub reference_steps: usize,
}

/// Half of the domain, used for effective-sample-size metadata.
fn half(domain: &Domain) -> SubDomain {
    match domain {
        Domain::Circle => SubDomain::Arc { start: -PI / 2.0, length: PI },
        _ => SubDomain::Interval { lo: 0.0, hi: f64::INFINITY },
    }
}

fn write_samples(path: &Path, samples: &[PointConfiguration]) -> Result<()> {
    write_jsonl(samples, BufWriter::new(File::create(path)?))
}

pub fn sample(args: &SampleArgs, out: &Path) -> Result<RunReport> {
    let cfg = &args.chain;
    let name = args.kind.to_possible_value().expect("no skipped variants").get_name().to_string();
    let params = json!({
        "ensemble": name, "n": args.n, "steps": cfg.steps, "burn_in": cfg.burn_in, "thin": cfg.thin,
        "chains": cfg.chains, "step_size": cfg.step_size, "tune": cfg.tune, "output": out,
        "count": args.count, "reference_steps": args.reference_steps,
    });
    let mut report = RunReport::new("sample", format!("{name}:N={}", args.n), cfg.seed, params);
    let (samples, expected, metadata) = match args.kind {
        SampleKind::Cse | SampleKind::Gse => {
            let ensemble = if args.kind == SampleKind::Cse { Ensemble::Cse } else { Ensemble::Gse };
            let set = mcmc(ensemble, args.n, cfg, Exec::Parallel)?;
            for c in set.chains.iter().filter(|c| c.flagged) {
                report.warnings.push(format!("chain {} acceptance {:.3} outside the target range", c.chain, c.acceptance));
            }
            let ess = estimate_counting(&set.samples, &ensemble.domain(), &half(&ensemble.domain()))
                .map(|e| e.effective_samples)
                .ok();
            let meta = json!({ "chains": set.chains, "effective_samples_half_domain": ess });
            (set.samples, cfg.chains * cfg.retained(), meta)
        }
        SampleKind::GseMatrix => {
            let reference_cfg = ChainConfig { steps: args.reference_steps, ..cfg.clone() };
            let reference = mcmc(Ensemble::Gse, args.n, &reference_cfg, Exec::Parallel)?;
            let raw = sample_gse_matrix_spectra(args.n, args.count, cfg.seed, Exec::Parallel)?;
            let fit = scale_fit(&reference.samples, &raw)?;
            (fit.apply(&raw), args.count, json!({ "scale_fit": fit, "reference_samples": reference.samples.len() }))
        }
    };
    write_samples(out, &samples)?;
    report.push(Record::within("configurations written", samples.len() as f64, expected as f64, 0.0, Provenance::Identity));
    report.metadata = metadata;
    Ok(report.finish())
}

/// Flags of the `compare` command.
#[derive(Clone, Debug)]
pub struct CompareArgs {
    pub kernel: String,
    pub samples: std::path::PathBuf,
    pub bins: usize,
    pub arcs: Vec<String>,
    pub min_hits: usize,
}

fn check_compatible(k: &Kernel, samples: &[PointConfiguration]) -> Result<()> {
    if !matches!(k.domain(), Domain::Circle | Domain::Line) {
        return Err(Error::SubDomain(format!("samples live on the circle or the line, not {:?}", k.domain())));
    }
    if samples.is_empty() {
        return Err(Error::TooFewBatches { got: 0, need: MIN_BATCHES });
    }
    for c in samples {
        for &x in &c.points {
            if !x.is_finite() || (matches!(k.domain(), Domain::Circle) && !(-PI..PI).contains(&x)) {
                return Err(Error::OutsideDomain(format!("{x} in chain {} step {}", c.chain, c.step)));
            }
        }
    }
    let expected: f64 = k.diagonal().ok_or(Error::MissingDiagonalForm)?.lambdas.iter().map(|l| l.re).sum();
    if let Some(c) = samples.iter().find(|c| (c.points.len() as f64 - expected).abs() > 1e-6) {
        return Err(Error::Shape(format!(
            "sample has {} points but {} has expected count {expected}",
            c.points.len(),
            k.descriptor()
        )));
    }
    Ok(())
}

fn bin_edges(domain: &Domain, samples: &[PointConfiguration], bins: usize) -> Vec<f64> {
    let (lo, hi) = match domain {
        Domain::Circle => (-PI, PI),
        _ => {
            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for x in samples.iter().flat_map(|c| &c.points) {
                lo = lo.min(*x);
                hi = hi.max(*x);
            }
            (lo.floor(), hi.ceil().max(lo.floor() + 1.0))
        }
    };
    (0..=bins).map(|j| lo + (hi - lo) * j as f64 / bins as f64).collect()
}

fn point(domain: &Domain, x: f64) -> Point {
    match domain {
        Domain::Circle => Point::Angle(x.clamp(-PI, PI - 1e-15)),
        _ => Point::Real(x),
    }
}

/// Mean of `R₁` over `[a, b)`.
fn r1_mean(k: &Kernel, a: f64, b: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(8);
    let mut total = 0.0;
    for (t, w) in x.iter().zip(&w) {
        total += 0.5 * w * correlation_value(k, &[point(k.domain(), a + 0.5 * (b - a) * (t + 1.0))])?;
    }
    Ok(total)
}

/// Mean of `R₂` over `[a, b) × [c, d)`.
fn r2_mean(k: &Kernel, a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    let (x, w) = gauss_legendre(4);
    let mut total = 0.0;
    for (s, ws) in x.iter().zip(&w) {
        for (t, wt) in x.iter().zip(&w) {
            let u = point(k.domain(), a + 0.5 * (b - a) * (s + 1.0));
            let v = point(k.domain(), c + 0.5 * (d - c) * (t + 1.0));
            total += 0.25 * ws * wt * correlation_value(k, &[u, v])?;
        }
    }
    Ok(total)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn compare(args: &CompareArgs, seed: u64, csv: Option<&Path>) -> Result<RunReport> {
    let k = from_descriptor(&args.kernel)?;
    let samples = read_jsonl(BufReader::new(File::open(&args.samples)?))?;
    check_compatible(&k, &samples)?;
    let domain = k.domain().clone();
    let subs = if args.arcs.is_empty() {
        vec![match domain {
            Domain::Circle => SubDomain::arc(-PI / 2.0, PI / 2.0)?,
            _ => SubDomain::Interval { lo: -1.0, hi: 1.0 },
        }]
    } else {
        args.arcs.iter().map(|a| parse_subdomain(&domain, a)).collect::<Result<Vec<_>>>()?
    };
    let mut report = RunReport::new(
        "compare",
        k.descriptor(),
        seed,
        json!({
            "samples": args.samples, "configurations": samples.len(), "bins": args.bins,
            "arcs": subs.iter().map(bounds).collect::<Vec<_>>(), "min_hits": args.min_hits,
        }),
    );
    let mut rows: Vec<Vec<String>> = Vec::new();

    for (a, sub) in subs.iter().enumerate() {
        let est = estimate_counting(&samples, &domain, sub)?;
        let mu = restricted_spectrum(&k, sub)?;
        let mean: f64 = mu.iter().map(|l| l.re).sum();
        let var: f64 = mu.iter().map(|l| l.re * (1.0 - l.re)).sum();
        report.push(Record::within(format!("arc {a} count mean"), est.mean, mean, 3.0 * est.mean_se, Provenance::MonteCarlo));
        report.push(Record::within(format!("arc {a} count variance"), est.variance, var, 4.0 * est.variance_se, Provenance::MonteCarlo));
        let (lo, hi) = bounds(sub);
        rows.push(vec![
            "count_mean".into(), lo.to_string(), hi.to_string(), String::new(), String::new(),
            est.samples.to_string(), est.mean.to_string(), est.mean_se.to_string(), mean.to_string(),
        ]);
        rows.push(vec![
            "count_variance".into(), lo.to_string(), hi.to_string(), String::new(), String::new(),
            est.samples.to_string(), est.variance.to_string(), est.variance_se.to_string(), var.to_string(),
        ]);
    }

    let edges = bin_edges(&domain, &samples, args.bins.max(1));
    let r1 = estimate_r1(&samples, &edges)?;
    for b in 0..edges.len() - 1 {
        let predicted = r1_mean(&k, edges[b], edges[b + 1])?;
        if let (true, Some(v), Some(se)) = (r1.hits[b] >= args.min_hits, r1.density[b], r1.se[b]) {
            report.push(Record::within(
                format!("R1 bin [{:.4}, {:.4})", edges[b], edges[b + 1]),
                v,
                predicted,
                4.0 * se,
                Provenance::MonteCarlo,
            ));
        }
        rows.push(vec![
            "r1".into(), edges[b].to_string(), edges[b + 1].to_string(), String::new(), String::new(),
            r1.hits[b].to_string(), fmt_opt(r1.density[b]), fmt_opt(r1.se[b]), predicted.to_string(),
        ]);
    }
    if csv.is_some() {
        let r2 = estimate_r2(&samples, &edges)?;
        for u in 0..edges.len() - 1 {
            for v in 0..edges.len() - 1 {
                let predicted = r2_mean(&k, edges[u], edges[u + 1], edges[v], edges[v + 1])?;
                rows.push(vec![
                    "r2".into(), edges[u].to_string(), edges[u + 1].to_string(), edges[v].to_string(),
                    edges[v + 1].to_string(), r2.hits[u][v].to_string(), fmt_opt(r2.values[u][v]),
                    fmt_opt(r2.se[u][v]), predicted.to_string(),
                ]);
            }
        }
    }
    if let Some(path) = csv {
        write_csv(path, &["kind", "a_lo", "a_hi", "b_lo", "b_hi", "hits", "estimate", "se", "prediction"], &rows)?;
    }
    Ok(report.finish())
}
