use std::f64::consts::PI;
use std::path::Path;

use pfaff_core::domain::{Domain, SubDomain};
use pfaff_core::kernels::from_descriptor;
use pfaff_core::pointfield::{clt_diagnostic, restricted_spectrum};
use pfaff_core::{Error, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{write_csv, Provenance, Record, RunReport};

/// Tolerance on imaginary parts and on excursions outside `[0, 1]`.
pub const SPECTRUM_TOL: f64 = 1e-8;

/// Parses `a,b` as an arc of the circle or an interval of the line.
pub fn parse_subdomain(domain: &Domain, text: &str) -> Result<SubDomain> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("`{text}` is not of the form a,b")))?;
    let parse = |s: &str| -> Result<f64> {
        s.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("`{s}` is not a number")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    let sub = match domain {
        Domain::Circle => SubDomain::arc(a, b)?,
        Domain::Line if a < b => SubDomain::Interval { lo: a, hi: b },
        Domain::Line => return Err(Error::InvalidArgument(format!("interval [{a}, {b}) is empty"))),
        other => return Err(Error::SubDomain(format!("arcs are not defined on {other:?}"))),
    };
    sub.check_within(domain)?;
    Ok(sub)
}

/// `(start, end)` of a sub-domain for reporting.
pub fn bounds(sub: &SubDomain) -> (f64, f64) {
    match sub {
        SubDomain::Arc { start, length } => (*start, start + length),
        SubDomain::Interval { lo, hi } => (*lo, *hi),
        _ => (f64::NAN, f64::NAN),
    }
}

fn random_subdomain<R: Rng>(domain: &Domain, rng: &mut R) -> Result<SubDomain> {
    match domain {
        Domain::Circle => {
            let start = rng.random_range(-PI..PI);
            Ok(SubDomain::Arc { start, length: rng.random_range(0.05..2.0 * PI - 0.05) })
        }
        Domain::Line => {
            let lo = rng.random_range(-3.0..3.0);
            Ok(SubDomain::Interval { lo, hi: lo + rng.random_range(0.1..3.0) })
        }
        other => Err(Error::SubDomain(format!("random arcs are not defined on {other:?}"))),
    }
}

pub fn spectrum(descriptor: &str, arcs: &[String], random: usize, seed: u64, csv: Option<&Path>) -> Result<RunReport> {
    let k = from_descriptor(descriptor)?;
    if k.diagonal().is_none() {
        return Err(Error::MissingDiagonalForm);
    }
    let mut subs = arcs.iter().map(|a| parse_subdomain(k.domain(), a)).collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..random {
        subs.push(random_subdomain(k.domain(), &mut rng)?);
    }
    if subs.is_empty() {
        return Err(Error::InvalidArgument("give at least one --arc or --random count".into()));
    }
    let mut report = RunReport::new(
        "spectrum",
        k.descriptor(),
        seed,
        json!({ "arcs": subs.iter().map(bounds).collect::<Vec<_>>(), "random": random }),
    );
    let mut rows = Vec::new();
    let (mut imag, mut excursion): (f64, f64) = (0.0, 0.0);
    for (a, sub) in subs.iter().enumerate() {
        let (lo, hi) = bounds(sub);
        let spectrum = restricted_spectrum(&k, sub)?;
        for (j, l) in spectrum.iter().enumerate() {
            imag = imag.max(l.im.abs());
            excursion = excursion.max(-l.re).max(l.re - 1.0);
            rows.push(vec![a.to_string(), lo.to_string(), hi.to_string(), j.to_string(), l.re.to_string(), l.im.to_string()]);
        }
        let trace: f64 = spectrum.iter().map(|l| l.re).sum();
        report.push(Record::deviation(format!("arc {a} max |imag|"), max_imag(&spectrum), SPECTRUM_TOL, Provenance::Quadrature));
        report.push(Record::deviation(
            format!("arc {a} excursion outside [0, 1]"),
            spectrum.iter().map(|l| (-l.re).max(l.re - 1.0)).fold(0.0, f64::max),
            SPECTRUM_TOL,
            Provenance::Quadrature,
        ));
        if matches!(k.domain(), Domain::Circle) {
            let expected = k.rank().unwrap_or(0) as f64 * (hi - lo) / (2.0 * PI);
            report.push(Record::within(format!("arc {a} expected count"), trace, expected, 1e-8, Provenance::Quadrature));
        }
    }
    report.metadata = json!({ "max_abs_imag": imag, "max_excursion": excursion.max(0.0) });
    if let Some(path) = csv {
        write_csv(path, &["arc", "start", "end", "index", "re", "im"], &rows)?;
    }
    Ok(report.finish())
}

fn max_imag(spectrum: &[C64]) -> f64 {
    spectrum.iter().map(|l| l.im.abs()).fold(0.0, f64::max)
}

pub fn clt(ns: &[usize], arc: &str, tie: f64, seed: u64, csv: Option<&Path>) -> Result<RunReport> {
    if ns.is_empty() {
        return Err(Error::InvalidArgument("give at least one N".into()));
    }
    let sub = parse_subdomain(&Domain::Circle, arc)?;
    let mut spectra = Vec::with_capacity(ns.len());
    for &n in ns {
        let k = from_descriptor(&format!("cse:N={n}"))?;
        spectra.push((format!("cse:N={n}"), restricted_spectrum(&k, &sub)?));
    }
    let offending: Vec<String> = spectra
        .iter()
        .flat_map(|(label, s)| {
            s.iter()
                .filter(|l| l.im.abs() > SPECTRUM_TOL || l.re < -SPECTRUM_TOL || l.re > 1.0 + SPECTRUM_TOL)
                .map(move |l| format!("{label}: {l}"))
        })
        .collect();
    if !offending.is_empty() {
        return Err(Error::EigenvalueRange(offending.join(", ")));
    }
    let diag = clt_diagnostic(&spectra, tie)?;
    let mut report = RunReport::new("clt", "cse", seed, json!({ "ns": ns, "arc": bounds(&sub), "tie_tolerance": tie }));
    let mut rows = Vec::new();
    for (w, (row, &n)) in diag.rows.iter().zip(ns).enumerate() {
        rows.push(vec![n.to_string(), row.mean.to_string(), row.variance.to_string(), row.kolmogorov.to_string()]);
        if w > 0 {
            let prev = diag.rows[w - 1].kolmogorov;
            report.push(Record {
                name: format!("distance at N={n} does not exceed N={}", ns[w - 1]),
                value: row.kolmogorov,
                reference: prev,
                tolerance: tie,
                pass: row.kolmogorov <= prev + tie,
                provenance: Provenance::Identity,
            });
        }
    }
    report.metadata = serde_json::to_value(&diag).map_err(Error::from)?;
    if let Some(path) = csv {
        write_csv(path, &["N", "mean", "variance", "kolmogorov"], &rows)?;
    }
    Ok(report.finish())
}
