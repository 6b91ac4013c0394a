use std::f64::consts::PI;
use std::sync::Arc;

use clap::ValueEnum;
use pfaff_core::domain::{Point, SubDomain};
use pfaff_core::identities::{cauchy_binet_sides, cauchy_binet_weighted_sides};
use pfaff_core::kernels::{
    circular_symplectic, circular_symplectic_block_matrix, finite_kernel, from_descriptor, ginibre_quaternion, gse,
};
use pfaff_core::pointfield::{
    char_function_count, complete_positivity_check, correlation, diagonal_form_check, dyson_integration_check,
    expected_product, fredholm_det, fredholm_rule, reproducing_check,
};
use pfaff_core::qlinalg::{
    moore_dyson_det, moore_dyson_via_adjoint, moore_dyson_via_pfaffian, pfaffian, pfaffian_combinatorial,
    selfdual_eigenvalues, study_det, PAIR_TOL,
};
use pfaff_core::quadrature::QuadratureRule;
use pfaff_core::{ComplexMatrix, Quaternion, QuaternionMatrix, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::report::{Provenance, Record, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    Determinants,
    CauchyBinet,
    Kernels,
    Fredholm,
    DysonLemma,
}

impl Suite {
    fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Kernels exercised by the `kernels` suite.
pub const SHIPPED: [&str; 7] =
    ["cse:N=2", "cse:N=4", "gse:N=2", "gse:N=3", "ginibre-q:n=3", "bergman-q:n=3", "pfaffian-ginibre-c:N=2"];

pub fn run(suite: Suite, trials: usize, seed: u64) -> Result<RunReport> {
    let mut report = RunReport::new("verify", suite.name(), seed, json!({ "suite": suite.name(), "trials": trials }));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match suite {
        Suite::Algebra => algebra(&mut report, trials, &mut rng),
        Suite::Determinants => determinants(&mut report, trials, &mut rng)?,
        Suite::CauchyBinet => cauchy_binet(&mut report, trials, &mut rng)?,
        Suite::Kernels => kernels(&mut report, trials, &mut rng)?,
        Suite::Fredholm => fredholm(&mut report, trials, &mut rng)?,
        Suite::DysonLemma => dyson(&mut report, trials, &mut rng)?,
    }
    Ok(report.finish())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn rand_c<R: Rng>(rng: &mut R) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn rand_quat<R: Rng>(rng: &mut R, real: bool) -> Quaternion {
    if real {
        Quaternion::real(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        )
    } else {
        Quaternion::new(rand_c(rng), rand_c(rng), rand_c(rng), rand_c(rng))
    }
}

fn rand_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> QuaternionMatrix {
    QuaternionMatrix::from_fn(rows, cols, |_, _| rand_quat(rng, false))
}

fn rand_self_dual<R: Rng>(rng: &mut R, n: usize, real: bool) -> QuaternionMatrix {
    let mut m = QuaternionMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = if real { Quaternion::from_real(rng.random_range(-1.0..1.0)) } else { Quaternion::scalar(rand_c(rng)) };
        for j in i + 1..n {
            let q = rand_quat(rng, real);
            m[(i, j)] = q;
            m[(j, i)] = q.conj();
        }
    }
    m
}

fn rand_skew<R: Rng>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rand_c(rng);
            m[(i, j)] = v;
            m[(j, i)] = -v;
        }
    }
    m
}

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}

fn algebra<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    let table = [
        ("ij = k", i * j, k),
        ("jk = i", j * k, i),
        ("ki = j", k * i, j),
        ("ji = -k", j * i, -k),
        ("kj = -i", k * j, -i),
        ("ik = -j", i * k, -j),
        ("i² = -1", i * i, -Quaternion::ONE),
        ("ijk = -1", i * j * k, -Quaternion::ONE),
    ];
    for (name, got, want) in table {
        report.push(Record::deviation(format!("unit table {name}"), (got - want).max_abs(), 0.0, Provenance::Identity));
    }
    let (mut hom, mut conj, mut anti): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..trials {
        let (p, q) = (rand_quat(rng, false), rand_quat(rng, false));
        hom = hom.max((p * q).phi().max_abs_diff(&(p.phi() * q.phi())));
        conj = conj.max(p.conj().phi().max_abs_diff(&p.phi().adjugate()));
        anti = anti.max(((p * q).conj() - q.conj() * p.conj()).max_abs());
    }
    report.push(Record::deviation("embedding is multiplicative", hom, 1e-12, Provenance::Identity));
    report.push(Record::deviation("conjugate embeds as adjugate", conj, 1e-12, Provenance::Identity));
    report.push(Record::deviation("conjugation reverses products", anti, 1e-12, Provenance::Identity));
}

/// The four two-by-two matrices used as fixtures.
pub fn examples() -> [QuaternionMatrix; 4] {
    let a1 = Quaternion::new(c(0.0, 0.0), c(0.0, 0.75), c(-1.25, 0.0), c(0.0, 0.0));
    let a2 = Quaternion::new(c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0));
    let h = Quaternion::scalar(c(0.0, 0.5));
    let a4 = Quaternion::new(c(1.0, 2.0), c(1.9, -20.0 / 19.0), c(0.0, 0.0), c(0.0, 0.0));
    let one = Quaternion::ONE;
    let m = |rows: Vec<Vec<Quaternion>>| QuaternionMatrix::from_rows(rows).expect("square fixture");
    [
        m(vec![vec![one, -a1], vec![a1, one]]).scale(c(0.5, 0.0)),
        m(vec![vec![one, a2], vec![-a2, one]]),
        m(vec![vec![one, h], vec![h, Quaternion::from_real(-0.25)]]).scale(c(4.0 / 3.0, 0.0)),
        m(vec![vec![one, a4], vec![a4.conj(), one]]).scale(c(0.5, 0.0)),
    ]
}

fn determinants<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) -> Result<()> {
    let [first, second, _, fourth] = examples();
    let d4 = moore_dyson_det(&fourth)?;
    report.push(Record::within("fourth example Det_M", d4.s.re, 0.3745, 1e-3, Provenance::Identity));
    let ev = selfdual_eigenvalues(&fourth, PAIR_TOL)?;
    for (n, l) in ev.iter().enumerate() {
        report.push(Record::within(format!("fourth example eigenvalue {n} real part"), l.re, 0.5, 1e-3, Provenance::Identity));
        report.push(Record::within(format!("fourth example eigenvalue {n} |imag part|"), l.im.abs(), 0.3529, 1e-3, Provenance::Identity));
    }
    let d1 = moore_dyson_det(&first)?;
    report.push(Record::deviation("first example Det_M = 0", d1.max_abs(), 1e-12, Provenance::Identity));
    let d2 = moore_dyson_det(&second)?;
    report.push(Record::deviation("second example Det_M = 1", (d2 - Quaternion::ONE).max_abs(), 1e-12, Provenance::Identity));

    let (mut scalar, mut routes, mut adjoint, mut eig, mut study): (f64, f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in 0..trials {
        let n = rng.random_range(1..=5);
        let real = t % 2 == 0;
        let x = rand_self_dual(rng, n, real);
        let cayley = moore_dyson_det(&x)?;
        scalar = scalar.max(cayley.vector_max_abs());
        let pf = moore_dyson_via_pfaffian(&x, 1e-12)?;
        routes = routes.max(rel(cayley.s, pf));
        if real {
            adjoint = adjoint.max(rel(moore_dyson_via_adjoint(&x, 1e-12)?, pf));
            let product: C64 = selfdual_eigenvalues(&x, PAIR_TOL)?.iter().product();
            eig = eig.max(rel(product, pf));
        }
        let y = rand_matrix(rng, n, n);
        let s = study_det(&y)?;
        study = study.max((s - moore_dyson_det(&y.gram())?.s).norm() / (1.0 + s.norm()));
    }
    report.push(Record::deviation("Det_M of self-dual is scalar", scalar, 1e-10, Provenance::Identity));
    report.push(Record::deviation("Cayley vs Pfaffian route", routes, 1e-9, Provenance::Identity));
    report.push(Record::deviation("adjoint vs Pfaffian route", adjoint, 1e-9, Provenance::Identity));
    report.push(Record::deviation("eigenvalue product vs Pfaffian route", eig, 1e-8, Provenance::Identity));
    report.push(Record::deviation("Det_S(X) = Det_M(X*X)", study, 1e-9, Provenance::Identity));

    let (mut pf_routes, mut pf_square): (f64, f64) = (0.0, 0.0);
    for t in 0..trials {
        let n = 2 * (1 + t % 4);
        let m = rand_skew(rng, n);
        let (a, b) = (pfaffian(&m, 1e-12)?, pfaffian_combinatorial(&m, 1e-12)?);
        pf_routes = pf_routes.max((a - b).norm() / b.norm().max(1e-300));
        let det = m.determinant();
        pf_square = pf_square.max((a * a - det).norm() / det.norm().max(1e-300));
    }
    report.push(Record::deviation("Pfaffian elimination vs permutation sum", pf_routes, 1e-10, Provenance::Identity));
    report.push(Record::deviation("Pf² = det", pf_square, 1e-9, Provenance::Identity));
    Ok(())
}

fn cauchy_binet<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) -> Result<()> {
    let (mut plain, mut weighted, mut perm): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..trials {
        let n = rng.random_range(1..=6);
        let m = rng.random_range(1..=n.min(4));
        let cm = rand_matrix(rng, n, m);
        let sides = cauchy_binet_sides(&cm)?;
        plain = plain.max(sides.relative_gap());
        let lambda: Vec<C64> = (0..n).map(|_| rand_c(rng)).collect();
        weighted = weighted.max(cauchy_binet_weighted_sides(&cm, &lambda)?.relative_gap());
        let mut order: Vec<usize> = (0..n).collect();
        order.reverse();
        order.rotate_left(rng.random_range(0..n));
        let shuffled = cauchy_binet_sides(&cm.select_rows(&order))?;
        perm = perm.max(rel(shuffled.lhs, sides.lhs)).max(rel(shuffled.rhs, sides.rhs));
    }
    report.push(Record::deviation("unweighted sides agree", plain, 1e-8, Provenance::Identity));
    report.push(Record::deviation("weighted sides agree", weighted, 1e-8, Provenance::Identity));
    report.push(Record::deviation("row permutation leaves both sides fixed", perm, 1e-10, Provenance::Identity));
    Ok(())
}

fn kernels<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) -> Result<()> {
    for d in SHIPPED {
        let k = from_descriptor(d)?;
        report.push(Record::deviation(format!("{d} self-dual"), k.self_dual_residual(100, rng), 1e-10, Provenance::Identity));
        if k.diagonal().is_some() {
            let r = diagonal_form_check(&k, 32, rng.random())?;
            report.push(Record::deviation(format!("{d} diagonal form reconstructs"), r.reconstruction_residual, 1e-8, Provenance::Identity));
        }
    }
    let pairs = trials.max(4);
    for n in 1..=4 {
        let k = circular_symplectic(n)?;
        let blocks = circular_symplectic_block_matrix(n)?;
        let mut worst: f64 = 0.0;
        for _ in 0..pairs {
            let (a, b) = (rng.random_range(-PI..PI), rng.random_range(-PI..PI));
            worst = worst.max((k.eval(&Point::Angle(a), &Point::Angle(b))? - blocks.eval(a, b)).max_abs());
        }
        report.push(Record::deviation(format!("cse:N={n} block matrix agrees"), worst, 1e-10, Provenance::Identity));
    }

    let [_, _, third, fourth] = examples();
    let k3 = finite_kernel(third)?;
    let r1 = correlation(&k3, &[Point::Index(1)])?.value;
    report.push(Record::within("third example R1 at the second point", r1, -1.0 / 3.0, 1e-12, Provenance::Identity));
    let singletons = vec![vec![Point::Index(0)], vec![Point::Index(1)], vec![Point::Index(0), Point::Index(1)]];
    let pos = complete_positivity_check(&k3, &singletons, 1e-9)?;
    report.push(Record::within("third example minimum positivity value", pos.min_value, -1.0 / 3.0, 1e-10, Provenance::Identity));

    let g = diagonal_form_check(&ginibre_quaternion(3)?, 64, 1)?;
    report.push(Record::flag("ginibre-q:n=3 has a real diagonal form", g.is_real_form, true, Provenance::Quadrature));
    let cse = diagonal_form_check(&circular_symplectic(2)?, 64, 1)?;
    report.push(Record::flag("cse:N=2 is quasi-real", cse.is_quasi_real, true, Provenance::Quadrature));
    report.push(Record::flag("cse:N=2 has a real diagonal form", cse.is_real_form, false, Provenance::Quadrature));
    let f = diagonal_form_check(&finite_kernel(fourth)?, 8, 1)?;
    report.push(Record::flag("fourth example is quasi-real", f.is_quasi_real, false, Provenance::Identity));

    for (k, quad) in [
        (circular_symplectic(3)?, QuadratureRule::trapezoid_circle(512)),
        (gse(2)?, QuadratureRule::gauss_hermite_line(80)),
    ] {
        let pts: Vec<(Point, Point)> =
            (0..pairs.min(20)).map(|_| (k.domain().random_point(rng), k.domain().random_point(rng))).collect();
        let r = reproducing_check(&k, &quad, &pts, 1e-8);
        report.push(Record::deviation(
            format!("{} reproduces itself", k.descriptor()),
            r.projection_residual,
            1e-8,
            Provenance::Quadrature,
        ));
    }
    Ok(())
}

fn fredholm<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) -> Result<()> {
    let mut scales = vec![c(-1.0, 0.0), c(0.5, 0.0), C64::new(0.0, 0.7).exp() - 1.0];
    scales.extend((0..trials.min(20)).map(|_| C64::new(0.0, rng.random_range(-PI..PI)).exp() - 1.0));
    let kernels = [circular_symplectic(1)?, circular_symplectic(2)?, circular_symplectic(3)?, gse(1)?, gse(2)?];
    for k in &kernels {
        let quad = fredholm_rule(k)?;
        let lambdas = k.diagonal().map(|d| d.lambdas.clone()).unwrap_or_default();
        let (mut det, mut prod): (f64, f64) = (0.0, 0.0);
        for &s in &scales {
            let product: C64 = lambdas.iter().map(|l| 1.0 + s * l).product();
            let scale = 1.0 + product.norm();
            det = det.max((fredholm_det(k, s, &quad)?.value - product).norm() / scale);
            let ep = expected_product(k, Arc::new(move |_: &Point| s), &quad)?.value;
            prod = prod.max((ep - product).norm() / scale);
        }
        report.push(Record::deviation(format!("{} Fredholm determinant vs product", k.descriptor()), det, 1e-7, Provenance::Quadrature));
        report.push(Record::deviation(format!("{} expected product vs product", k.descriptor()), prod, 1e-7, Provenance::Quadrature));
    }
    let half = SubDomain::arc(-PI / 2.0, PI / 2.0)?;
    for n in 1..=3 {
        let k = circular_symplectic(n)?;
        let mut worst: f64 = 0.0;
        for t in [0.3, 1.1, 2.9] {
            worst = worst.max(char_function_count(&k, &half, t)?.discrepancy);
        }
        report.push(Record::deviation(format!("cse:N={n} half-circle characteristic function"), worst, 1e-7, Provenance::Quadrature));
    }
    Ok(())
}

fn dyson<R: Rng>(report: &mut RunReport, trials: usize, rng: &mut R) -> Result<()> {
    let probes = trials.clamp(1, 10);
    for (k, m, quad, tol) in [
        (circular_symplectic(2)?, 2, QuadratureRule::trapezoid_circle(512), 1e-6),
        (circular_symplectic(3)?, 2, QuadratureRule::trapezoid_circle(512), 1e-6),
        (circular_symplectic(3)?, 3, QuadratureRule::trapezoid_circle(512), 1e-6),
        (gse(2)?, 2, QuadratureRule::gauss_hermite_line(80), 1e-5),
    ] {
        let p: Vec<Vec<Point>> =
            (0..probes).map(|_| (0..m - 1).map(|_| k.domain().random_point(rng)).collect()).collect();
        let r = dyson_integration_check(&k, m, &quad, &p, tol)?;
        report.push(Record::deviation(
            format!("{} order {m} integration", k.descriptor()),
            r.max_relative_deviation,
            tol,
            Provenance::Quadrature,
        ));
    }
    Ok(())
}
