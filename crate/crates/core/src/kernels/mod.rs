//! Self-dual quaternion kernels, their diagonal forms and restrictions.

mod circular;
mod descriptor;
mod finite;
mod gse;
mod quaternionic;

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::domain::{Domain, Point, SubDomain};
use crate::error::{Error, Result};
use crate::qcore::{Quaternion, C64};
use crate::qlinalg::QuaternionMatrix;
use crate::quadrature::QuadratureRule;

pub use circular::{circular_symplectic, circular_symplectic_block_matrix, cse_basis, sigma_n4, CseBlockMatrix};
pub use descriptor::{from_descriptor, read_matrix_json, write_matrix_json, KernelSpec};
pub use finite::{finite_diagonal_form, finite_kernel};
pub use gse::{gse, gse_from_polys, skew_inner, skew_orthogonal_polys, Poly, GSE_MAX_PAIRS};
pub use quaternionic::{bergman_quaternion, ginibre_quaternion, phi_n, pfaffian_ginibre_complex};

pub type EvalFn = Arc<dyn Fn(&Point, &Point) -> Quaternion + Send + Sync>;
pub type FunctionFn = Arc<dyn Fn(&Point) -> Quaternion + Send + Sync>;
pub type WeightFn = Arc<dyn Fn(&Point) -> C64 + Send + Sync>;

/// `K(x, y) = Σ λ_k u_k(x) u_k*(y)`.
#[derive(Clone)]
pub struct DiagonalForm {
    pub lambdas: Vec<C64>,
    eigenfunctions: Vec<FunctionFn>,
}

impl DiagonalForm {
    pub fn new(lambdas: Vec<C64>, eigenfunctions: Vec<FunctionFn>) -> Result<Self> {
        if lambdas.len() != eigenfunctions.len() {
            return Err(Error::Shape(format!(
                "{} eigenvalues for {} eigenfunctions",
                lambdas.len(),
                eigenfunctions.len()
            )));
        }
        Ok(DiagonalForm { lambdas, eigenfunctions })
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn u(&self, k: usize, x: &Point) -> Quaternion {
        (self.eigenfunctions[k])(x)
    }

    /// `Σ λ_k u_k(x) u_k*(y)`.
    pub fn reconstruct(&self, x: &Point, y: &Point) -> Quaternion {
        self.eigenfunctions
            .iter()
            .zip(&self.lambdas)
            .fold(Quaternion::ZERO, |acc, (u, &l)| acc + u(x) * u(y).conj() * l)
    }

    /// `G_kl = ∫ u_k*(x) u_l(x) dμ(x)` over the nodes of `quad`, with the
    /// background weight `weight`.
    pub fn gram(&self, quad: &QuadratureRule, weight: &WeightFn) -> QuaternionMatrix {
        let r = self.rank();
        let mut g = QuaternionMatrix::zeros(r, r);
        let mut vals = vec![Quaternion::ZERO; r];
        for (x, &w) in quad.nodes.iter().zip(&quad.weights) {
            let wx = weight(x) * w;
            for (v, u) in vals.iter_mut().zip(&self.eigenfunctions) {
                *v = u(x);
            }
            for k in 0..r {
                let left = vals[k].conj() * wx;
                for l in 0..r {
                    g[(k, l)] += left * vals[l];
                }
            }
        }
        g
    }

    /// Whether every `u_k` is real-quaternion valued at the given points.
    pub fn functions_real_at(&self, points: &[Point], tol: f64) -> bool {
        points.iter().all(|x| self.eigenfunctions.iter().all(|u| u(x).is_real(tol)))
    }
}

impl fmt::Debug for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagonalForm").field("lambdas", &self.lambdas).finish_non_exhaustive()
    }
}

/// A self-dual quaternion kernel on a domain with background measure
/// `w(x) dm(x)`.
#[derive(Clone)]
pub struct Kernel {
    descriptor: String,
    domain: Domain,
    support: SubDomain,
    weight: WeightFn,
    eval: EvalFn,
    diagonal: Option<DiagonalForm>,
    rank: Option<usize>,
    matrix: Option<QuaternionMatrix>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("descriptor", &self.descriptor)
            .field("domain", &self.domain)
            .field("support", &self.support)
            .field("rank", &self.rank)
            .finish_non_exhaustive()
    }
}

impl Kernel {
    pub fn new(descriptor: impl Into<String>, domain: Domain, weight: WeightFn, eval: EvalFn) -> Self {
        Kernel {
            descriptor: descriptor.into(),
            domain,
            support: SubDomain::Full,
            weight,
            eval,
            diagonal: None,
            rank: None,
            matrix: None,
        }
    }

    pub fn with_diagonal(mut self, d: DiagonalForm) -> Self {
        self.rank = Some(d.rank());
        self.diagonal = Some(d);
        self
    }

    pub(crate) fn with_matrix(mut self, m: QuaternionMatrix) -> Self {
        self.matrix = Some(m);
        self
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn support(&self) -> &SubDomain {
        &self.support
    }

    pub fn diagonal(&self) -> Option<&DiagonalForm> {
        self.diagonal.as_ref()
    }

    /// Rank bound used to truncate Fredholm series; kept by restriction.
    pub fn rank(&self) -> Option<usize> {
        self.rank
    }

    /// The entries of a kernel on a finite space.
    pub fn matrix(&self) -> Option<&QuaternionMatrix> {
        self.matrix.as_ref()
    }

    pub fn weight(&self, x: &Point) -> C64 {
        (self.weight)(x)
    }

    pub fn weight_fn(&self) -> &WeightFn {
        &self.weight
    }

    /// `K(x, y)` after domain checks.
    pub fn eval(&self, x: &Point, y: &Point) -> Result<Quaternion> {
        self.domain.check(x)?;
        self.domain.check(y)?;
        Ok(self.eval_unchecked(x, y))
    }

    /// `K(x, y)` without domain checks; zero outside the support.
    pub fn eval_unchecked(&self, x: &Point, y: &Point) -> Quaternion {
        if self.support.contains(x) && self.support.contains(y) {
            (self.eval)(x, y)
        } else {
            Quaternion::ZERO
        }
    }

    /// Gram matrix `(K(x_i, x_j))`.
    pub fn gram(&self, points: &[Point]) -> Result<QuaternionMatrix> {
        for p in points {
            self.domain.check(p)?;
        }
        Ok(QuaternionMatrix::from_fn(points.len(), points.len(), |i, j| {
            self.eval_unchecked(&points[i], &points[j])
        }))
    }

    /// Default quadrature over the support of the kernel.
    pub fn quadrature(&self) -> Result<QuadratureRule> {
        QuadratureRule::for_subdomain(&self.domain, &self.support)
    }

    /// Largest `|K(y,x) − K(x,y)*| / (1 + |K(x,y)|)` over random pairs.
    pub fn self_dual_residual<R: Rng + ?Sized>(&self, pairs: usize, rng: &mut R) -> f64 {
        (0..pairs)
            .map(|_| {
                let x = self.domain.random_point(rng);
                let y = self.domain.random_point(rng);
                let k = self.eval_unchecked(&x, &y);
                let kt = self.eval_unchecked(&y, &x);
                (kt - k.conj()).max_abs() / (1.0 + k.max_abs())
            })
            .fold(0.0, f64::max)
    }

    /// `1_D(x) K(x, y) 1_D(y)`; the diagonal form is dropped, the rank bound
    /// kept.
    pub fn restrict(&self, sub: &SubDomain) -> Result<Kernel> {
        sub.check_within(&self.domain)?;
        if !matches!(self.support, SubDomain::Full) && !matches!(sub, SubDomain::Full) {
            return Err(Error::SubDomain("kernel is already restricted".into()));
        }
        let mut k = self.clone();
        if !matches!(sub, SubDomain::Full) {
            k.support = sub.clone();
            k.descriptor = format!("{}|{}", self.descriptor, describe_sub(sub));
        }
        k.diagonal = None;
        Ok(k)
    }

    /// `g(x) K(x, y) g(y)` for a scalar function `g`; the rank bound is kept.
    pub fn symmetrized(&self, g: Arc<dyn Fn(&Point) -> C64 + Send + Sync>) -> Kernel {
        let inner = self.eval.clone();
        let support = self.support.clone();
        let mut k = self.clone();
        k.eval = Arc::new(move |x, y| {
            if support.contains(x) && support.contains(y) {
                inner(x, y) * (g(x) * g(y))
            } else {
                Quaternion::ZERO
            }
        });
        k.diagonal = None;
        k.matrix = None;
        k.descriptor = format!("{}|scaled", self.descriptor);
        k
    }
}

fn describe_sub(sub: &SubDomain) -> String {
    match sub {
        SubDomain::Full => "full".into(),
        SubDomain::Arc { start, length } => format!("arc={start},{}", start + length),
        SubDomain::Interval { lo, hi } => format!("interval={lo},{hi}"),
        SubDomain::Indices(ix) => format!("indices={ix:?}"),
    }
}

pub(crate) fn unit_weight() -> WeightFn {
    Arc::new(|_| C64::new(1.0, 0.0))
}
