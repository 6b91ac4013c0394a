//! Quaternion matrices, their complex embeddings, quaternion determinants,
//! complex Pfaffians and the spectra of self-dual matrices.

mod det;
mod eigen;
mod pfaffian;

pub use det::{
    moore_dyson_det, moore_dyson_det_with, moore_dyson_via_adjoint, moore_dyson_via_pfaffian,
    study_det, CAYLEY_LIMIT,
};
pub use eigen::{complex_eigenvalues, pair_kramers, selfdual_eigenvalues, PAIR_TOL};
pub use pfaffian::{pfaffian, pfaffian_combinatorial, skew_residual, COMBINATORIAL_LIMIT};

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Quaternion, C64};

/// Dense complex matrix used for the embeddings `φ(X)` and `ψ(X)`.
pub type ComplexMatrix = DMatrix<C64>;

/// Dense row-major matrix of complexified quaternions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QuaternionMatrix { rows, cols, entries: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QuaternionMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(QuaternionMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(QuaternionMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// The dual `X*` with `(X*)_{lk} = (X_{kl})*`.
    pub fn dual(&self) -> Self {
        QuaternionMatrix::from_fn(self.cols, self.rows, |l, k| self[(k, l)].conj())
    }

    /// Largest coefficient of `X - X*`; infinite for non-square input.
    pub fn self_dual_residual(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).max_abs());
            }
        }
        r
    }

    pub fn is_self_dual(&self, tol: f64) -> bool {
        self.self_dual_residual() <= tol
    }

    pub(crate) fn require_self_dual(&self, tol: f64) -> Result<usize> {
        let n = self.require_square()?;
        let residual = self.self_dual_residual();
        if residual > tol * (1.0 + self.max_abs()) {
            return Err(Error::NotSelfDual { residual });
        }
        Ok(n)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.entries.iter().all(|q| q.is_real(tol))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(Quaternion::max_abs).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &QuaternionMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).max_abs())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, c: C64) -> Self {
        QuaternionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|q| q.scale(c)).collect(),
        }
    }

    /// Sub-matrix made of the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Self {
        QuaternionMatrix::from_fn(rows.len(), self.cols, |i, j| self[(rows[i], j)])
    }

    /// Left multiplication by the diagonal matrix `diag(weights)`.
    pub fn scale_rows(&self, weights: &[C64]) -> Result<Self> {
        if weights.len() != self.rows {
            return Err(Error::Shape(format!(
                "{} weights for {} rows",
                weights.len(),
                self.rows
            )));
        }
        Ok(QuaternionMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].scale(weights[i])))
    }

    pub fn matmul(&self, rhs: &QuaternionMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(QuaternionMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Quaternion::ZERO;
            for k in 0..self.cols {
                acc += self[(i, k)] * rhs[(k, j)];
            }
            acc
        }))
    }

    /// `X* X`, the self-dual Gram matrix of the columns.
    pub fn gram(&self) -> Self {
        self.dual().matmul(self).expect("dual has matching shape")
    }

    /// Replaces every entry by its 2×2 block `φ(X_kl)`.
    pub fn phi_embed(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(2 * self.rows, 2 * self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let b = self[(i, j)].phi();
                out[(2 * i, 2 * j)] = b.a;
                out[(2 * i, 2 * j + 1)] = b.b;
                out[(2 * i + 1, 2 * j)] = b.c;
                out[(2 * i + 1, 2 * j + 1)] = b.d;
            }
        }
        out
    }

    /// Inverse of [`QuaternionMatrix::phi_embed`].
    pub fn from_phi(m: &ComplexMatrix) -> Result<Self> {
        if m.nrows() % 2 != 0 || m.ncols() % 2 != 0 {
            return Err(Error::Shape("embedding dimensions must be even".into()));
        }
        Ok(QuaternionMatrix::from_fn(m.nrows() / 2, m.ncols() / 2, |i, j| {
            Quaternion::phi_inv(&crate::qcore::Complex2x2::new(
                m[(2 * i, 2 * j)],
                m[(2 * i, 2 * j + 1)],
                m[(2 * i + 1, 2 * j)],
                m[(2 * i + 1, 2 * j + 1)],
            ))
        }))
    }

    /// Complex adjoint `ψ(X) = ((A, B), (-B̄, Ā))` with `A = X₁ + X₂i` and
    /// `B = X₃ + X₄i`, defined for real-quaternion matrices.
    pub fn psi_adjoint(&self, tol: f64) -> Result<ComplexMatrix> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_real(tol) {
                    return Err(Error::NotRealQuaternion { row: i, col: j });
                }
            }
        }
        let (r, c) = (self.rows, self.cols);
        let mut out = ComplexMatrix::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let q = self[(i, j)];
                let a = C64::new(q.s.re, q.x.re);
                let b = C64::new(q.y.re, q.z.re);
                out[(i, j)] = a;
                out[(i, c + j)] = b;
                out[(r + i, j)] = -b.conj();
                out[(r + i, c + j)] = a.conj();
            }
        }
        Ok(out)
    }
}

impl Index<(usize, usize)> for QuaternionMatrix {
    type Output = Quaternion;
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QuaternionMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.entries[i * self.cols + j]
    }
}

impl Add for &QuaternionMatrix {
    type Output = QuaternionMatrix;
    fn add(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "incompatible shapes");
        QuaternionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &QuaternionMatrix {
    type Output = QuaternionMatrix;
    fn sub(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        self + &rhs.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul for &QuaternionMatrix {
    type Output = QuaternionMatrix;
    fn mul(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        self.matmul(rhs).expect("incompatible shapes")
    }
}

/// Block-diagonal `J` with blocks `((0, -1), (1, 0))`, size `2n`.
pub fn j_block(n: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(2 * k, 2 * k + 1)] = C64::new(-1.0, 0.0);
        j[(2 * k + 1, 2 * k)] = C64::new(1.0, 0.0);
    }
    j
}

/// `J̃ = ψ(𝐣) = ((0, -I), (I, 0))`, size `2n`.
pub fn j_tilde(n: usize) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = C64::new(-1.0, 0.0);
        j[(n + k, k)] = C64::new(1.0, 0.0);
    }
    j
}
