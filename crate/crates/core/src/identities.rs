//! The quaternion Cauchy–Binet identity
//!
//! `Det_M(C*C) = Σ_I Det_M((C^I)* C^I)`
//!
//! and its weighted form `Det_M(C*ΛC) = Σ_I λ_{i₁}…λ_{i_m} Det_M((C^I)* C^I)`,
//! where `I` runs over the increasing `m`-subsets of the rows of an `n×m`
//! matrix `C`. Both sides are computed explicitly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::{map_indexed, Exec};
use crate::qcore::{C64, DEFAULT_TOL};
use crate::qlinalg::{moore_dyson_via_pfaffian, QuaternionMatrix};

/// Default bound on the column count.
pub const MAX_COLS: usize = 6;
/// Default bound on the row count.
pub const MAX_ROWS: usize = 10;

/// Strictly increasing list of row indices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetIndex(Vec<usize>);

impl SubsetIndex {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i >= n) {
            return Err(Error::InvalidArgument(format!("{indices:?} is not an increasing subset of 0..{n}")));
        }
        Ok(SubsetIndex(indices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// All increasing `m`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, m: usize) -> Vec<SubsetIndex> {
    let mut out = Vec::new();
    if m > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..m).collect();
    loop {
        out.push(SubsetIndex(cur.clone()));
        let Some(i) = (0..m).rev().find(|&i| cur[i] < n - m + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sides {
    pub lhs: C64,
    pub rhs: C64,
}

impl Sides {
    /// `|lhs − rhs| / (1 + |lhs|)`.
    pub fn relative_gap(&self) -> f64 {
        (self.lhs - self.rhs).norm() / (1.0 + self.lhs.norm())
    }
}

fn check_shape(c: &QuaternionMatrix) -> Result<(usize, usize)> {
    let (n, m) = (c.rows(), c.cols());
    if n < m || m == 0 {
        return Err(Error::Shape(format!("need n ≥ m ≥ 1, got {n}x{m}")));
    }
    if m > MAX_COLS || n > MAX_ROWS {
        return Err(Error::TooLarge { what: "Cauchy–Binet enumeration", n: n.max(m), limit: MAX_ROWS });
    }
    Ok((n, m))
}

fn subset_terms(c: &QuaternionMatrix, weights: Option<&[C64]>, exec: Exec) -> Result<C64> {
    let (n, m) = (c.rows(), c.cols());
    let all = subsets(n, m);
    let terms = map_indexed(all.len(), exec, |k| -> Result<C64> {
        let idx = all[k].as_slice();
        let g = c.select_rows(idx).gram();
        let det = moore_dyson_via_pfaffian(&g, DEFAULT_TOL)?;
        let w = weights.map_or(C64::new(1.0, 0.0), |w| idx.iter().fold(C64::new(1.0, 0.0), |a, &i| a * w[i]));
        Ok(w * det)
    });
    terms.into_iter().try_fold(C64::new(0.0, 0.0), |acc, t| Ok(acc + t?))
}

/// Both sides of `Det_M(C*C) = Σ_I Det_M((C^I)* C^I)`.
pub fn cauchy_binet_sides(c: &QuaternionMatrix) -> Result<Sides> {
    cauchy_binet_sides_with(c, Exec::default())
}

pub fn cauchy_binet_sides_with(c: &QuaternionMatrix, exec: Exec) -> Result<Sides> {
    check_shape(c)?;
    let lhs = moore_dyson_via_pfaffian(&c.gram(), DEFAULT_TOL)?;
    let rhs = subset_terms(c, None, exec)?;
    Ok(Sides { lhs, rhs })
}

/// Both sides of `Det_M(C*ΛC) = Σ_I λ_{i₁}…λ_{i_m} Det_M((C^I)* C^I)` for
/// complex scalar weights `λ`.
pub fn cauchy_binet_weighted_sides(c: &QuaternionMatrix, lambda: &[C64]) -> Result<Sides> {
    cauchy_binet_weighted_sides_with(c, lambda, Exec::default())
}

pub fn cauchy_binet_weighted_sides_with(c: &QuaternionMatrix, lambda: &[C64], exec: Exec) -> Result<Sides> {
    let (n, _) = check_shape(c)?;
    if lambda.len() != n {
        return Err(Error::Shape(format!("{} weights for {n} rows", lambda.len())));
    }
    let weighted = c.scale_rows(lambda)?;
    let lhs = moore_dyson_via_pfaffian(&c.dual().matmul(&weighted)?, DEFAULT_TOL)?;
    let rhs = subset_terms(c, Some(lambda), exec)?;
    Ok(Sides { lhs, rhs })
}

/// Same as [`cauchy_binet_weighted_sides`] for quaternion weights, which
/// must be scalars.
pub fn cauchy_binet_quaternion_weights(
    c: &QuaternionMatrix,
    lambda: &[crate::qcore::Quaternion],
) -> Result<Sides> {
    let mut scalars = Vec::with_capacity(lambda.len());
    for (index, q) in lambda.iter().enumerate() {
        if !q.is_scalar(DEFAULT_TOL) {
            return Err(Error::NonScalarWeight { index });
        }
        scalars.push(q.s);
    }
    cauchy_binet_weighted_sides(c, &scalars)
}
