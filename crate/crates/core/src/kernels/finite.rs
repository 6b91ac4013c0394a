use std::sync::Arc;

use nalgebra::DMatrix;

use super::{unit_weight, DiagonalForm, FunctionFn, Kernel};
use crate::domain::{Domain, Point};
use crate::error::Result;
use crate::qcore::{Complex2x2, Quaternion, C64, DEFAULT_TOL};
use crate::qlinalg::{complex_eigenvalues, j_block, pair_kramers, ComplexMatrix, QuaternionMatrix, PAIR_TOL};

/// Kernel on `{0, …, n−1}` with counting measure, `K(i, j) = X_ij`.
///
/// A diagonal form is attached when `X` admits one.
pub fn finite_kernel(entries: QuaternionMatrix) -> Result<Kernel> {
    let n = entries.require_self_dual(DEFAULT_TOL)?;
    let m = Arc::new(entries.clone());
    let mk = m.clone();
    let eval = Arc::new(move |x: &Point, y: &Point| match (x, y) {
        (Point::Index(i), Point::Index(j)) if *i < n && *j < n => mk[(*i, *j)],
        _ => Quaternion::ZERO,
    });
    let mut k = Kernel::new(format!("finite:n={n}"), Domain::Finite(n), unit_weight(), eval);
    k.rank = Some(n);
    if let Some((lambdas, vectors)) = finite_diagonal_form(&entries)? {
        let functions = vectors
            .into_iter()
            .map(|v| {
                Arc::new(move |x: &Point| match x {
                    Point::Index(i) if *i < v.len() => v[*i],
                    _ => Quaternion::ZERO,
                }) as FunctionFn
            })
            .collect();
        k = k.with_diagonal(DiagonalForm::new(lambdas, functions)?);
    }
    Ok(k.with_matrix(entries))
}

/// `bᵀ J c` for columns of a `2n`-vector space.
fn omega(j: &ComplexMatrix, b: &nalgebra::DVector<C64>, c: &nalgebra::DVector<C64>) -> C64 {
    (b.transpose() * j * c)[(0, 0)]
}

/// Diagonal form `X = Σ λ_k u_k u_k*` of a self-dual matrix with
/// `u_k* u_l = δ_kl`, restricted to the non-zero eigenvalues. `None` when
/// `X` is not diagonalizable in this sense.
pub fn finite_diagonal_form(x: &QuaternionMatrix) -> Result<Option<(Vec<C64>, Vec<Vec<Quaternion>>)>> {
    let n = x.require_self_dual(DEFAULT_TOL)?;
    let scale = 1.0 + x.max_abs();
    let phi = x.phi_embed();
    let j = j_block(n);
    let values = pair_kramers(&complex_eigenvalues(&phi)?, PAIR_TOL)?;

    // Clusters of (numerically) equal eigenvalues.
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for v in values {
        match clusters.iter_mut().find(|(c, _)| (*c - v).norm() <= PAIR_TOL * (1.0 + v.norm())) {
            Some((c, m)) => {
                *c = (*c * *m as f64 + v) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((v, 1)),
        }
    }

    let mut lambdas = Vec::new();
    let mut vectors = Vec::new();
    for (lambda, mult) in clusters {
        if lambda.norm() <= 1e-9 * scale {
            continue;
        }
        let shifted = &phi - DMatrix::<C64>::identity(2 * n, 2 * n) * lambda;
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("requested V");
        let mut order: Vec<usize> = (0..2 * n).collect();
        order.sort_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b]));
        let need = 2 * mult;
        if svd.singular_values[order[need - 1]] > 1e-6 * scale {
            return Ok(None);
        }
        let mut basis: Vec<nalgebra::DVector<C64>> =
            order[..need].iter().map(|&r| vt.row(r).adjoint().into_owned()).collect();
        // Symplectic Gram–Schmidt for the form ω(b, c) = bᵀ J c.
        while !basis.is_empty() {
            let (mut bi, mut bj, mut best) = (0, 0, 0.0);
            for a in 0..basis.len() {
                for b in a + 1..basis.len() {
                    let w = omega(&j, &basis[a], &basis[b]).norm();
                    if w > best {
                        (bi, bj, best) = (a, b, w);
                    }
                }
            }
            if best <= 1e-9 {
                return Ok(None);
            }
            let e = basis[bi].clone();
            let f = basis[bj].clone();
            let w = omega(&j, &e, &f);
            let g = &f * (-C64::new(1.0, 0.0) / w);
            basis.remove(bj);
            basis.remove(bi);
            for v in basis.iter_mut() {
                let a = omega(&j, v, &g);
                let b = omega(&j, v, &e);
                // with ω(e, g) = −1
                *v = &*v + &e * a - &g * b;
            }
            let u: Vec<Quaternion> = (0..n)
                .map(|i| Quaternion::phi_inv(&Complex2x2::new(e[2 * i], g[2 * i], e[2 * i + 1], g[2 * i + 1])))
                .collect();
            lambdas.push(lambda);
            vectors.push(u);
        }
    }

    let recon = QuaternionMatrix::from_fn(n, n, |a, b| {
        lambdas
            .iter()
            .zip(&vectors)
            .fold(Quaternion::ZERO, |acc, (l, u)| acc + u[a] * u[b].conj() * *l)
    });
    if recon.max_abs_diff(x) > 1e-8 * scale {
        return Ok(None);
    }
    Ok(Some((lambdas, vectors)))
}
