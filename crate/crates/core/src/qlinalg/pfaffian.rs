use crate::error::{Error, Result};
use crate::qcore::C64;

use super::ComplexMatrix;

/// Largest dimension accepted by [`pfaffian_combinatorial`].
pub const COMBINATORIAL_LIMIT: usize = 8;

/// `max |M + Mᵀ|`.
pub fn skew_residual(m: &ComplexMatrix) -> f64 {
    let mut r: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            r = r.max((m[(i, j)] + m[(j, i)]).norm());
        }
    }
    r
}

fn check_skew(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    let n = m.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    let residual = skew_residual(m);
    if residual > tol * (1.0 + m.camax()) {
        return Err(Error::NotSkew { residual });
    }
    Ok(n)
}

/// Pfaffian of a skew-symmetric matrix by Gaussian elimination on 2×2 pivot
/// blocks, O(n³).
///
/// At step `k` the largest entry of row `k` to the right of the diagonal is
/// moved to position `(k, k+1)` by a symmetric row/column swap (each swap
/// flips the sign), then the trailing block is replaced by its Schur
/// complement. A pivot row whose candidates are all below `tol` relative to
/// the matrix scale yields a Pfaffian of zero.
pub fn pfaffian(m: &ComplexMatrix, tol: f64) -> Result<C64> {
    let n = check_skew(m, tol)?;
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let scale = m.camax();
    if scale == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    let mut a = m.clone();
    let mut pf = C64::new(1.0, 0.0);
    let mut k = 0;
    while k < n {
        let (mut piv, mut best) = (k + 1, a[(k, k + 1)].norm());
        for j in k + 2..n {
            let v = a[(k, j)].norm();
            if v > best {
                best = v;
                piv = j;
            }
        }
        if best <= f64::EPSILON * scale {
            return Ok(C64::new(0.0, 0.0));
        }
        if piv != k + 1 {
            a.swap_rows(k + 1, piv);
            a.swap_columns(k + 1, piv);
            pf = -pf;
        }
        let p = a[(k, k + 1)];
        pf *= p;
        // S_ij = A_ij + (A_{k+1,i} A_{k,j} - A_{k,i} A_{k+1,j}) / p
        for i in k + 2..n {
            let e1i = a[(k + 1, i)] / p;
            let e0i = a[(k, i)] / p;
            for j in i + 1..n {
                let upd = e1i * a[(k, j)] - e0i * a[(k + 1, j)];
                a[(i, j)] += upd;
                a[(j, i)] = -a[(i, j)];
            }
        }
        k += 2;
    }
    Ok(pf)
}

/// Pfaffian by the defining sum over all permutations of `S_2m`,
///
/// `Pf(R) = 1/(2^m m!) Σ_σ sgn(σ) Π_i R_{σ(2i−1) σ(2i)}`.
///
/// Kept literal as an independent oracle; restricted to `n ≤ 8`.
pub fn pfaffian_combinatorial(m: &ComplexMatrix, tol: f64) -> Result<C64> {
    let n = check_skew(m, tol)?;
    if n > COMBINATORIAL_LIMIT {
        return Err(Error::TooLarge { what: "combinatorial Pfaffian", n, limit: COMBINATORIAL_LIMIT });
    }
    if n == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let half = n / 2;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sum = C64::new(0.0, 0.0);
    let term = |p: &[usize]| -> C64 {
        let mut t = C64::new(1.0, 0.0);
        for i in 0..half {
            t *= m[(p[2 * i], p[2 * i + 1])];
        }
        t
    };
    // Heap's algorithm; each transposition flips the sign.
    let mut sign = 1.0;
    let mut c = vec![0usize; n];
    sum += term(&perm) * sign;
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            sum += term(&perm) * sign;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let norm = (1..=half).fold(1.0, |acc, k| acc * 2.0 * k as f64);
    Ok(sum / norm)
}
