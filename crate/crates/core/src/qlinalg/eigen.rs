use crate::error::{Error, Result};
use crate::qcore::{C64, DEFAULT_TOL};

use super::{ComplexMatrix, QuaternionMatrix};

/// Relative tolerance for matching the two copies of a Kramers pair.
pub const PAIR_TOL: f64 = 1e-6;

/// Deflation thresholds tried in turn by [`complex_eigenvalues`].
const SCHUR_EPS: [f64; 3] = [1e-15, 1e-13, 1e-11];

/// All eigenvalues of a dense complex matrix from its Schur form.
pub fn complex_eigenvalues(m: &ComplexMatrix) -> Result<Vec<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = SCHUR_EPS
        .iter()
        .find_map(|&eps| m.clone().try_schur(eps, 10_000))
        .ok_or(Error::EigenConvergence)?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Splits a spectrum with doubled multiplicities into `len/2` values.
///
/// Values are sorted by `(re, im)`; each unmatched value is paired with its
/// nearest unmatched successor in that order and the pair is replaced by its
/// mean. Fails when a pair differs by more than `tol·(1 + |λ|)`.
pub fn pair_kramers(values: &[C64], tol: f64) -> Result<Vec<C64>> {
    if values.len() % 2 != 0 {
        return Err(Error::Pairing(format!("odd spectrum length {}", values.len())));
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; v.len()];
    let mut out = Vec::with_capacity(v.len() / 2);
    for i in 0..v.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let partner = (i + 1..v.len())
            .filter(|&j| !used[j])
            .min_by(|&a, &b| (v[a] - v[i]).norm().total_cmp(&(v[b] - v[i]).norm()))
            .ok_or_else(|| Error::Pairing("unpaired eigenvalue".into()))?;
        let gap = (v[partner] - v[i]).norm();
        if gap > tol * (1.0 + v[i].norm()) {
            return Err(Error::Pairing(format!("{} and {} differ by {gap:.3e}", v[i], v[partner])));
        }
        used[partner] = true;
        out.push((v[i] + v[partner]) * 0.5);
    }
    Ok(out)
}

/// Right eigenvalues of a self-dual quaternion matrix, from the `2n`
/// eigenvalues of `φ(X)` paired up.
pub fn selfdual_eigenvalues(x: &QuaternionMatrix, pair_tol: f64) -> Result<Vec<C64>> {
    x.require_self_dual(DEFAULT_TOL)?;
    let ev = complex_eigenvalues(&x.phi_embed())?;
    pair_kramers(&ev, pair_tol)
}
