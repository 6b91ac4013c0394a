use crate::error::{Error, Result};
use crate::par::{map_indexed, Exec};
use crate::qcore::{Quaternion, C64};

use super::{j_block, j_tilde, pfaffian, QuaternionMatrix};

/// Largest size accepted by the factorial Cayley expansion.
pub const CAYLEY_LIMIT: usize = 9;

/// Moore-Dyson determinant by the ordered-cycle Cayley expansion.
///
/// Every permutation is written as a product of cycles, each cycle starting
/// at its largest element, cycles sorted by decreasing largest element. The
/// term is `(−1)^{n−r}` times the left-to-right product of the entries
/// along the cycles, `r` being the number of cycles. No scalarity is
/// assumed; for a self-dual input the 𝐢, 𝐣, 𝐤 parts vanish.
pub fn moore_dyson_det(x: &QuaternionMatrix) -> Result<Quaternion> {
    moore_dyson_det_with(x, Exec::default())
}

pub fn moore_dyson_det_with(x: &QuaternionMatrix, exec: Exec) -> Result<Quaternion> {
    let n = x.require_square()?;
    if n > CAYLEY_LIMIT {
        return Err(Error::TooLarge { what: "Cayley expansion", n, limit: CAYLEY_LIMIT });
    }
    if n == 0 {
        return Ok(Quaternion::ONE);
    }
    let top = n - 1;
    let all: u32 = (1u32 << n) - 1;
    // Top-level branches: the successor of `top` in its cycle (itself means
    // a fixed point). Partial sums are combined in branch order.
    let parts = map_indexed(n, exec, |succ| {
        let mut acc = Quaternion::ZERO;
        let remaining = all & !(1 << top);
        if succ == top {
            let mut e = Expansion { x, acc: &mut acc };
            e.next_cycle(remaining, x[(top, top)], 1.0);
        } else {
            let mut e = Expansion { x, acc: &mut acc };
            e.extend(top, succ, remaining & !(1 << succ), x[(top, succ)], -1.0);
        }
        acc
    });
    Ok(parts.into_iter().fold(Quaternion::ZERO, |a, b| a + b))
}

struct Expansion<'a> {
    x: &'a QuaternionMatrix,
    acc: &'a mut Quaternion,
}

impl Expansion<'_> {
    /// Starts a new cycle at the largest element of `remaining`.
    fn next_cycle(&mut self, remaining: u32, prod: Quaternion, sign: f64) {
        if remaining == 0 {
            *self.acc += prod * sign;
            return;
        }
        let head = 31 - remaining.leading_zeros() as usize;
        let rest = remaining & !(1 << head);
        self.next_cycle(rest, prod * self.x[(head, head)], sign);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.extend(head, j, rest & !(1 << j), prod * self.x[(head, j)], -sign);
        }
    }

    /// Continues the open cycle started at `head`, currently at `cur`.
    fn extend(&mut self, head: usize, cur: usize, remaining: u32, prod: Quaternion, sign: f64) {
        self.next_cycle(remaining, prod * self.x[(cur, head)], sign);
        let mut bits = remaining;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            self.extend(head, j, remaining & !(1 << j), prod * self.x[(cur, j)], -sign);
        }
    }
}

/// `Det_M(X) = Pf(−J φ(X))` for self-dual `X`.
pub fn moore_dyson_via_pfaffian(x: &QuaternionMatrix, tol: f64) -> Result<C64> {
    let n = x.require_self_dual(tol)?;
    let m = -(j_block(n) * x.phi_embed());
    pfaffian(&m, tol)
}

/// Moore-Dyson determinant of a self-dual real-quaternion matrix through the
/// complex adjoint: `Det_M(X) = (−1)^{n(n−1)/2} Pf(−J̃ ψ(X))`.
pub fn moore_dyson_via_adjoint(x: &QuaternionMatrix, tol: f64) -> Result<C64> {
    let n = x.require_self_dual(tol)?;
    let psi = x.psi_adjoint(tol)?;
    let m = -(j_tilde(n) * psi);
    let pf = pfaffian(&m, tol)?;
    Ok(if (n * (n.saturating_sub(1)) / 2) % 2 == 0 { pf } else { -pf })
}

/// Study determinant `det φ(X)`.
pub fn study_det(x: &QuaternionMatrix) -> Result<C64> {
    x.require_square()?;
    Ok(x.phi_embed().determinant())
}

#[cfg(test)]
mod tests {
    use super::super::test_util::*;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Brute-force Cayley expansion: enumerate all permutations, decompose
    /// into cycles, order cycles by decreasing maximum.
    fn cayley_brute(x: &QuaternionMatrix) -> Quaternion {
        let n = x.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total = Quaternion::ZERO;
        loop {
            let mut seen = vec![false; n];
            let mut cycles: Vec<Vec<usize>> = Vec::new();
            for start in (0..n).rev() {
                if seen[start] {
                    continue;
                }
                let mut cyc = vec![start];
                seen[start] = true;
                let mut j = perm[start];
                while j != start {
                    cyc.push(j);
                    seen[j] = true;
                    j = perm[j];
                }
                cycles.push(cyc);
            }
            let mut prod = Quaternion::ONE;
            for cyc in &cycles {
                for w in 0..cyc.len() {
                    prod = prod * x[(cyc[w], cyc[(w + 1) % cyc.len()])];
                }
            }
            let sign = if (n - cycles.len()) % 2 == 0 { 1.0 } else { -1.0 };
            total += prod * sign;
            // next permutation in lexicographic order
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        total
    }

    #[test]
    fn recursive_expansion_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..=5 {
            let x = rand_matrix(&mut rng, n, n);
            let a = moore_dyson_det(&x).unwrap();
            let b = cayley_brute(&x);
            assert!(a.approx_eq(&b, 1e-12 * (1.0 + b.max_abs())), "n={n}");
            let s = moore_dyson_det_with(&x, Exec::Sequential).unwrap();
            assert_eq!(a, s);
        }
    }

    #[test]
    fn first_two_point_example_has_zero_determinant() {
        // a = (3i𝐢 − 5𝐣)/4, K = ½((1, −a), (a, 1))
        let a = Quaternion::new(c(0.0, 0.0), c(0.0, 0.75), c(-1.25, 0.0), c(0.0, 0.0));
        let k = QuaternionMatrix::from_rows(vec![
            vec![Quaternion::from_real(0.5), -a * 0.5],
            vec![a * 0.5, Quaternion::from_real(0.5)],
        ])
        .unwrap();
        assert!(k.is_self_dual(1e-15));
        assert!(moore_dyson_det(&k).unwrap().approx_eq(&Quaternion::ZERO, 1e-12));
        assert!(moore_dyson_via_pfaffian(&k, 1e-12).unwrap().norm() < 1e-12);
    }

    #[test]
    fn second_two_point_example_has_unit_determinant() {
        // a = i𝐢 − 𝐣, K = ((1, a), (−a, 1))
        let a = Quaternion::new(c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!((a * a).approx_eq(&Quaternion::ZERO, 1e-15));
        let k = QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, a], vec![-a, Quaternion::ONE]])
            .unwrap();
        assert!(moore_dyson_det(&k).unwrap().approx_eq(&Quaternion::ONE, 1e-12));
        assert!((moore_dyson_via_pfaffian(&k, 1e-12).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn scalar_one_by_one() {
        let s = c(0.3, -2.0);
        let x = QuaternionMatrix::from_rows(vec![vec![Quaternion::scalar(s)]]).unwrap();
        assert_eq!(moore_dyson_via_pfaffian(&x, 1e-12).unwrap(), s);
        assert_eq!(moore_dyson_det(&x).unwrap(), Quaternion::scalar(s));
    }

    #[test]
    fn routes_agree_on_self_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 1..=5 {
            for real in [true, false] {
                let x = rand_self_dual(&mut rng, n, real);
                let cayley = moore_dyson_det(&x).unwrap();
                assert!(cayley.is_scalar(1e-10), "n={n} {cayley}");
                let pf = moore_dyson_via_pfaffian(&x, 1e-12).unwrap();
                assert!((cayley.s - pf).norm() <= 1e-9 * (1.0 + pf.norm()), "n={n}");
                if real {
                    let adj = moore_dyson_via_adjoint(&x, 1e-12).unwrap();
                    assert!((adj - pf).norm() <= 1e-9 * (1.0 + pf.norm()), "n={n}: {adj} vs {pf}");
                }
            }
        }
    }

    #[test]
    fn study_determinant_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!((study_det(&QuaternionMatrix::identity(4)).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let a = rand_matrix(&mut rng, 3, 3);
        let b = rand_matrix(&mut rng, 3, 3);
        let ab = study_det(&(&a * &b)).unwrap();
        let prod = study_det(&a).unwrap() * study_det(&b).unwrap();
        assert!((ab - prod).norm() <= 1e-10 * (1.0 + ab.norm()));
        let g = a.gram();
        let dm = moore_dyson_via_pfaffian(&g, 1e-10).unwrap();
        let ds = study_det(&a).unwrap();
        assert!((dm - ds).norm() <= 1e-9 * (1.0 + ds.norm()));
        assert!(study_det(&QuaternionMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn errors() {
        let x = QuaternionMatrix::identity(10);
        assert!(matches!(moore_dyson_det(&x), Err(Error::TooLarge { .. })));
        let mut y = QuaternionMatrix::identity(2);
        y[(0, 1)] = Quaternion::I;
        assert!(matches!(moore_dyson_via_pfaffian(&y, 1e-12), Err(Error::NotSelfDual { .. })));
        assert!(moore_dyson_det(&QuaternionMatrix::zeros(2, 3)).is_err());
    }
}
