mod common;

use common::*;
use pfaff_core::domain::Point;
use pfaff_core::identities::{cauchy_binet_sides, cauchy_binet_weighted_sides};
use pfaff_core::kernels::{circular_symplectic, gse};
use pfaff_core::pointfield::correlation;
use pfaff_core::qlinalg::{
    moore_dyson_det, moore_dyson_via_adjoint, moore_dyson_via_pfaffian, pfaffian, pfaffian_combinatorial,
    selfdual_eigenvalues, study_det, PAIR_TOL,
};
use pfaff_core::{ComplexMatrix, QuaternionMatrix, C64};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn conjugation_is_an_antiautomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = (rand_quat(&mut r), rand_quat(&mut r));
        prop_assert_eq!(p.conj().conj(), p);
        prop_assert!(((p * q).conj() - q.conj() * p.conj()).max_abs() <= 1e-12);
    }

    #[test]
    fn embedding_is_multiplicative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (p, q) = (rand_quat(&mut r), rand_quat(&mut r));
        prop_assert!((p * q).phi().max_abs_diff(&(p.phi() * q.phi())) <= 1e-12);
        prop_assert!(p.conj().phi().max_abs_diff(&p.phi().adjugate()) <= 1e-12);
    }

    #[test]
    fn moore_dyson_routes_agree(seed in any::<u64>(), n in 1usize..=6, real in any::<bool>()) {
        let mut r = rng(seed);
        let x = rand_self_dual(&mut r, n, real);
        let cayley = moore_dyson_det(&x).unwrap();
        prop_assert!(cayley.vector_max_abs() <= 1e-10 * (1.0 + cayley.s.norm()));
        let pf = moore_dyson_via_pfaffian(&x, 1e-12).unwrap();
        prop_assert!(rel(cayley.s, pf) <= 1e-9);
        if real {
            prop_assert!(rel(moore_dyson_via_adjoint(&x, 1e-12).unwrap(), pf) <= 1e-9);
            let product: C64 = selfdual_eigenvalues(&x, PAIR_TOL).unwrap().iter().product();
            prop_assert!(rel(product, pf) <= 1e-8);
        }
    }

    #[test]
    fn study_determinant_of_a_gram(seed in any::<u64>(), n in 1usize..=5) {
        let mut r = rng(seed);
        let x = rand_matrix(&mut r, n, n, false);
        let s = study_det(&x).unwrap();
        let m = moore_dyson_det(&x.gram()).unwrap().s;
        prop_assert!((s - m).norm() <= 1e-9 * (1.0 + s.norm()));
    }

    #[test]
    fn pfaffian_routes_agree(seed in any::<u64>(), half in 1usize..=4) {
        let mut r = rng(seed);
        let n = 2 * half;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = rand_c(&mut r);
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        let a = pfaffian(&m, 1e-12).unwrap();
        let b = pfaffian_combinatorial(&m, 1e-12).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * b.norm().max(1.0));
        let det = m.determinant();
        prop_assert!((a * a - det).norm() <= 1e-9 * det.norm().max(1.0));
    }

    #[test]
    fn cauchy_binet_sides_agree(seed in any::<u64>(), n in 1usize..=6, m in 1usize..=4, weighted in any::<bool>()) {
        let mut r = rng(seed);
        let m = m.min(n);
        let c = rand_matrix(&mut r, n, m, false);
        let sides = if weighted {
            let lambda: Vec<C64> = (0..n).map(|_| rand_c(&mut r)).collect();
            cauchy_binet_weighted_sides(&c, &lambda).unwrap()
        } else {
            cauchy_binet_sides(&c).unwrap()
        };
        prop_assert!(sides.relative_gap() <= 1e-8);
    }

    #[test]
    fn cauchy_binet_ignores_row_order(seed in any::<u64>(), n in 2usize..=6, m in 1usize..=3) {
        let mut r = rng(seed);
        let m = m.min(n);
        let c = rand_matrix(&mut r, n, m, false);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut r);
        let permuted: QuaternionMatrix = c.select_rows(&order);
        let (a, b) = (cauchy_binet_sides(&c).unwrap(), cauchy_binet_sides(&permuted).unwrap());
        prop_assert!(rel(a.lhs, b.lhs) <= 1e-10);
        prop_assert!(rel(a.rhs, b.rhs) <= 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn correlations_are_symmetric(seed in any::<u64>(), m in 1usize..=5, line in any::<bool>()) {
        let mut r = rng(seed);
        let k = if line { gse(2).unwrap() } else { circular_symplectic(3).unwrap() };
        let points: Vec<Point> = (0..m).map(|_| k.domain().random_point(&mut r)).collect();
        let base = correlation(&k, &points).unwrap();
        prop_assert!(base.nonscalar_residual <= 1e-9);
        let mut shuffled = points.clone();
        shuffled.shuffle(&mut r);
        let other = correlation(&k, &shuffled).unwrap();
        prop_assert!((base.value - other.value).abs() <= 1e-10 * (1.0 + base.value.abs()));
    }
}
