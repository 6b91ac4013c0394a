use pfaff_core::kernels::from_descriptor;
use pfaff_core::pointfield::{correlation, diagonal_form_check};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHIPPED: [&str; 8] =
    ["cse:N=2", "cse:N=5", "gse:N=1", "gse:N=3", "ginibre-q:n=3", "bergman-q:n=3", "pfaffian-ginibre-c:N=2", "pfaffian-ginibre-c:N=3"];

#[test]
fn shipped_kernels_are_self_dual() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for d in SHIPPED {
        let k = from_descriptor(d).unwrap();
        assert_eq!(k.descriptor(), d);
        let r = k.self_dual_residual(100, &mut rng);
        assert!(r <= 1e-10, "{d}: {r:e}");
    }
}

#[test]
fn shipped_diagonal_forms_reconstruct() {
    for d in SHIPPED {
        let k = from_descriptor(d).unwrap();
        if k.diagonal().is_none() {
            continue;
        }
        let report = diagonal_form_check(&k, 32, 2).unwrap();
        assert!(report.pass && report.is_quasi_real, "{d}: {report:?}");
        if d.starts_with("cse") || d.starts_with("gse") {
            assert!(report.orthonormality_residual <= 1e-6, "{d}: {report:?}");
            assert!(report.eigenvalues_in_unit_interval, "{d}: {report:?}");
        }
    }
}

#[test]
fn correlations_are_scalar() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in SHIPPED {
        let k = from_descriptor(d).unwrap();
        for m in 1..=4 {
            let points: Vec<_> = (0..m).map(|_| k.domain().random_point(&mut rng)).collect();
            let c = correlation(&k, &points).unwrap();
            assert!(c.nonscalar_residual <= 1e-9, "{d}: {c:?}");
        }
    }
}

#[test]
fn unknown_descriptors_are_rejected() {
    for d in ["cse:n=2", "cse:N=2,M=3", "wishart:N=2", "finite", "gse:N=x"] {
        assert!(from_descriptor(d).is_err(), "{d}");
    }
}
