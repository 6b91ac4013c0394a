#![allow(dead_code)]

use pfaff_core::{Quaternion, QuaternionMatrix, C64};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rand_c<R: Rng>(rng: &mut R) -> C64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn rand_quat<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::new(rand_c(rng), rand_c(rng), rand_c(rng), rand_c(rng))
}

pub fn rand_real_quat<R: Rng>(rng: &mut R) -> Quaternion {
    Quaternion::real(
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-1.0..1.0),
    )
}

pub fn rand_matrix<R: Rng>(rng: &mut R, r: usize, cols: usize, real: bool) -> QuaternionMatrix {
    QuaternionMatrix::from_fn(r, cols, |_, _| if real { rand_real_quat(rng) } else { rand_quat(rng) })
}

pub fn rand_self_dual<R: Rng>(rng: &mut R, n: usize, real: bool) -> QuaternionMatrix {
    let mut m = QuaternionMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = if real {
            Quaternion::from_real(rng.random_range(-1.0..1.0))
        } else {
            Quaternion::scalar(rand_c(rng))
        };
        for j in i + 1..n {
            let q = if real { rand_real_quat(rng) } else { rand_quat(rng) };
            m[(i, j)] = q;
            m[(j, i)] = q.conj();
        }
    }
    m
}

/// `½((1, −a), (a, 1))` with `a = (3i𝐢 − 5𝐣)/4`.
pub fn first_example() -> QuaternionMatrix {
    let a = Quaternion::new(c(0.0, 0.0), c(0.0, 0.75), c(-1.25, 0.0), c(0.0, 0.0));
    QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, -a], vec![a, Quaternion::ONE]])
        .unwrap()
        .scale(c(0.5, 0.0))
}

/// `((1, a), (−a, 1))` with `a = i𝐢 − 𝐣`.
pub fn second_example() -> QuaternionMatrix {
    let a = Quaternion::new(c(0.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, 0.0));
    QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, a], vec![-a, Quaternion::ONE]]).unwrap()
}

/// `(4/3)((1, i/2), (i/2, −1/4))`.
pub fn third_example() -> QuaternionMatrix {
    let h = Quaternion::scalar(c(0.0, 0.5));
    QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, h], vec![h, Quaternion::from_real(-0.25)]])
        .unwrap()
        .scale(c(4.0 / 3.0, 0.0))
}

/// `½((1, a), (a*, 1))` with `a = (1 + 2i) + (19/10 − 20i/19)𝐢`.
pub fn fourth_example() -> QuaternionMatrix {
    let a = Quaternion::new(c(1.0, 2.0), c(1.9, -20.0 / 19.0), c(0.0, 0.0), c(0.0, 0.0));
    QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, a], vec![a.conj(), Quaternion::ONE]])
        .unwrap()
        .scale(c(0.5, 0.0))
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / (1.0 + a.norm().max(b.norm()))
}
