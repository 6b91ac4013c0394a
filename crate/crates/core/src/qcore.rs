//! Complexified quaternions and their 2×2 complex matrix representation.
//!
//! A quaternion is `s + x𝐢 + y𝐣 + z𝐤` with complex coefficients. The
//! embedding into 2×2 complex matrices sends
//!
//! ```text
//! 𝐢 ↦ ((0, i), (i, 0)),  𝐣 ↦ ((0, -1), (1, 0)),  𝐤 ↦ ((i, 0), (0, -i))
//! ```
//!
//! and is a ring isomorphism. Scalars are quaternions with `x = y = z = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

/// Default absolute tolerance for approximate comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

const ZERO_C: C64 = C64::new(0.0, 0.0);
const ONE_C: C64 = C64::new(1.0, 0.0);
const I_C: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub s: C64,
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(ZERO_C, ZERO_C, ZERO_C, ZERO_C);
    pub const ONE: Quaternion = Quaternion::new(ONE_C, ZERO_C, ZERO_C, ZERO_C);
    pub const I: Quaternion = Quaternion::new(ZERO_C, ONE_C, ZERO_C, ZERO_C);
    pub const J: Quaternion = Quaternion::new(ZERO_C, ZERO_C, ONE_C, ZERO_C);
    pub const K: Quaternion = Quaternion::new(ZERO_C, ZERO_C, ZERO_C, ONE_C);

    pub const fn new(s: C64, x: C64, y: C64, z: C64) -> Self {
        Quaternion { s, x, y, z }
    }

    /// Real quaternion with the given real coefficients.
    pub fn real(s: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion::new(s.into(), x.into(), y.into(), z.into())
    }

    pub fn scalar(s: C64) -> Self {
        Quaternion::new(s, ZERO_C, ZERO_C, ZERO_C)
    }

    pub fn from_real(s: f64) -> Self {
        Quaternion::scalar(s.into())
    }

    pub fn coeffs(&self) -> [C64; 4] {
        [self.s, self.x, self.y, self.z]
    }

    pub fn from_coeffs(c: [C64; 4]) -> Self {
        Quaternion::new(c[0], c[1], c[2], c[3])
    }

    /// Quaternion conjugate `s - x𝐢 - y𝐣 - z𝐤`. The complex parts of the
    /// coefficients are left alone.
    pub fn conj(&self) -> Self {
        Quaternion::new(self.s, -self.x, -self.y, -self.z)
    }

    pub fn scale(&self, c: C64) -> Self {
        Quaternion::new(self.s * c, self.x * c, self.y * c, self.z * c)
    }

    pub fn scale_re(&self, c: f64) -> Self {
        Quaternion::new(self.s * c, self.x * c, self.y * c, self.z * c)
    }

    /// Largest absolute value among the four complex coefficients.
    pub fn max_abs(&self) -> f64 {
        self.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest magnitude among the 𝐢, 𝐣, 𝐤 coefficients.
    pub fn vector_max_abs(&self) -> f64 {
        [self.x, self.y, self.z].iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part among the four coefficients.
    pub fn imag_max_abs(&self) -> f64 {
        self.coeffs().iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.imag_max_abs() <= tol
    }

    pub fn is_scalar(&self, tol: f64) -> bool {
        self.vector_max_abs() <= tol
    }

    pub fn approx_eq(&self, other: &Quaternion, tol: f64) -> bool {
        (*self - *other).max_abs() <= tol
    }

    /// `s² + x² + y² + z²`, the scalar `q q*`.
    pub fn norm_sqr(&self) -> C64 {
        self.s * self.s + self.x * self.x + self.y * self.y + self.z * self.z
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, k: u32) -> Self {
        let mut out = Quaternion::ONE;
        for _ in 0..k {
            out = out * *self;
        }
        out
    }

    /// Embedding into 2×2 complex matrices.
    pub fn phi(&self) -> Complex2x2 {
        Complex2x2 {
            a: self.s + I_C * self.z,
            b: I_C * self.x - self.y,
            c: I_C * self.x + self.y,
            d: self.s - I_C * self.z,
        }
    }

    /// Inverse of [`Quaternion::phi`].
    pub fn phi_inv(m: &Complex2x2) -> Self {
        let half = 0.5;
        Quaternion {
            s: (m.a + m.d) * half,
            x: (m.b + m.c) * half / I_C,
            y: (m.c - m.b) * half,
            z: (m.a - m.d) * half / I_C,
        }
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.s + o.s, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(self.s - o.s, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Quaternion {
    fn sub_assign(&mut self, o: Quaternion) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.s, -self.x, -self.y, -self.z)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    // (s + v)(t + w) = st - v·w + s w + t v + v × w
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a, b) = (self, o);
        Quaternion {
            s: a.s * b.s - a.x * b.x - a.y * b.y - a.z * b.z,
            x: a.s * b.x + a.x * b.s + a.y * b.z - a.z * b.y,
            y: a.s * b.y + a.y * b.s + a.z * b.x - a.x * b.z,
            z: a.s * b.z + a.z * b.s + a.x * b.y - a.y * b.x,
        }
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, o: Quaternion) {
        *self = *self * o;
    }
}

impl Mul<C64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, c: C64) -> Quaternion {
        self.scale(c)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, c: f64) -> Quaternion {
        self.scale_re(c)
    }
}

impl From<C64> for Quaternion {
    fn from(c: C64) -> Self {
        Quaternion::scalar(c)
    }
}

impl From<f64> for Quaternion {
    fn from(c: f64) -> Self {
        Quaternion::from_real(c)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})k", self.s, self.x, self.y, self.z)
    }
}

/// Row-major 2×2 complex matrix `((a, b), (c, d))`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Complex2x2 {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl Complex2x2 {
    pub const IDENTITY: Complex2x2 = Complex2x2 { a: ONE_C, b: ZERO_C, c: ZERO_C, d: ONE_C };

    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        Complex2x2 { a, b, c, d }
    }

    /// The adjugate `((d, -b), (-c, a))`; equals `phi(q*)` when `self = phi(q)`.
    pub fn adjugate(&self) -> Self {
        Complex2x2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs_diff(&self, o: &Complex2x2) -> f64 {
        [self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Complex2x2 {
    type Output = Complex2x2;
    fn add(self, o: Complex2x2) -> Complex2x2 {
        Complex2x2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Complex2x2 {
    type Output = Complex2x2;
    fn sub(self, o: Complex2x2) -> Complex2x2 {
        Complex2x2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Mul for Complex2x2 {
    type Output = Complex2x2;
    fn mul(self, o: Complex2x2) -> Complex2x2 {
        Complex2x2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

/// `a_p = (1/2p)[(p² − 1) i𝐢 + (p² + 1)𝐣]`, the quaternion unit appearing in
/// the circular symplectic kernel. Squares to −1 for every `p ≠ 0`.
pub fn circular_unit(p: f64) -> Quaternion {
    let inv = 1.0 / (2.0 * p);
    Quaternion::new(
        ZERO_C,
        C64::new(0.0, (p * p - 1.0) * inv),
        C64::new((p * p + 1.0) * inv, 0.0),
        ZERO_C,
    )
}
