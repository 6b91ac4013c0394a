//! Points, domains and sub-domains shared by kernels, quadrature and samplers.
//!
//! Circle points are angles in `[−π, π)`, line points are reals, quaternion
//! points are real 4-vectors `(s, x, y, z)` and finite-space points are
//! 0-based indices.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcore::{Quaternion, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Point {
    Angle(f64),
    Real(f64),
    Quat([f64; 4]),
    Complex([f64; 2]),
    Index(usize),
}

impl Point {
    /// The scalar coordinate of a circle or line point.
    pub fn coord(&self) -> Option<f64> {
        match *self {
            Point::Angle(t) | Point::Real(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_complex(&self) -> Option<C64> {
        match *self {
            Point::Complex([re, im]) => Some(C64::new(re, im)),
            _ => None,
        }
    }

    pub fn as_quaternion(&self) -> Option<Quaternion> {
        match *self {
            Point::Quat([s, x, y, z]) => Some(Quaternion::real(s, x, y, z)),
            _ => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Angle(t) => write!(f, "angle {t}"),
            Point::Real(x) => write!(f, "x = {x}"),
            Point::Quat(q) => write!(f, "q = {q:?}"),
            Point::Complex([re, im]) => write!(f, "z = {re}{im:+}i"),
            Point::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// Wraps an angle into `[−π, π)`.
pub fn wrap_angle(t: f64) -> f64 {
    (t + PI).rem_euclid(2.0 * PI) - PI
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// Angles in `[−π, π)` with Lebesgue measure.
    Circle,
    /// The real line with Lebesgue measure.
    Line,
    /// Real quaternions ≅ ℝ⁴.
    QuaternionSpace,
    /// The closed unit ball of real quaternions.
    QuaternionBall,
    /// The complex plane ≅ ℝ².
    ComplexPlane,
    /// `{0, …, n−1}` with counting measure.
    Finite(usize),
}

impl Domain {
    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (Domain::Circle, Point::Angle(t)) => (-PI..PI).contains(t),
            (Domain::Line, Point::Real(x)) => x.is_finite(),
            (Domain::QuaternionSpace, Point::Quat(q)) => q.iter().all(|v| v.is_finite()),
            (Domain::QuaternionBall, Point::Quat(q)) => q.iter().map(|v| v * v).sum::<f64>() <= 1.0,
            (Domain::ComplexPlane, Point::Complex(z)) => z.iter().all(|v| v.is_finite()),
            (Domain::Finite(n), Point::Index(i)) => i < n,
            _ => false,
        }
    }

    /// Parses a JSON value as a point of this domain.
    pub fn point_from_json(&self, v: &serde_json::Value) -> Result<Point> {
        let bad = || Error::OutsideDomain(format!("{v} is not a point of {self:?}"));
        let p = match self {
            Domain::Circle => Point::Angle(v.as_f64().ok_or_else(bad)?),
            Domain::Line => Point::Real(v.as_f64().ok_or_else(bad)?),
            Domain::Finite(_) => Point::Index(v.as_u64().ok_or_else(bad)? as usize),
            Domain::ComplexPlane => Point::Complex(serde_json::from_value(v.clone()).map_err(|_| bad())?),
            Domain::QuaternionSpace | Domain::QuaternionBall => {
                Point::Quat(serde_json::from_value(v.clone()).map_err(|_| bad())?)
            }
        };
        self.check(&p)?;
        Ok(p)
    }

    /// A random point, uniform on compact domains and Gaussian otherwise.
    pub fn random_point<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Point {
        use rand_distr::{Distribution, StandardNormal};
        let mut g = |n: usize| -> [f64; 4] {
            let mut v = [0.0; 4];
            for x in v.iter_mut().take(n) {
                *x = StandardNormal.sample(rng);
            }
            v
        };
        match self {
            Domain::Circle => Point::Angle(wrap_angle(PI * (2.0 * rng.random::<f64>() - 1.0))),
            Domain::Line => Point::Real(1.5 * g(1)[0]),
            Domain::QuaternionSpace => Point::Quat(g(4)),
            Domain::ComplexPlane => {
                let v = g(2);
                Point::Complex([v[0], v[1]])
            }
            Domain::QuaternionBall => {
                let v = g(4);
                let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                let r = rng.random::<f64>().powf(0.25);
                Point::Quat(v.map(|x| x * r / n))
            }
            Domain::Finite(n) => Point::Index(rng.random_range(0..*n)),
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::OutsideDomain(p.to_string()))
        }
    }
}

/// Measurable subsets used for restriction and counting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SubDomain {
    Full,
    /// Arc of the circle starting at `start` and running counter-clockwise
    /// for `length ∈ (0, 2π]`; closed at the start, open at the end.
    Arc { start: f64, length: f64 },
    /// `[lo, hi)` on the line; either end may be infinite.
    Interval { lo: f64, hi: f64 },
    /// Subset of a finite space.
    Indices(Vec<usize>),
}

impl SubDomain {
    /// Arc `[a, b)` given by its endpoints, `a < b`, measured counter-clockwise.
    pub fn arc(a: f64, b: f64) -> Result<Self> {
        let length = b - a;
        if !(length > 0.0 && length <= 2.0 * PI + 1e-12) {
            return Err(Error::InvalidArgument(format!("arc [{a}, {b}) has length outside (0, 2π]")));
        }
        Ok(SubDomain::Arc { start: wrap_angle(a), length: length.min(2.0 * PI) })
    }

    pub fn contains(&self, p: &Point) -> bool {
        match (self, p) {
            (SubDomain::Full, _) => true,
            (SubDomain::Arc { start, length }, Point::Angle(t)) => {
                (t - start).rem_euclid(2.0 * PI) < *length
            }
            (SubDomain::Interval { lo, hi }, Point::Real(x)) => lo <= x && x < hi,
            (SubDomain::Indices(ix), Point::Index(i)) => ix.contains(i),
            _ => false,
        }
    }

    /// Whether the sub-domain describes a subset of `domain`.
    pub fn check_within(&self, domain: &Domain) -> Result<()> {
        let ok = match (self, domain) {
            (SubDomain::Full, _) => true,
            (SubDomain::Arc { length, .. }, Domain::Circle) => *length > 0.0 && *length <= 2.0 * PI,
            (SubDomain::Interval { lo, hi }, Domain::Line) => lo < hi,
            (SubDomain::Indices(ix), Domain::Finite(n)) => ix.iter().all(|i| i < n),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SubDomain(format!("{self:?} in {domain:?}")))
        }
    }

    /// Lebesgue (or counting) measure of the sub-domain inside `domain`.
    pub fn measure(&self, domain: &Domain) -> f64 {
        match (self, domain) {
            (SubDomain::Full, Domain::Circle) => 2.0 * PI,
            (SubDomain::Full, Domain::Finite(n)) => *n as f64,
            (SubDomain::Arc { length, .. }, _) => *length,
            (SubDomain::Interval { lo, hi }, _) => hi - lo,
            (SubDomain::Indices(ix), _) => ix.len() as f64,
            _ => f64::INFINITY,
        }
    }
}
