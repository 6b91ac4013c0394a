//! Quaternion determinants and Pfaffian point fields.

pub mod domain;
pub mod error;
pub mod identities;
pub mod kernels;
pub mod par;
pub mod pointfield;
pub mod qcore;
pub mod qlinalg;
pub mod quadrature;
pub mod sampler;

pub use error::{Error, Result};
pub use par::Exec;
pub use qcore::{Complex2x2, Quaternion, C64};
pub use qlinalg::{ComplexMatrix, QuaternionMatrix};
