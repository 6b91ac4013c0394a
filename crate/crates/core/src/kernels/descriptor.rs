use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    bergman_quaternion, circular_symplectic, finite_kernel, ginibre_quaternion, gse, pfaffian_ginibre_complex,
    Kernel,
};
use crate::error::{Error, Result};
use crate::qcore::{Quaternion, C64};
use crate::qlinalg::QuaternionMatrix;

/// A kernel addressed by name and parameters, e.g. `cse:N=4` or
/// `finite:matrix.json`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KernelSpec {
    Cse { n: usize },
    Gse { n: usize },
    GinibreQ { n: usize },
    BergmanQ { n: usize },
    PfaffianGinibreC { n: usize },
    Finite { path: PathBuf },
}

fn parse_params(name: &str, body: &str, key: &str) -> Result<usize> {
    let mut params = BTreeMap::new();
    for item in body.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| Error::Descriptor(format!("`{item}` is not key=value")))?;
        let (k, v) = (k.trim(), v.trim());
        if k != key {
            return Err(Error::Descriptor(format!("unknown key `{k}` for `{name}` (expected `{key}`)")));
        }
        let v: usize = v.parse().map_err(|_| Error::Descriptor(format!("`{v}` is not a non-negative integer")))?;
        if params.insert(k.to_string(), v).is_some() {
            return Err(Error::Descriptor(format!("duplicate key `{k}`")));
        }
    }
    params.get(key).copied().ok_or_else(|| Error::Descriptor(format!("`{name}` needs `{key}=…`")))
}

impl FromStr for KernelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, body) = s.split_once(':').unwrap_or((s, ""));
        match name.trim() {
            "cse" => Ok(KernelSpec::Cse { n: parse_params(name, body, "N")? }),
            "gse" => Ok(KernelSpec::Gse { n: parse_params(name, body, "N")? }),
            "ginibre-q" => Ok(KernelSpec::GinibreQ { n: parse_params(name, body, "n")? }),
            "bergman-q" => Ok(KernelSpec::BergmanQ { n: parse_params(name, body, "n")? }),
            "pfaffian-ginibre-c" => Ok(KernelSpec::PfaffianGinibreC { n: parse_params(name, body, "N")? }),
            "finite" if !body.is_empty() => Ok(KernelSpec::Finite { path: PathBuf::from(body) }),
            "finite" => Err(Error::Descriptor("`finite` needs a matrix path".into())),
            other => Err(Error::Descriptor(format!("unknown kernel `{other}`"))),
        }
    }
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelSpec::Cse { n } => write!(f, "cse:N={n}"),
            KernelSpec::Gse { n } => write!(f, "gse:N={n}"),
            KernelSpec::GinibreQ { n } => write!(f, "ginibre-q:n={n}"),
            KernelSpec::BergmanQ { n } => write!(f, "bergman-q:n={n}"),
            KernelSpec::PfaffianGinibreC { n } => write!(f, "pfaffian-ginibre-c:N={n}"),
            KernelSpec::Finite { path } => write!(f, "finite:{}", path.display()),
        }
    }
}

impl KernelSpec {
    pub fn build(&self) -> Result<Kernel> {
        let mut k = match self {
            KernelSpec::Cse { n } => circular_symplectic(*n)?,
            KernelSpec::Gse { n } => gse(*n)?,
            KernelSpec::GinibreQ { n } => ginibre_quaternion(*n)?,
            KernelSpec::BergmanQ { n } => bergman_quaternion(*n)?,
            KernelSpec::PfaffianGinibreC { n } => pfaffian_ginibre_complex(*n)?,
            KernelSpec::Finite { path } => finite_kernel(read_matrix_json(path)?)?,
        };
        k.descriptor = self.to_string();
        Ok(k)
    }
}

/// Parses a descriptor and builds the kernel.
pub fn from_descriptor(s: &str) -> Result<Kernel> {
    s.parse::<KernelSpec>()?.build()
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<[[f64; 2]; 4]>,
}

/// Reads `{"n": n, "entries": [...]}` with `n²` quaternions in row-major
/// order, each as four `[re, im]` pairs `(s, x, y, z)`.
pub fn read_matrix_json(path: &Path) -> Result<QuaternionMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_json(&text)
}

pub fn parse_matrix_json(text: &str) -> Result<QuaternionMatrix> {
    let m: MatrixJson = serde_json::from_str(text)?;
    if m.entries.len() != m.n * m.n {
        return Err(Error::Shape(format!("{} entries for n = {}", m.entries.len(), m.n)));
    }
    let entries = m
        .entries
        .iter()
        .map(|q| Quaternion::from_coeffs(q.map(|[re, im]| C64::new(re, im))))
        .collect();
    QuaternionMatrix::from_row_major(m.n, m.n, entries)
}

pub fn write_matrix_json(m: &QuaternionMatrix) -> Result<String> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let entries = m.entries().iter().map(|q| q.coeffs().map(|c| [c.re, c.im])).collect();
    Ok(serde_json::to_string(&MatrixJson { n: m.rows(), entries })?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_of_descriptors() {
        for s in ["cse:N=4", "gse:N=3", "ginibre-q:n=5", "bergman-q:n=5", "pfaffian-ginibre-c:N=4"] {
            let spec: KernelSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
            assert_eq!(spec.build().unwrap().descriptor(), s);
        }
    }

    #[test]
    fn bad_descriptors_are_errors() {
        for s in ["cse", "cse:N=4,M=2", "cse:n=4", "cse:N=x", "cse:N=2,N=3", "foo:N=1", "finite:", "cse:N"] {
            assert!(matches!(s.parse::<KernelSpec>(), Err(Error::Descriptor(_))), "{s}");
        }
        assert!(from_descriptor("gse:N=40").is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let h = Quaternion::new(C64::new(0.0, 0.5), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, -2.0));
        let m = QuaternionMatrix::from_rows(vec![vec![Quaternion::ONE, h], vec![h.conj(), Quaternion::ONE]]).unwrap();
        let text = write_matrix_json(&m).unwrap();
        assert_eq!(parse_matrix_json(&text).unwrap(), m);
        assert!(parse_matrix_json(r#"{"n": 2, "entries": []}"#).is_err());
    }
}
