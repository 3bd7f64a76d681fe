//! Operator file format: a JSON document `{"dim": d, "re": [[..]], "im": [[..]]}`
//! with `d x d` row-major real and imaginary parts.

use std::fs;
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::HermitianOperator;
use crate::error::Error;
use crate::scalar::{lit, to_f64, Real};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: malformed operator document: {source}")]
    Json {
        path: String,
        source: serde_json::Error,
    },
    #[error("{path}: field `{field}` has {found} rows/columns, expected {expected}")]
    Field {
        path: String,
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{path}: field `{field}` contains a non-finite value")]
    NonFinite { path: String, field: &'static str },
    #[error("{path}: {source}")]
    Invalid { path: String, source: Error },
}

impl OperatorFile {
    pub fn from_operator<T: Real>(op: &HermitianOperator<T>) -> Self {
        let n = op.dim();
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let z = op.entry(i, j);
                re[i][j] = to_f64(z.re);
                im[i][j] = to_f64(z.im);
            }
        }
        Self { dim: n, re, im }
    }

    /// Validates shape, finiteness and Hermiticity. `origin` names the source in errors.
    pub fn to_operator<T: Real>(&self, origin: &str) -> Result<HermitianOperator<T>, FormatError> {
        let n = self.dim;
        for (field, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                return Err(FormatError::Field {
                    path: origin.to_string(),
                    field,
                    expected: n,
                    found: rows.len(),
                });
            }
            for row in rows.iter() {
                if row.len() != n {
                    return Err(FormatError::Field {
                        path: origin.to_string(),
                        field,
                        expected: n,
                        found: row.len(),
                    });
                }
                if row.iter().any(|x| !x.is_finite()) {
                    return Err(FormatError::NonFinite {
                        path: origin.to_string(),
                        field,
                    });
                }
            }
        }
        let entries = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| Complex::new(lit::<T>(self.re[i][j]), lit::<T>(self.im[i][j])))
            .collect();
        HermitianOperator::new(n, entries).map_err(|source| FormatError::Invalid {
            path: origin.to_string(),
            source,
        })
    }
}

pub fn parse_operator<T: Real>(text: &str, origin: &str) -> Result<HermitianOperator<T>, FormatError> {
    let doc: OperatorFile = serde_json::from_str(text).map_err(|source| FormatError::Json {
        path: origin.to_string(),
        source,
    })?;
    doc.to_operator(origin)
}

pub fn load_operator<T: Real>(path: impl AsRef<Path>) -> Result<HermitianOperator<T>, FormatError> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: origin.clone(),
        source,
    })?;
    parse_operator(&text, &origin)
}

pub fn write_operator<T: Real>(op: &HermitianOperator<T>) -> String {
    let mut s = serde_json::to_string_pretty(&OperatorFile::from_operator(op)).expect("serializable");
    s.push('\n');
    s
}

pub fn save_operator<T: Real>(op: &HermitianOperator<T>, path: impl AsRef<Path>) -> Result<(), FormatError> {
    let path = path.as_ref();
    fs::write(path, write_operator(op)).map_err(|source| FormatError::Io {
        path: path.display().to_string(),
        source,
    })
}
