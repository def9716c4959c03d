use serde::{Deserialize, Serialize};

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// On-disk matrix format:
/// `{"d_rows": n, "d_cols": m, "re": [...], "im": [...]}`, both arrays row-major.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MatrixJson {
    pub d_rows: usize,
    pub d_cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<&ComplexMatrix> for MatrixJson {
    fn from(m: &ComplexMatrix) -> Self {
        Self {
            d_rows: m.rows(),
            d_cols: m.cols(),
            re: m.data().iter().map(|z| z.re).collect(),
            im: m.data().iter().map(|z| z.im).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.re.len() != j.d_rows * j.d_cols || j.im.len() != j.d_rows * j.d_cols {
            return Err(Error::EntryCount {
                rows: j.d_rows,
                cols: j.d_cols,
                got: j.re.len().max(j.im.len()),
            });
        }
        ComplexMatrix::from_parts(j.d_rows, j.d_cols, &j.re, &j.im)
    }
}

impl ComplexMatrix {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(s)?;
        j.try_into()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix JSON serialization")
    }
}
