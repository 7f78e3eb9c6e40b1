//! JSON forms of matrices: `{"field": "Q" | "F:<p>", "rows", "cols", "entries"}`
//! with every entry serialized as a string.

use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use super::scalar::Field;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

impl From<Matrix> for MatrixJson {
    fn from(m: Matrix) -> Self {
        MatrixJson {
            field: m.field().to_string(),
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().iter().map(|e| e.to_text()).collect(),
        }
    }
}

impl TryFrom<MatrixJson> for Matrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let field: Field = j.field.parse()?;
        let entries = j.entries.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>>>()?;
        Matrix::new(field, j.rows, j.cols, entries)
    }
}
