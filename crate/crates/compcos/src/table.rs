//! Tabulated functions on `V_{n,m}` read from CSV.
//!
//! Each row holds one frame, its `n*m` entries in row-major order, followed
//! by the columns `value_re` and `value_im`. The header is required. The
//! function is evaluated by nearest neighbour in projector distance
//! `|vv' - ww'|`, so it is a function on the Grassmannian.

use std::path::Path;

use compcos_core::transforms::{AngleFunction, Invariance};
use compcos_core::{Matrix, StiefelFrame, C64};

/// Printed frames are re-orthonormalized if they are this close to a frame.
const ORTHONORMALITY_TOLERANCE: f64 = 1e-6;

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("the table has no rows")]
    Empty,
}

pub struct FrameTable {
    projectors: Vec<Matrix>,
    values: Vec<C64>,
}

impl FrameTable {
    pub fn load(path: &Path, n: usize, m: usize) -> Result<Self, TableError> {
        Self::from_reader(csv::Reader::from_path(path)?, n, m)
    }

    pub fn from_reader<R: std::io::Read>(mut reader: csv::Reader<R>, n: usize, m: usize) -> Result<Self, TableError> {
        let header = reader.headers()?.clone();
        let width = n * m + 2;
        if header.len() != width || &header[width - 2] != "value_re" || &header[width - 1] != "value_im" {
            return Err(TableError::Row {
                row: 1,
                message: format!("expected {} frame columns then value_re,value_im", n * m),
            });
        }
        let mut projectors = Vec::new();
        let mut values = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let row = i + 2;
            let record = record?;
            let nums = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| TableError::Row { row, message: e.to_string() })?;
            let v = Matrix::from_row_major(n, m, nums[..n * m].to_vec())
                .map_err(|e| TableError::Row { row, message: e.to_string() })?;
            let defect = v.orthonormality_defect();
            if !(defect <= ORTHONORMALITY_TOLERANCE) {
                return Err(TableError::Row { row, message: format!("frame is not orthonormal (defect {defect:.2e})") });
            }
            let frame = StiefelFrame::orthonormalize(&v).map_err(|e| TableError::Row { row, message: e.to_string() })?;
            projectors.push(frame.projector());
            values.push(C64::new(nums[n * m], nums[n * m + 1]));
        }
        if values.is_empty() {
            return Err(TableError::Empty);
        }
        Ok(FrameTable { projectors, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AngleFunction for FrameTable {
    fn eval(&self, v: &Matrix) -> C64 {
        let p = v.matmul(&v.transpose());
        let distance = |q: &Matrix| {
            let d = p.sub(q);
            d.dot(&d)
        };
        let nearest = (0..self.projectors.len())
            .min_by(|&a, &b| distance(&self.projectors[a]).total_cmp(&distance(&self.projectors[b])))
            .expect("table is non-empty");
        self.values[nearest]
    }

    fn invariance(&self) -> Invariance {
        Invariance::RightO
    }
}
