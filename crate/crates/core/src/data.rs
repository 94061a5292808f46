//! Datasets, min-max scaling, and the dataset CSV format.
//!
//! The CSV layout is a header row, the feature columns, then an optional
//! treatment column `a`, then the outcome column `y`.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "matrix buffer has {} entries, expected {rows}x{cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidInput(format!(
                    "row {i} has {} columns, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Copies the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: indices.len(),
            cols: self.cols,
            data,
        }
    }
}

/// Min and max of the raw outcome; `degenerate` marks a constant input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleParams {
    pub y_min: f64,
    pub y_max: f64,
    pub degenerate: bool,
}

impl ScaleParams {
    /// Maps a value on the [0,1] scale back to the original outcome scale.
    pub fn unscale(&self, v: f64) -> f64 {
        if self.degenerate {
            self.y_min
        } else {
            self.y_min + v * (self.y_max - self.y_min)
        }
    }
}

/// Rescales `values` onto [0,1]. A constant vector maps to all zeros with the
/// degenerate flag set.
pub fn minmax_scale(values: &[f64]) -> Result<(Vec<f64>, ScaleParams)> {
    if values.is_empty() {
        return Err(Error::InvalidInput("cannot scale an empty vector".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!("non-finite value at index {i}")));
    }
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = hi <= lo;
    let scaled = if degenerate {
        vec![0.0; values.len()]
    } else {
        let span = hi - lo;
        values
            .iter()
            .map(|v| ((v - lo) / span).clamp(0.0, 1.0))
            .collect()
    };
    Ok((
        scaled,
        ScaleParams {
            y_min: lo,
            y_max: hi,
            degenerate,
        },
    ))
}

/// A fixed training dataset: features, an outcome in [0,1], and an optional
/// binary treatment.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Matrix,
    outcome: Vec<f64>,
    treatment: Option<Vec<f64>>,
    column_names: Option<Vec<String>>,
}

impl Dataset {
    pub fn new(
        features: Matrix,
        outcome: Vec<f64>,
        treatment: Option<Vec<f64>>,
        column_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let n = features.rows();
        if n < 2 {
            return Err(Error::InvalidInput(format!("dataset needs at least 2 rows, got {n}")));
        }
        if features.cols() < 1 {
            return Err(Error::InvalidInput("dataset needs at least one feature".into()));
        }
        if outcome.len() != n {
            return Err(Error::InvalidInput(format!(
                "outcome has {} entries for {n} rows",
                outcome.len()
            )));
        }
        if let Some(i) = features.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite feature at row {}, column {}",
                i / features.cols(),
                i % features.cols()
            )));
        }
        if let Some(i) = outcome
            .iter()
            .position(|v| !v.is_finite() || !(0.0..=1.0).contains(v))
        {
            return Err(Error::InvalidInput(format!(
                "outcome at row {i} is {} (must be finite and in [0,1])",
                outcome[i]
            )));
        }
        if let Some(a) = &treatment {
            if a.len() != n {
                return Err(Error::InvalidInput(format!(
                    "treatment has {} entries for {n} rows",
                    a.len()
                )));
            }
            if let Some(i) = a.iter().position(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::InvalidInput(format!(
                    "treatment at row {i} is {} (must be 0 or 1)",
                    a[i]
                )));
            }
        }
        if let Some(names) = &column_names {
            if names.len() != features.cols() {
                return Err(Error::InvalidInput(format!(
                    "{} column names for {} features",
                    names.len(),
                    features.cols()
                )));
            }
        }
        Ok(Self {
            features,
            outcome,
            treatment,
            column_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.rows()
    }

    pub fn d(&self) -> usize {
        self.features.cols()
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn outcome(&self) -> &[f64] {
        &self.outcome
    }

    pub fn treatment(&self) -> Option<&[f64]> {
        self.treatment.as_deref()
    }

    /// Treatment vector, or an invalid-input error when the dataset has none.
    pub fn require_treatment(&self) -> Result<&[f64]> {
        self.treatment()
            .ok_or_else(|| Error::InvalidInput("dataset has no treatment column `a`".into()))
    }

    pub fn column_names(&self) -> Option<&[String]> {
        self.column_names.as_deref()
    }

    fn feature_names(&self) -> Vec<String> {
        match &self.column_names {
            Some(names) => names.clone(),
            None => (1..=self.d()).map(|j| format!("x{j}")).collect(),
        }
    }

    /// Reads a dataset CSV and min-max scales its outcome onto [0,1].
    pub fn read_csv(path: impl AsRef<Path>) -> Result<(Self, ScaleParams)> {
        let file = std::fs::File::open(path)?;
        Self::from_csv_reader(file)
    }

    pub fn from_csv_reader<R: Read>(reader: R) -> Result<(Self, ScaleParams)> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_string()).collect();

        let y_col = match header.iter().position(|h| h == "y") {
            Some(j) if j + 1 == header.len() => j,
            Some(_) => {
                return Err(Error::Schema {
                    column: "y".into(),
                    reason: "outcome column must be the last column".into(),
                })
            }
            None => {
                return Err(Error::Schema {
                    column: "y".into(),
                    reason: "missing outcome column".into(),
                })
            }
        };
        let a_col = match header.iter().position(|h| h == "a") {
            Some(j) if j + 1 == y_col => Some(j),
            Some(_) => {
                return Err(Error::Schema {
                    column: "a".into(),
                    reason: "treatment column must immediately precede `y`".into(),
                })
            }
            None => None,
        };
        let d = a_col.unwrap_or(y_col);
        if d == 0 {
            return Err(Error::Schema {
                column: header[0].clone(),
                reason: "no feature columns before the treatment/outcome columns".into(),
            });
        }

        let mut features = Vec::new();
        let mut treatment = Vec::new();
        let mut outcome = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != header.len() {
                return Err(Error::InvalidInput(format!(
                    "data row {} has {} fields, header has {}",
                    row + 1,
                    record.len(),
                    header.len()
                )));
            }
            for (j, field) in record.iter().enumerate() {
                let v: f64 = field.trim().parse().map_err(|_| Error::Schema {
                    column: header[j].clone(),
                    reason: format!("non-numeric value {field:?} in data row {}", row + 1),
                })?;
                if !v.is_finite() {
                    return Err(Error::Schema {
                        column: header[j].clone(),
                        reason: format!("non-finite value in data row {}", row + 1),
                    });
                }
                if j < d {
                    features.push(v);
                } else if Some(j) == a_col {
                    if v != 0.0 && v != 1.0 {
                        return Err(Error::Schema {
                            column: "a".into(),
                            reason: format!("value {v} in data row {} is not 0 or 1", row + 1),
                        });
                    }
                    treatment.push(v);
                } else {
                    outcome.push(v);
                }
            }
        }
        let n = outcome.len();
        let (scaled, params) = minmax_scale(&outcome)?;
        let matrix = Matrix::from_row_major(n, d, features)?;
        let ds = Dataset::new(
            matrix,
            scaled,
            a_col.map(|_| treatment),
            Some(header[..d].to_vec()),
        )?;
        Ok((ds, params))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.to_csv_writer(std::io::BufWriter::new(file))
    }

    pub fn to_csv_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::Writer::from_writer(writer);
        let mut header = self.feature_names();
        if self.treatment.is_some() {
            header.push("a".into());
        }
        header.push("y".into());
        wtr.write_record(&header)?;
        let mut record = Vec::with_capacity(header.len());
        for i in 0..self.n() {
            record.clear();
            record.extend(self.features.row(i).iter().map(|&v| format_f64(v)));
            if let Some(a) = &self.treatment {
                record.push(format_f64(a[i]));
            }
            record.push(format_f64(self.outcome[i]));
            wtr.write_record(&record)?;
        }
        wtr.flush()?;
        Ok(())
    }
}

/// 17 significant digits: round-trips every finite `f64` exactly.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}
