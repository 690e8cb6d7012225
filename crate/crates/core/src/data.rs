use crate::error::{Error, Result};

/// An `n × p` sample: `n` observations of a `p`-dimensional vector.
///
/// Values are stored column-major so that each variable is a contiguous
/// slice. Every value is finite; ties are checked later, when ranks are
/// taken.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    n: usize,
    p: usize,
    values: Vec<f64>,
    labels: Vec<String>,
}

impl DataMatrix {
    /// Builds a matrix from column vectors, labelled `X1..Xp`.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (1..=columns.len()).map(|j| format!("X{j}")).collect();
        Self::with_labels(labels, columns)
    }

    pub fn with_labels(labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(Error::LengthMismatch {
                expected: columns.len(),
                found: labels.len(),
            });
        }
        let n = columns.first().map_or(0, Vec::len);
        let p = columns.len();
        let mut values = Vec::with_capacity(n * p);
        for (j, col) in columns.into_iter().enumerate() {
            if col.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: col.len(),
                });
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteValue {
                    row,
                    column: Some(j),
                });
            }
            values.extend(col);
        }
        Ok(Self {
            n,
            p,
            values,
            labels,
        })
    }

    /// Builds a matrix from row vectors (one observation per row).
    pub fn from_rows(labels: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let p = labels.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); p];
        for row in rows {
            if row.len() != p {
                return Err(Error::LengthMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
            for (col, &v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Self::with_labels(labels, columns)
    }

    /// Takes ownership of column-major values without copying. Used by the
    /// simulation generators, which only produce finite values; the
    /// finiteness check still runs.
    pub(crate) fn from_column_major(n: usize, p: usize, values: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(values.len(), n * p);
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                row: idx % n,
                column: Some(idx / n),
            });
        }
        let labels = (1..=p).map(|j| format!("X{j}")).collect();
        Ok(Self {
            n,
            p,
            values,
            labels,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.p).map(move |j| self.column(j))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, j: usize) -> &str {
        &self.labels[j]
    }

    /// Applies `f` to every value of column `j`.
    pub fn map_column(&mut self, j: usize, f: impl Fn(f64) -> f64) -> Result<()> {
        let n = self.n;
        for (row, v) in self.values[j * n..(j + 1) * n].iter_mut().enumerate() {
            *v = f(*v);
            if !v.is_finite() {
                return Err(Error::NonFiniteValue {
                    row,
                    column: Some(j),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_and_columns_agree() {
        let labels = vec!["a".to_string(), "b".to_string()];
        let rows = vec![vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]];
        let m = DataMatrix::from_rows(labels, &rows).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(m.p(), 2);
        assert_eq!(m.column(0), &[1.0, 3.0, 5.0]);
        assert_eq!(m.column(1), &[2.0, 4.0, 6.0]);
        assert_eq!(m.label(1), "b");
    }

    #[test]
    fn rejects_nan_and_ragged() {
        let err = DataMatrix::from_columns(vec![vec![1.0, f64::NAN], vec![1.0, 2.0]]).unwrap_err();
        assert_eq!(
            err,
            Error::NonFiniteValue {
                row: 1,
                column: Some(0)
            }
        );
        let err = DataMatrix::from_columns(vec![vec![1.0, 2.0], vec![1.0]]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }
}
