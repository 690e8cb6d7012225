use crate::error::{Error, Result};

/// Lower-triangular `L` with `L Lᵀ = sigma` for a symmetric positive-definite
/// matrix given as rows.
pub fn cholesky(sigma: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let p = sigma.len();
    for (i, row) in sigma.iter().enumerate() {
        if row.len() != p {
            return Err(Error::BadShape(format!(
                "row {} has {} entries, expected {p}",
                i + 1,
                row.len()
            )));
        }
        for j in 0..i {
            let (a, b) = (row[j], sigma[j][i]);
            if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                return Err(Error::BadShape(format!(
                    "not symmetric at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }

    let mut l = vec![vec![0.0; p]; p];
    for i in 0..p {
        for j in 0..=i {
            let dot: f64 = (0..j).map(|m| l[i][m] * l[j][m]).sum();
            if i == j {
                let d = sigma[i][i] - dot;
                if d.is_nan() || d <= 0.0 {
                    return Err(Error::NotPositiveDefinite { pivot: i + 1 });
                }
                l[i][i] = d.sqrt();
            } else {
                l[i][j] = (sigma[i][j] - dot) / l[j][j];
            }
        }
    }
    Ok(l)
}
