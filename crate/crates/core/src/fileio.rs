//! State file format: a JSON document with `dim_a`, `dim_b`, the density
//! matrix as an MN×MN array of [re, im] pairs (row-major), and optional
//! `name` / `seed` metadata.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::CMatrix;
use crate::state::DensityMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dim_a: usize,
    pub dim_b: usize,
    /// Rows of [re, im] pairs, row-major.
    pub matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix, name: Option<String>, seed: Option<u64>) -> Self {
        let d = rho.total_dim();
        let matrix = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let z = rho.matrix()[(i, j)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        StateFile { dim_a: rho.dim_a(), dim_b: rho.dim_b(), matrix, name, seed }
    }

    pub fn to_density(&self) -> Result<DensityMatrix> {
        let d = self.dim_a * self.dim_b;
        if self.matrix.len() != d || self.matrix.iter().any(|row| row.len() != d) {
            return Err(Error::Parse(format!(
                "matrix must be {d}x{d} for dims ({},{})",
                self.dim_a, self.dim_b
            )));
        }
        let mat = CMatrix::from_fn(d, d, |i, j| {
            Complex64::new(self.matrix[i][j][0], self.matrix[i][j][1])
        });
        DensityMatrix::new(self.dim_a, self.dim_b, mat)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }
}
