//! Bipartite density matrices and pure states with the index convention
//! fixed crate-wide: the composite basis |ij⟩ is ordered row-major with the
//! B index fastest, i.e. |ij⟩ ↦ i·N + j.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix, CVector};

/// Validation tolerances for density-matrix construction.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub hermiticity: f64,
    pub trace: f64,
    /// Eigenvalues must exceed `-psd`.
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermiticity: 1e-12,
            trace: 1e-12,
            psd: 1e-10,
        }
    }
}

/// Hermitian, unit-trace, PSD matrix on C^M ⊗ C^N.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(dim_a: usize, dim_b: usize, mat: CMatrix) -> Result<Self> {
        Self::with_tolerances(dim_a, dim_b, mat, Tolerances::default())
    }

    pub fn with_tolerances(
        dim_a: usize,
        dim_b: usize,
        mat: CMatrix,
        tol: Tolerances,
    ) -> Result<Self> {
        let state = Self::new_skip_psd(dim_a, dim_b, mat, tol)?;
        let min_ev = matrix::hermitian_eigenvalues(&state.mat)[0];
        if min_ev < -tol.psd {
            return Err(Error::Validation(format!(
                "matrix is not PSD (min eigenvalue {:.3e})",
                min_ev
            )));
        }
        Ok(state)
    }

    /// Validates shape, Hermiticity and trace but not positivity. Used by
    /// Fano-form reconstruction, where PSD is checked only on request.
    pub(crate) fn new_skip_psd(
        dim_a: usize,
        dim_b: usize,
        mat: CMatrix,
        tol: Tolerances,
    ) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        let d = dim_a * dim_b;
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::Dimension(format!(
                "expected a {d}x{d} matrix for dims ({dim_a},{dim_b}), got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if !matrix::is_finite(&mat) {
            return Err(Error::Validation("matrix contains NaN/Inf entries".into()));
        }
        let herm = matrix::hermiticity_residual(&mat);
        if herm > tol.hermiticity {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian (residual {:.3e})",
                herm
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol.trace || tr.im.abs() > tol.trace {
            return Err(Error::Validation(format!(
                "trace is {:.12} + {:.3e}i, expected 1",
                tr.re, tr.im
            )));
        }
        Ok(DensityMatrix { dim_a, dim_b, mat })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Entry at composite indices ρ_{ij,kl}.
    #[inline]
    pub fn entry(&self, i: usize, j: usize, k: usize, l: usize) -> Complex64 {
        self.mat[(i * self.dim_b + j, k * self.dim_b + l)]
    }

    /// ρ_A = Tr_B ρ, an M×M matrix with (ρ_A)_{ik} = Σ_j ρ_{ij,kj}.
    pub fn partial_trace_b(&self) -> CMatrix {
        let m = self.dim_a;
        let mut out = CMatrix::zeros(m, m);
        for i in 0..m {
            for k in 0..m {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..self.dim_b {
                    acc += self.entry(i, j, k, j);
                }
                out[(i, k)] = acc;
            }
        }
        out
    }

    /// ρ_B = Tr_A ρ, an N×N matrix with (ρ_B)_{jl} = Σ_i ρ_{ij,il}.
    pub fn partial_trace_a(&self) -> CMatrix {
        let n = self.dim_b;
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            for l in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..self.dim_a {
                    acc += self.entry(i, j, i, l);
                }
                out[(j, l)] = acc;
            }
        }
        out
    }

    /// Partial transpose on A: T_A(ρ)_{ij,kl} = ρ_{kj,il}.
    pub fn partial_transpose_a(&self) -> CMatrix {
        let (m, n) = (self.dim_a, self.dim_b);
        let d = m * n;
        let mut out = CMatrix::zeros(d, d);
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..n {
                        out[(i * n + j, k * n + l)] = self.entry(k, j, i, l);
                    }
                }
            }
        }
        out
    }

    /// Realignment: R(ρ)_{(i,j),(k,l)} = ρ_{ik,jl}, an M²×N² matrix with
    /// row index i·M+j (i,j < M) and column index k·N+l (k,l < N).
    pub fn realign(&self) -> CMatrix {
        let (m, n) = (self.dim_a, self.dim_b);
        let mut out = CMatrix::zeros(m * m, n * n);
        for i in 0..m {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..n {
                        out[(i * m + j, k * n + l)] = self.entry(i, k, j, l);
                    }
                }
            }
        }
        out
    }

    /// Tr(ρ²).
    pub fn purity(&self) -> f64 {
        // ρ Hermitian: Tr(ρ²) = Σ|ρ_ij|²
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The state with subsystems swapped (|ij⟩ ↦ |ji⟩).
    pub fn swap_subsystems(&self) -> DensityMatrix {
        let (m, n) = (self.dim_a, self.dim_b);
        let d = m * n;
        let mut out = CMatrix::zeros(d, d);
        for i in 0..m {
            for j in 0..n {
                for k in 0..m {
                    for l in 0..n {
                        out[(j * m + i, l * m + k)] = self.entry(i, j, k, l);
                    }
                }
            }
        }
        DensityMatrix {
            dim_a: n,
            dim_b: m,
            mat: out,
        }
    }

    /// Maximally mixed state I/(MN).
    pub fn maximally_mixed(dim_a: usize, dim_b: usize) -> DensityMatrix {
        let d = dim_a * dim_b;
        DensityMatrix {
            dim_a,
            dim_b,
            mat: matrix::identity(d) * Complex64::new(1.0 / d as f64, 0.0),
        }
    }

    /// Product state ρ_A ⊗ ρ_B from single-subsystem density matrices.
    pub fn product(rho_a: &CMatrix, rho_b: &CMatrix) -> Result<DensityMatrix> {
        let mat = matrix::kron(rho_a, rho_b)?;
        DensityMatrix::new(rho_a.nrows(), rho_b.nrows(), mat)
    }
}

/// Unit vector on C^M ⊗ C^N.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    dim_a: usize,
    dim_b: usize,
    #[serde(with = "complex_vec")]
    amplitudes: CVector,
}

impl PureState {
    pub fn new(dim_a: usize, dim_b: usize, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes, got {}",
                dim_a * dim_b,
                amplitudes.len()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "state is not normalized (|ψ|² = {:.15})",
                norm_sq
            )));
        }
        Ok(PureState {
            dim_a,
            dim_b,
            amplitudes,
        })
    }

    /// Normalizes the amplitudes before constructing.
    pub fn normalized(dim_a: usize, dim_b: usize, amplitudes: CVector) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Domain("cannot normalize the zero vector".into()));
        }
        Self::new(dim_a, dim_b, amplitudes / Complex64::new(norm, 0.0))
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitudes reshaped as the M×N coefficient matrix ψ_{ij}.
    pub fn amplitude_matrix(&self) -> CMatrix {
        CMatrix::from_fn(self.dim_a, self.dim_b, |i, j| {
            self.amplitudes[i * self.dim_b + j]
        })
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let d = self.amplitudes.len();
        let mat = CMatrix::from_fn(d, d, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            mat,
        }
    }
}

mod complex_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &CVector, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        serde::Serialize::serialize(&pairs, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<CVector, D::Error> {
        let pairs: Vec<[f64; 2]> = serde::Deserialize::deserialize(d)?;
        Ok(CVector::from_iterator(
            pairs.len(),
            pairs.iter().map(|p| Complex64::new(p[0], p[1])),
        ))
    }
}
