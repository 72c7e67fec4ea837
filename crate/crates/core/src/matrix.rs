//! Dense complex-matrix primitives: Kronecker products, singular-value
//! norms and PSD functional calculus.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, row-major semantics throughout the crate.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex vector.
pub type CVector = DVector<Complex64>;

/// Largest allowed dimension for a Kronecker product result.
pub const MAX_KRON_DIM: usize = 4096;

/// SVD iteration cap; nalgebra reports non-convergence past this.
const SVD_MAX_ITER: usize = 2000;

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Max entrywise deviation from Hermiticity, max |m_ij - conj(m_ji)|.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    let mut res = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            res = res.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    res
}

/// Kronecker product `a ⊗ b` with `(a⊗b)_{(i·p+k),(j·q+l)} = a_{ij} b_{kl}`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    let rows = a.nrows().checked_mul(b.nrows());
    let cols = a.ncols().checked_mul(b.ncols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= MAX_KRON_DIM && c <= MAX_KRON_DIM => Ok(a.kronecker(b)),
        _ => Err(Error::Dimension(format!(
            "kron result {}x{} * {}x{} exceeds the {} limit",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols(),
            MAX_KRON_DIM
        ))),
    }
}

/// Singular values of a rectangular complex matrix, decreasing order.
pub fn singular_values(x: &CMatrix) -> Result<Vec<f64>> {
    let svd = x
        .clone()
        .try_svd(false, false, f64::EPSILON, SVD_MAX_ITER)
        .ok_or_else(|| {
            Error::Numerical(format!(
                "SVD failed to converge for a {}x{} matrix",
                x.nrows(),
                x.ncols()
            ))
        })?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(sv)
}

/// Trace (Ky Fan) norm: sum of singular values.
pub fn trace_norm(x: &CMatrix) -> Result<f64> {
    Ok(singular_values(x)?.iter().sum())
}

/// Hilbert-Schmidt (Frobenius) norm.
pub fn hs_norm(x: &CMatrix) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Real eigenvalues of a Hermitian matrix, ascending order.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

fn hermitian_function(m: &CMatrix, tol: f64, f: impl Fn(f64) -> Result<f64>) -> Result<CMatrix> {
    let res = hermiticity_residual(m);
    if res > tol {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian (residual {:.3e})",
            res
        )));
    }
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let mut diag = CMatrix::zeros(n, n);
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        diag[(i, i)] = Complex64::new(f(lambda)?, 0.0);
    }
    Ok(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())
}

/// `(m + eps·I)^{-1/2}` of a Hermitian PSD matrix via eigendecomposition.
pub fn inv_sqrt_psd(m: &CMatrix, eps: f64) -> Result<CMatrix> {
    hermitian_function(m, 1e-10, |lambda| {
        let shifted = lambda + eps;
        if shifted <= 0.0 {
            return Err(Error::SingularReduction(shifted));
        }
        Ok(1.0 / shifted.sqrt())
    })
}

/// Principal square root of a Hermitian PSD matrix; small negative
/// eigenvalues from rounding are clamped to zero.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    hermitian_function(m, 1e-9, |lambda| Ok(lambda.max(0.0).sqrt()))
}

/// `r`-vector of a Hermitian matrix rounded onto the reals, erroring if the
/// imaginary residue exceeds `tol`.
pub fn real_trace(z: Complex64, tol: f64) -> Result<f64> {
    if z.im.abs() > tol {
        return Err(Error::Numerical(format!(
            "trace has imaginary residue {:.3e} (input not Hermitian?)",
            z.im
        )));
    }
    Ok(z.re)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}
