//! Bloch/Fano representation: SU(d) generator bases, decomposition of a
//! bipartite state into local Bloch vectors r, s and the correlation
//! matrix T, and reconstruction from Bloch data.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};
use crate::state::{DensityMatrix, PureState, Tolerances};

/// Ordered set of d²−1 traceless Hermitian generators with
/// Tr(λᵢλⱼ) = 2δᵢⱼ (generalized Gell-Mann matrices).
///
/// Ordering: symmetric pairs u_{jk} = |j⟩⟨k| + |k⟩⟨j| for j < k
/// (lexicographic), then antisymmetric v_{jk} = −i(|j⟩⟨k| − |k⟩⟨j|),
/// then diagonal w_l = √(2/(l(l+1)))(Σ_{m<l}|m⟩⟨m| − l|l⟩⟨l|), l = 1..d−1.
#[derive(Debug, Clone)]
pub struct GeneratorBasis {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl GeneratorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

fn build_generators(d: usize) -> GeneratorBasis {
    let mut gens = Vec::with_capacity(d * d - 1);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut u = CMatrix::zeros(d, d);
            u[(j, k)] = one;
            u[(k, j)] = one;
            gens.push(u);
        }
    }
    for j in 0..d {
        for k in (j + 1)..d {
            let mut v = CMatrix::zeros(d, d);
            v[(j, k)] = -i;
            v[(k, j)] = i;
            gens.push(v);
        }
    }
    for l in 1..d {
        let scale = (2.0 / (l as f64 * (l + 1) as f64)).sqrt();
        let mut w = CMatrix::zeros(d, d);
        for m in 0..l {
            w[(m, m)] = Complex64::new(scale, 0.0);
        }
        w[(l, l)] = Complex64::new(-scale * l as f64, 0.0);
        gens.push(w);
    }
    GeneratorBasis { dim: d, generators: gens }
}

/// SU(d) generator basis; memoized per dimension.
pub fn su_generators(d: usize) -> Result<Arc<GeneratorBasis>> {
    if d < 2 {
        return Err(Error::Domain(format!("su_generators requires d >= 2, got {d}")));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GeneratorBasis>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap();
    Ok(map.entry(d).or_insert_with(|| Arc::new(build_generators(d))).clone())
}

/// Local Bloch vectors and correlation matrix of a bipartite state.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochDecomposition {
    pub dim_a: usize,
    pub dim_b: usize,
    pub r: DVector<f64>,
    pub s: DVector<f64>,
    pub t: DMatrix<f64>,
}

impl BlochDecomposition {
    pub fn correlation_trace_norm(&self) -> Result<f64> {
        let tc = self.t.map(|x| Complex64::new(x, 0.0));
        matrix::trace_norm(&tc)
    }

    pub fn correlation_hs_norm(&self) -> f64 {
        self.t.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Bloch vector of a single-subsystem density matrix: vᵢ = (d/2)·Tr(ρ λᵢ).
fn local_bloch(rho: &CMatrix, basis: &GeneratorBasis, residue_tol: f64) -> Result<DVector<f64>> {
    let d = basis.dim() as f64;
    let mut v = DVector::zeros(basis.len());
    for (idx, lam) in basis.generators().iter().enumerate() {
        // Tr(ρ λ) = Σ_{ab} ρ_{ab} λ_{ba}
        let mut tr = Complex64::new(0.0, 0.0);
        for a in 0..rho.nrows() {
            for b in 0..rho.ncols() {
                tr += rho[(a, b)] * lam[(b, a)];
            }
        }
        v[idx] = matrix::real_trace(tr * Complex64::new(d / 2.0, 0.0), residue_tol)?;
    }
    Ok(v)
}

pub(crate) fn local_bloch_vector(rho: &CMatrix) -> Result<DVector<f64>> {
    let basis = su_generators(rho.nrows())?;
    local_bloch(rho, &basis, 1e-8)
}

/// Fano decomposition: rᵢ = (M/2)Tr(ρ(λᵢ⊗I)), sⱼ = (N/2)Tr(ρ(I⊗λⱼ)),
/// t_{ij} = (MN/4)Tr(ρ(λᵢ⊗λⱼ)).
pub fn decompose(rho: &DensityMatrix) -> Result<BlochDecomposition> {
    let (m, n) = (rho.dim_a(), rho.dim_b());
    let basis_a = su_generators(m)?;
    let basis_b = su_generators(n)?;
    let residue_tol = 1e-8;

    let r = local_bloch(&rho.partial_trace_b(), &basis_a, residue_tol)?;
    let s = local_bloch(&rho.partial_trace_a(), &basis_b, residue_tol)?;

    // t_{ab} via the contraction X_a[j,l] = Σ_{ik} λa_{ki} ρ_{ij,kl},
    // then t_{ab} = (MN/4) Σ_{jl} λb_{lj} X_a[j,l]; avoids forming λ⊗λ.
    let scale = Complex64::new((m * n) as f64 / 4.0, 0.0);
    let mut t = DMatrix::zeros(basis_a.len(), basis_b.len());
    for (a, lam_a) in basis_a.generators().iter().enumerate() {
        let mut x = CMatrix::zeros(n, n);
        for i in 0..m {
            for k in 0..m {
                let w = lam_a[(k, i)];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    for l in 0..n {
                        x[(j, l)] += w * rho.entry(i, j, k, l);
                    }
                }
            }
        }
        for (b, lam_b) in basis_b.generators().iter().enumerate() {
            let mut tr = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for l in 0..n {
                    tr += lam_b[(l, j)] * x[(j, l)];
                }
            }
            t[(a, b)] = matrix::real_trace(tr * scale, residue_tol)?;
        }
    }

    Ok(BlochDecomposition { dim_a: m, dim_b: n, r, s, t })
}

/// Fano-form matrix from Bloch data:
/// ρ = (1/MN)(I⊗I + Σrᵢλᵢ⊗I + ΣsⱼI⊗λⱼ + Σt_{ij}λᵢ⊗λⱼ).
/// PSD is not guaranteed for arbitrary data; see [`reconstruct_state`].
pub fn reconstruct(b: &BlochDecomposition) -> Result<CMatrix> {
    let (m, n) = (b.dim_a, b.dim_b);
    let basis_a = su_generators(m)?;
    let basis_b = su_generators(n)?;
    if b.r.len() != basis_a.len() || b.s.len() != basis_b.len() {
        return Err(Error::Dimension("Bloch vector lengths do not match dims".into()));
    }
    if b.t.nrows() != basis_a.len() || b.t.ncols() != basis_b.len() {
        return Err(Error::Dimension("correlation matrix shape does not match dims".into()));
    }
    let d = m * n;
    let mut mat = matrix::identity(d);
    let id_m = matrix::identity(m);
    let id_n = matrix::identity(n);
    for (i, lam) in basis_a.generators().iter().enumerate() {
        if b.r[i] != 0.0 {
            mat += matrix::kron(lam, &id_n)? * Complex64::new(b.r[i], 0.0);
        }
    }
    for (j, lam) in basis_b.generators().iter().enumerate() {
        if b.s[j] != 0.0 {
            mat += matrix::kron(&id_m, lam)? * Complex64::new(b.s[j], 0.0);
        }
    }
    for (i, lam_a) in basis_a.generators().iter().enumerate() {
        for (j, lam_b) in basis_b.generators().iter().enumerate() {
            if b.t[(i, j)] != 0.0 {
                mat += matrix::kron(lam_a, lam_b)? * Complex64::new(b.t[(i, j)], 0.0);
            }
        }
    }
    Ok(mat / Complex64::new(d as f64, 0.0))
}

/// Fano-form reconstruction validated as a density matrix, including the
/// PSD check (which carries the offending eigenvalue on failure).
pub fn reconstruct_state(b: &BlochDecomposition) -> Result<DensityMatrix> {
    let mat = reconstruct(b)?;
    let min_ev = matrix::hermitian_eigenvalues(&mat)[0];
    if min_ev < -1e-10 {
        return Err(Error::Validation(format!(
            "Bloch data does not describe a state (min eigenvalue {:.6e})",
            min_ev
        )));
    }
    DensityMatrix::with_tolerances(b.dim_a, b.dim_b, mat, Tolerances::default())
}

/// Reconstruction skipping the PSD check; Hermiticity and trace still hold.
pub fn reconstruct_unchecked(b: &BlochDecomposition) -> Result<DensityMatrix> {
    let mat = reconstruct(b)?;
    DensityMatrix::new_skip_psd(b.dim_a, b.dim_b, mat, Tolerances::default())
}

/// Residuals of the three pure-state purity relations:
/// |Tr ρ_A² − (M+2‖r‖²)/M²|,
/// |(M+2‖r‖²)/M² − (N+2‖s‖²)/N²|,
/// |N‖r‖² + M‖s‖² + 2‖T‖²_HS − MN(MN−1)/2|.
pub fn purity_relations_check(psi: &PureState) -> Result<[f64; 3]> {
    let rho = psi.density();
    let b = decompose(&rho)?;
    let (m, n) = (psi.dim_a() as f64, psi.dim_b() as f64);
    let r2 = b.r.norm_squared();
    let s2 = b.s.norm_squared();
    let t2: f64 = b.t.iter().map(|x| x * x).sum();

    let tr_rho_a2 = rho.partial_trace_b().iter().map(|z| z.norm_sqr()).sum::<f64>();
    let lhs16 = (tr_rho_a2 - (m + 2.0 * r2) / (m * m)).abs();
    let lhs17 = ((m + 2.0 * r2) / (m * m) - (n + 2.0 * s2) / (n * n)).abs();
    let lhs18 = (n * r2 + m * s2 + 2.0 * t2 - m * n * (m * n - 1.0) / 2.0).abs();
    Ok([lhs16, lhs17, lhs18])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CVector;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell() -> PureState {
        let s = 1.0 / 2.0f64.sqrt();
        PureState::new(
            2,
            2,
            CVector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]),
        )
        .unwrap()
    }

    #[test]
    fn d2_generators_are_paulis() {
        let basis = su_generators(2).unwrap();
        assert_eq!(basis.len(), 3);
        let sx = &basis.generators()[0];
        let sy = &basis.generators()[1];
        let sz = &basis.generators()[2];
        assert_eq!(sx[(0, 1)], c(1., 0.));
        assert_eq!(sy[(0, 1)], c(0., -1.));
        assert_eq!(sy[(1, 0)], c(0., 1.));
        assert_eq!(sz[(0, 0)], c(1., 0.));
        assert_eq!(sz[(1, 1)], c(-1., 0.));
    }

    #[test]
    fn su_generators_rejects_d1() {
        assert!(su_generators(1).is_err());
    }

    #[test]
    fn orthogonality_relations_hold() {
        for d in 2..=5 {
            let basis = su_generators(d).unwrap();
            assert_eq!(basis.len(), d * d - 1);
            for (i, a) in basis.generators().iter().enumerate() {
                assert!(a.trace().norm() < 1e-12, "Tr λ_{i} != 0 for d={d}");
                assert!(matrix::hermiticity_residual(a) < 1e-12);
                for (j, b) in basis.generators().iter().enumerate() {
                    let tr = (a * b).trace();
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((tr.re - expect).abs() < 1e-12 && tr.im.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn d4_basis_is_complete() {
        use rand::Rng;
        let basis = su_generators(4).unwrap();
        assert_eq!(basis.len(), 15);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let raw = CMatrix::from_fn(4, 4, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let x = (&raw + raw.adjoint()) * c(0.5, 0.0);
        let mut rebuilt = matrix::identity(4) * (x.trace() / c(4.0, 0.0));
        for lam in basis.generators() {
            let coeff = (lam * &x).trace() / c(2.0, 0.0);
            rebuilt += lam * coeff;
        }
        assert!((rebuilt - x).iter().all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn maximally_mixed_decomposes_to_zero() {
        let b = decompose(&DensityMatrix::maximally_mixed(3, 4)).unwrap();
        assert!(b.r.iter().all(|x| x.abs() < 1e-13));
        assert!(b.s.iter().all(|x| x.abs() < 1e-13));
        assert!(b.t.iter().all(|x| x.abs() < 1e-13));
    }

    #[test]
    fn bell_correlation_matrix_is_diag_1_m1_1() {
        let b = decompose(&bell().density()).unwrap();
        assert!(b.r.iter().all(|x| x.abs() < 1e-13));
        assert!(b.s.iter().all(|x| x.abs() < 1e-13));
        for i in 0..3 {
            for j in 0..3 {
                let expect = match (i, j) {
                    (0, 0) | (2, 2) => 1.0,
                    (1, 1) => -1.0,
                    _ => 0.0,
                };
                assert_abs_diff_eq!(b.t[(i, j)], expect, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn pure_product_bloch_norms() {
        // |0⟩|0⟩ on 3x4
        let (m, n) = (3usize, 4usize);
        let mut amps = CVector::zeros(m * n);
        amps[0] = c(1.0, 0.0);
        let psi = PureState::new(m, n, amps).unwrap();
        let b = decompose(&psi.density()).unwrap();
        let (mf, nf) = (m as f64, n as f64);
        assert_abs_diff_eq!(b.r.norm_squared(), mf * (mf - 1.0) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b.s.norm_squared(), nf * (nf - 1.0) / 2.0, epsilon = 1e-12);
        // T = r sᵀ for products
        let outer = &b.r * b.s.transpose();
        assert!((&b.t - outer).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn reconstruct_zero_bloch_is_maximally_mixed() {
        let b = BlochDecomposition {
            dim_a: 2,
            dim_b: 3,
            r: DVector::zeros(3),
            s: DVector::zeros(8),
            t: DMatrix::zeros(3, 8),
        };
        let rho = reconstruct_state(&b).unwrap();
        assert_eq!(rho, DensityMatrix::maximally_mixed(2, 3));
    }

    #[test]
    fn reconstruct_bell_from_bloch_data() {
        let mut t = DMatrix::zeros(3, 3);
        t[(0, 0)] = 1.0;
        t[(1, 1)] = -1.0;
        t[(2, 2)] = 1.0;
        let b = BlochDecomposition {
            dim_a: 2,
            dim_b: 2,
            r: DVector::zeros(3),
            s: DVector::zeros(3),
            t,
        };
        let rho = reconstruct_state(&b).unwrap();
        let expect = bell().density();
        assert!((rho.matrix() - expect.matrix()).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn reconstruct_rejects_non_psd_on_request() {
        let mut t = DMatrix::zeros(3, 3);
        t[(0, 0)] = 3.0; // far outside the state space
        let b = BlochDecomposition {
            dim_a: 2,
            dim_b: 2,
            r: DVector::zeros(3),
            s: DVector::zeros(3),
            t,
        };
        assert!(reconstruct_state(&b).is_err());
        assert!(reconstruct_unchecked(&b).is_ok());
    }

    #[test]
    fn roundtrip_random_states() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for m in 2..=4 {
            for n in 2..=4 {
                for _ in 0..20 {
                    let rho = crate::states::random_mixed_with_rng(m, n, m * n, &mut rng).unwrap();
                    let b = decompose(&rho).unwrap();
                    let back = reconstruct_state(&b).unwrap();
                    assert!(
                        (back.matrix() - rho.matrix()).iter().all(|z| z.norm() < 1e-10),
                        "roundtrip failed at ({m},{n})"
                    );
                }
            }
        }
    }

    #[test]
    fn r_is_local() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let rho = crate::states::random_mixed_with_rng(3, 4, 6, &mut rng).unwrap();
        let b = decompose(&rho).unwrap();
        let r_local = local_bloch_vector(&rho.partial_trace_b()).unwrap();
        assert!((&b.r - r_local).iter().all(|x| x.abs() < 1e-10));
    }

    #[test]
    fn purity_relations_bell_and_product() {
        let res = purity_relations_check(&bell()).unwrap();
        assert!(res.iter().all(|&x| x < 1e-12));

        let mut amps = CVector::zeros(4);
        amps[0] = c(1.0, 0.0);
        let prod = PureState::new(2, 2, amps).unwrap();
        let res = purity_relations_check(&prod).unwrap();
        assert!(res.iter().all(|&x| x < 1e-12));
    }
}
