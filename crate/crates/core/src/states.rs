//! Concrete state constructors: the GenTiles2 unextendible product basis
//! and its bound entangled state, maximally entangled states, white-noise
//! mixtures, and seeded random ensembles.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix, CVector};
use crate::state::{DensityMatrix, PureState};

/// The GenTiles2 unextendible product basis: 1 + M + M(N−3) mutually
/// orthogonal product vectors |F⟩, |S_j⟩, |L_{jk}⟩.
#[derive(Debug, Clone)]
pub struct UpbFamily {
    pub dim_a: usize,
    pub dim_b: usize,
    pub vectors: Vec<PureState>,
}

/// White-noise mixture ρ(p) = p·base + (1−p)·I/(MN).
#[derive(Debug, Clone)]
pub struct NoiseMixture {
    pub base: DensityMatrix,
    pub p: f64,
    pub mixed: DensityMatrix,
}

fn check_gentiles_dims(m: usize, n: usize) -> Result<()> {
    if m < 3 || n <= 3 || m > n {
        return Err(Error::Domain(format!(
            "GenTiles2 requires M >= 3, N > 3 and M <= N, got ({m},{n})"
        )));
    }
    Ok(())
}

/// GenTiles2 UPB on M×N.
///
/// |F⟩ = (1/√(MN)) Σ_{ij} |ij⟩,
/// |S_j⟩ = (|j⟩ − |j+1 mod M⟩)|j⟩/√2 for j = 0..M−1,
/// |L_{jk}⟩ = (1/√(N−2)) |j⟩ (Σ_{l=0}^{M−3} e^{i2πlk/(N−2)} |l+j+1 mod M⟩
///            + Σ_{l=M−2}^{N−3} e^{i2πlk/(N−2)} |l+2⟩), j = 0..M−1, k = 1..N−3.
pub fn gentiles2_upb(m: usize, n: usize) -> Result<UpbFamily> {
    check_gentiles_dims(m, n)?;
    let d = m * n;
    let mut vectors = Vec::with_capacity(1 + m + m * (n - 3));

    let f_amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    vectors.push(PureState::new(m, n, CVector::from_element(d, f_amp))?);

    let inv_sqrt2 = Complex64::new(1.0 / 2.0f64.sqrt(), 0.0);
    for j in 0..m {
        let mut amps = CVector::zeros(d);
        amps[j * n + j] = inv_sqrt2;
        amps[((j + 1) % m) * n + j] = -inv_sqrt2;
        vectors.push(PureState::new(m, n, amps)?);
    }

    let norm = 1.0 / ((n - 2) as f64).sqrt();
    for j in 0..m {
        for k in 1..=(n - 3) {
            let mut b_part = CVector::zeros(n);
            for l in 0..n.saturating_sub(2) {
                let phase = 2.0 * PI * (l * k) as f64 / (n - 2) as f64;
                let coeff = Complex64::from_polar(norm, phase);
                if l + 2 < m {
                    // first sum: l = 0..M-3, ket |l+j+1 mod M⟩
                    b_part[(l + j + 1) % m] += coeff;
                } else {
                    // second sum: l = M-2..N-3, ket |l+2⟩
                    b_part[l + 2] += coeff;
                }
            }
            let mut amps = CVector::zeros(d);
            for (idx, z) in b_part.iter().enumerate() {
                amps[j * n + idx] = *z;
            }
            vectors.push(PureState::new(m, n, amps)?);
        }
    }

    Ok(UpbFamily { dim_a: m, dim_b: n, vectors })
}

/// Bound entangled state ρ_GT2 = (I − Σ_v |v⟩⟨v|)/(2M−1) on the complement
/// of the GenTiles2 UPB.
pub fn gentiles2_state(m: usize, n: usize) -> Result<DensityMatrix> {
    let upb = gentiles2_upb(m, n)?;
    let d = m * n;
    let mut mat = matrix::identity(d);
    for v in &upb.vectors {
        let amps = v.amplitudes();
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] -= amps[i] * amps[j].conj();
            }
        }
    }
    mat /= Complex64::new((2 * m - 1) as f64, 0.0);
    DensityMatrix::new(m, n, mat)
}

/// Maximally entangled state (1/√d) Σ_i |ii⟩ on d×d.
pub fn max_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::Domain(format!("max_entangled requires d >= 2, got {d}")));
    }
    let mut amps = CVector::zeros(d * d);
    let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        amps[i * d + i] = a;
    }
    PureState::new(d, d, amps)
}

/// ρ(p) = p·base + (1−p)·I/(MN).
pub fn white_noise_mix(base: &DensityMatrix, p: f64) -> Result<NoiseMixture> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("noise weight p = {p} outside [0,1]")));
    }
    let d = base.total_dim();
    let mat = base.matrix() * Complex64::new(p, 0.0)
        + matrix::identity(d) * Complex64::new((1.0 - p) / d as f64, 0.0);
    let mixed = DensityMatrix::new(base.dim_a(), base.dim_b(), mat)?;
    Ok(NoiseMixture { base: base.clone(), p, mixed })
}

fn random_complex_vector<R: Rng>(len: usize, rng: &mut R) -> CVector {
    CVector::from_fn(len, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Random weights on the probability simplex.
fn random_simplex<R: Rng>(terms: usize, rng: &mut R) -> Vec<f64> {
    let mut w: Vec<f64> = (0..terms).map(|_| -(rng.gen::<f64>().max(1e-300)).ln()).collect();
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    w
}

pub fn random_pure_with_rng<R: Rng>(m: usize, n: usize, rng: &mut R) -> Result<PureState> {
    PureState::normalized(m, n, random_complex_vector(m * n, rng))
}

/// Haar-like random pure state (complex-normal measure), deterministic per seed.
pub fn random_pure(m: usize, n: usize, seed: u64) -> Result<PureState> {
    random_pure_with_rng(m, n, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_mixed_with_rng<R: Rng>(
    m: usize,
    n: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if rank < 1 {
        return Err(Error::Domain("random_mixed requires rank >= 1".into()));
    }
    let d = m * n;
    let weights = random_simplex(rank, rng);
    let mut mat = CMatrix::zeros(d, d);
    for w in weights {
        let psi = random_pure_with_rng(m, n, rng)?;
        let amps = psi.amplitudes();
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] += amps[i] * amps[j].conj() * Complex64::new(w, 0.0);
            }
        }
    }
    DensityMatrix::new(m, n, mat)
}

/// Random mixture of `rank` pure projectors with simplex weights.
pub fn random_mixed(m: usize, n: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_with_rng(m, n, rank, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_separable_with_rng<R: Rng>(
    m: usize,
    n: usize,
    terms: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if terms < 1 {
        return Err(Error::Domain("random_separable requires terms >= 1".into()));
    }
    let d = m * n;
    let weights = random_simplex(terms, rng);
    let mut mat = CMatrix::zeros(d, d);
    for w in weights {
        let a = random_complex_vector(m, rng).normalize();
        let b = random_complex_vector(n, rng).normalize();
        let mut amps = CVector::zeros(d);
        for i in 0..m {
            for j in 0..n {
                amps[i * n + j] = a[i] * b[j];
            }
        }
        for i in 0..d {
            for j in 0..d {
                mat[(i, j)] += amps[i] * amps[j].conj() * Complex64::new(w, 0.0);
            }
        }
    }
    DensityMatrix::new(m, n, mat)
}

/// Random explicit convex mixture of `terms` product projectors.
pub fn random_separable(m: usize, n: usize, terms: usize, seed: u64) -> Result<DensityMatrix> {
    random_separable_with_rng(m, n, terms, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gentiles2_rejects_bad_dims() {
        assert!(gentiles2_upb(2, 4).is_err());
        assert!(gentiles2_upb(3, 3).is_err());
        assert!(gentiles2_upb(4, 3).is_err());
        assert!(gentiles2_upb(3, 4).is_ok());
    }

    #[test]
    fn gentiles2_counts() {
        assert_eq!(gentiles2_upb(3, 4).unwrap().vectors.len(), 7);
        assert_eq!(gentiles2_upb(4, 5).unwrap().vectors.len(), 13);
    }

    #[test]
    fn gentiles2_s0_explicit() {
        let upb = gentiles2_upb(3, 4).unwrap();
        // vectors[1] is |S_0⟩ = (|0⟩ − |1⟩)|0⟩/√2
        let amps = upb.vectors[1].amplitudes();
        let s = 1.0 / 2.0f64.sqrt();
        for (idx, z) in amps.iter().enumerate() {
            let expect = match idx {
                0 => s,      // |00⟩
                4 => -s,     // |10⟩
                _ => 0.0,
            };
            assert_abs_diff_eq!(z.re, expect, epsilon = 1e-15);
            assert_abs_diff_eq!(z.im, 0.0, epsilon = 1e-15);
        }
    }

    fn check_upb_invariants(m: usize, n: usize) {
        let upb = gentiles2_upb(m, n).unwrap();
        for (i, u) in upb.vectors.iter().enumerate() {
            let norm: f64 = u.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-12);
            // product vector: amplitude matrix has rank 1
            let sv = matrix::singular_values(&u.amplitude_matrix()).unwrap();
            assert!(sv[1] <= 1e-10, "vector {i} of ({m},{n}) is not a product");
            for v in upb.vectors.iter().skip(i + 1) {
                let ip: Complex64 = u
                    .amplitudes()
                    .iter()
                    .zip(v.amplitudes().iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(ip.norm() <= 1e-10, "vectors not orthogonal at ({m},{n})");
            }
        }
    }

    #[test]
    fn upb_invariants_hold() {
        for (m, n) in [(3, 4), (3, 5), (3, 6), (4, 5), (4, 6)] {
            check_upb_invariants(m, n);
        }
    }

    #[test]
    fn gentiles2_state_is_scaled_projector() {
        for (m, n) in [(3usize, 4usize), (3, 5), (4, 5)] {
            let rho = gentiles2_state(m, n).unwrap();
            let sq = rho.matrix() * rho.matrix();
            let scaled = rho.matrix() / Complex64::new((2 * m - 1) as f64, 0.0);
            assert!((sq - scaled).iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn gentiles2_annihilates_upb_vectors() {
        let rho = gentiles2_state(3, 4).unwrap();
        for v in &gentiles2_upb(3, 4).unwrap().vectors {
            let image = rho.matrix() * v.amplitudes();
            assert!(image.iter().all(|z| z.norm() < 1e-10));
        }
    }

    #[test]
    fn gentiles2_34_spectrum() {
        let rho = gentiles2_state(3, 4).unwrap();
        let ev = matrix::hermitian_eigenvalues(rho.matrix());
        let rank = ev.iter().filter(|&&l| l > 1e-10).count();
        assert_eq!(rank, 5);
        for &l in &ev {
            assert!(l.abs() < 1e-12 || (l - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn gentiles2_is_ppt() {
        for (m, n) in [(3usize, 4usize), (3, 5), (3, 6), (4, 5)] {
            let rho = gentiles2_state(m, n).unwrap();
            let tn = matrix::trace_norm(&rho.partial_transpose_a()).unwrap();
            assert_abs_diff_eq!(tn, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn max_entangled_examples() {
        let bell = max_entangled(2).unwrap();
        assert_abs_diff_eq!(bell.amplitudes()[0].re, 1.0 / 2.0f64.sqrt(), epsilon = 1e-15);
        assert!(max_entangled(1).is_err());
        // reduction of maxent(3) is I/3
        let rho = max_entangled(3).unwrap().density();
        let ra = rho.partial_trace_b();
        assert!((ra - matrix::identity(3) / Complex64::new(3.0, 0.0))
            .iter()
            .all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn white_noise_mix_endpoints_and_linearity() {
        let base = gentiles2_state(3, 4).unwrap();
        let at1 = white_noise_mix(&base, 1.0).unwrap();
        assert_eq!(at1.mixed, base);
        let at0 = white_noise_mix(&base, 0.0).unwrap();
        assert_eq!(at0.mixed, DensityMatrix::maximally_mixed(3, 4));
        assert!(white_noise_mix(&base, 1.5).is_err());

        // T(ρ(p)) = p·T(base)
        let p = 0.37;
        let mix = white_noise_mix(&base, p).unwrap();
        let tb = crate::bloch::decompose(&base).unwrap().t;
        let tm = crate::bloch::decompose(&mix.mixed).unwrap().t;
        assert!((tm - tb * p).iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn random_generators_are_deterministic() {
        let a = random_pure(3, 4, 99).unwrap();
        let b = random_pure(3, 4, 99).unwrap();
        assert_eq!(a, b);
        let c = random_separable(3, 3, 10, 7).unwrap();
        let d = random_separable(3, 3, 10, 7).unwrap();
        assert_eq!(c, d);
        let e = random_mixed(2, 2, 3, 5).unwrap();
        let f = random_mixed(2, 2, 3, 5).unwrap();
        assert_eq!(e, f);
    }

    #[test]
    fn random_pure_has_unit_purity() {
        for seed in 0..20 {
            let psi = random_pure(3, 3, seed).unwrap();
            assert_abs_diff_eq!(psi.density().purity(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn random_generators_reject_bad_args() {
        assert!(random_mixed(2, 2, 0, 1).is_err());
        assert!(random_separable(2, 2, 0, 1).is_err());
    }
}
