//! Entanglement quantification: exact pure-state concurrence and tangle
//! (also via the correlation matrix), lower and upper bounds for mixed
//! states, the two-qubit MNB measure in both forms, and the Wootters
//! concurrence used as a two-qubit oracle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bloch;
use crate::criteria::cm_threshold;
use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};
use crate::state::{DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureId {
    #[serde(rename = "CONCURRENCE")]
    Concurrence,
    #[serde(rename = "TANGLE")]
    Tangle,
    #[serde(rename = "MNB")]
    Mnb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimateKind {
    ExactPure,
    LowerBound,
    UpperBound,
    ExactClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundSource {
    #[serde(rename = "CAF")]
    Caf,
    #[serde(rename = "CM_TRACE_BOUND")]
    CmTraceBound,
    #[serde(rename = "HS_TANGLE_BOUND")]
    HsTangleBound,
    #[serde(rename = "BLOCH_UPPER")]
    BlochUpper,
    #[serde(rename = "MNB_DEF")]
    MnbDef,
    #[serde(rename = "MNB_CM")]
    MnbCm,
    #[serde(rename = "WOOTTERS")]
    Wootters,
    #[serde(rename = "PURE_EXACT")]
    PureExact,
    #[serde(rename = "PURE_BLOCH")]
    PureBloch,
    #[serde(rename = "PURE_CM")]
    PureCm,
}

impl std::fmt::Display for BoundSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundSource::Caf => "CAF",
            BoundSource::CmTraceBound => "CM_TRACE_BOUND",
            BoundSource::HsTangleBound => "HS_TANGLE_BOUND",
            BoundSource::BlochUpper => "BLOCH_UPPER",
            BoundSource::MnbDef => "MNB_DEF",
            BoundSource::MnbCm => "MNB_CM",
            BoundSource::Wootters => "WOOTTERS",
            BoundSource::PureExact => "PURE_EXACT",
            BoundSource::PureBloch => "PURE_BLOCH",
            BoundSource::PureCm => "PURE_CM",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub measure: MeasureId,
    pub kind: EstimateKind,
    /// Value clamped to the measure's range [0, dimensional max].
    pub value: f64,
    /// Unclamped value, kept for diagnostics.
    pub raw: f64,
    pub source: BoundSource,
}

fn min_max_dims(dim_a: usize, dim_b: usize) -> (f64, f64) {
    let m = dim_a.min(dim_b) as f64;
    let n = dim_a.max(dim_b) as f64;
    (m, n)
}

/// Dimensional maximum of the concurrence, √(2(M−1)/M) with M = min dim.
pub fn concurrence_max(dim_a: usize, dim_b: usize) -> f64 {
    let (m, _) = min_max_dims(dim_a, dim_b);
    (2.0 * (m - 1.0) / m).sqrt()
}

/// Dimensional maximum of the tangle, 2(M−1)/M.
pub fn tangle_max(dim_a: usize, dim_b: usize) -> f64 {
    let (m, _) = min_max_dims(dim_a, dim_b);
    2.0 * (m - 1.0) / m
}

fn clamped(measure: MeasureId, kind: EstimateKind, raw: f64, cap: f64, source: BoundSource) -> MeasureEstimate {
    MeasureEstimate { measure, kind, value: raw.clamp(0.0, cap), raw, source }
}

/// C(ψ) = √(2(1 − Tr ρ_X²)) with X the smaller subsystem.
pub fn pure_concurrence(psi: &PureState) -> MeasureEstimate {
    let rho = psi.density();
    let red = if psi.dim_a() <= psi.dim_b() {
        rho.partial_trace_b()
    } else {
        rho.partial_trace_a()
    };
    let purity: f64 = red.iter().map(|z| z.norm_sqr()).sum();
    let raw = (2.0 * (1.0 - purity)).max(0.0).sqrt();
    MeasureEstimate {
        measure: MeasureId::Concurrence,
        kind: EstimateKind::ExactPure,
        value: raw,
        raw,
        source: BoundSource::PureExact,
    }
}

/// τ(ψ) = 2(M² − M − 2‖r‖²)/M² from the Bloch vector of the smaller side.
pub fn pure_tangle_bloch(psi: &PureState) -> Result<MeasureEstimate> {
    let rho = psi.density();
    let (red, m) = if psi.dim_a() <= psi.dim_b() {
        (rho.partial_trace_b(), psi.dim_a() as f64)
    } else {
        (rho.partial_trace_a(), psi.dim_b() as f64)
    };
    let r2 = bloch::local_bloch_vector(&red)?.norm_squared();
    let raw = 2.0 * (m * m - m - 2.0 * r2) / (m * m);
    Ok(MeasureEstimate {
        measure: MeasureId::Tangle,
        kind: EstimateKind::ExactPure,
        value: raw.max(0.0),
        raw,
        source: BoundSource::PureBloch,
    })
}

/// τ(ψ) = (8/(MN(M+N)))(‖T‖²_HS − MN(M−1)(N−1)/4).
pub fn pure_tangle_cm(psi: &PureState) -> Result<MeasureEstimate> {
    let b = bloch::decompose(&psi.density())?;
    let (m, n) = (psi.dim_a() as f64, psi.dim_b() as f64);
    let t2: f64 = b.t.iter().map(|x| x * x).sum();
    let raw = 8.0 / (m * n * (m + n)) * (t2 - m * n * (m - 1.0) * (n - 1.0) / 4.0);
    Ok(MeasureEstimate {
        measure: MeasureId::Tangle,
        kind: EstimateKind::ExactPure,
        value: raw.max(0.0),
        raw,
        source: BoundSource::PureCm,
    })
}

/// C(ρ) ≥ √(2/(M(M−1)))·[max(‖T_A(ρ)‖_tr, ‖R(ρ)‖_tr) − 1], M = min dim.
pub fn concurrence_lower_caf(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    let (m, _) = min_max_dims(rho.dim_a(), rho.dim_b());
    let ppt = matrix::trace_norm(&rho.partial_transpose_a())?;
    let ccnr = matrix::trace_norm(&rho.realign())?;
    let raw = (2.0 / (m * (m - 1.0))).sqrt() * (ppt.max(ccnr) - 1.0);
    Ok(clamped(
        MeasureId::Concurrence,
        EstimateKind::LowerBound,
        raw,
        concurrence_max(rho.dim_a(), rho.dim_b()),
        BoundSource::Caf,
    ))
}

/// C(ρ) ≥ √(8/(M³N²(M−1)))·(‖T‖_tr − √(MN(M−1)(N−1)/4)).
pub fn concurrence_lower_cm(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    let (m, n) = min_max_dims(rho.dim_a(), rho.dim_b());
    let b = bloch::decompose(rho)?;
    let t_tr = b.correlation_trace_norm()?;
    let raw = (8.0 / (m.powi(3) * n.powi(2) * (m - 1.0))).sqrt()
        * (t_tr - cm_threshold(rho.dim_a(), rho.dim_b()));
    Ok(clamped(
        MeasureId::Concurrence,
        EstimateKind::LowerBound,
        raw,
        concurrence_max(rho.dim_a(), rho.dim_b()),
        BoundSource::CmTraceBound,
    ))
}

/// τ(ρ) ≥ (8/(MN(M+N)))(‖T‖²_HS − MN(M−1)(N−1)/4); exact for pure states.
pub fn tangle_lower_hs(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    let (m, n) = (rho.dim_a() as f64, rho.dim_b() as f64);
    let b = bloch::decompose(rho)?;
    let t2: f64 = b.t.iter().map(|x| x * x).sum();
    let raw = 8.0 / (m * n * (m + n)) * (t2 - m * n * (m - 1.0) * (n - 1.0) / 4.0);
    Ok(clamped(
        MeasureId::Tangle,
        EstimateKind::LowerBound,
        raw,
        tangle_max(rho.dim_a(), rho.dim_b()),
        BoundSource::HsTangleBound,
    ))
}

/// τ(ρ) ≤ 2·min{(M²−M−2‖r‖²)/M², (N²−N−2‖s‖²)/N²}.
pub fn tangle_upper(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    let (m, n) = (rho.dim_a() as f64, rho.dim_b() as f64);
    let b = bloch::decompose(rho)?;
    let r2 = b.r.norm_squared();
    let s2 = b.s.norm_squared();
    let via_a = (m * m - m - 2.0 * r2) / (m * m);
    let via_b = (n * n - n - 2.0 * s2) / (n * n);
    let raw = 2.0 * via_a.min(via_b);
    Ok(MeasureEstimate {
        measure: MeasureId::Tangle,
        kind: EstimateKind::UpperBound,
        value: raw.max(0.0),
        raw,
        source: BoundSource::BlochUpper,
    })
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim_a() != 2 || rho.dim_b() != 2 {
        return Err(Error::Domain(format!(
            "operation requires a 2x2 state, got ({},{})",
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    Ok(())
}

/// σy ⊗ σy on the two-qubit computational basis.
fn sigma_yy() -> CMatrix {
    let c = Complex64::new;
    let sy = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
    sy.kronecker(&sy)
}

/// Spin-flipped state ρ̃ = (σy⊗σy) ρ* (σy⊗σy), conjugation in the
/// computational (σz eigenstate) basis.
fn spin_flip(rho: &DensityMatrix) -> CMatrix {
    let yy = sigma_yy();
    let conj = rho.matrix().map(|z| z.conj());
    &yy * conj * &yy
}

/// MNB measure E(ρ) = max{Tr ρ² − 1 + Tr(ρ ρ̃), 0} for two qubits.
pub fn mnb_measure(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    require_two_qubits(rho)?;
    let flipped = spin_flip(rho);
    let cross = (rho.matrix() * flipped).trace().re;
    let raw = rho.purity() - 1.0 + cross;
    Ok(MeasureEstimate {
        measure: MeasureId::Mnb,
        kind: EstimateKind::ExactClosedForm,
        value: raw.max(0.0),
        raw,
        source: BoundSource::MnbDef,
    })
}

/// MNB measure via the correlation matrix: E(ρ) = max{½(‖T‖²_HS − 1), 0}.
pub fn mnb_from_cm(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    require_two_qubits(rho)?;
    let b = bloch::decompose(rho)?;
    let t2: f64 = b.t.iter().map(|x| x * x).sum();
    let raw = 0.5 * (t2 - 1.0);
    Ok(MeasureEstimate {
        measure: MeasureId::Mnb,
        kind: EstimateKind::ExactClosedForm,
        value: raw.max(0.0),
        raw,
        source: BoundSource::MnbCm,
    })
}

/// Exact two-qubit concurrence: C = max{0, μ₁ − μ₂ − μ₃ − μ₄} where μᵢ are
/// the decreasing square roots of the eigenvalues of ρ ρ̃, computed from
/// the Hermitian form √ρ ρ̃ √ρ.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<MeasureEstimate> {
    require_two_qubits(rho)?;
    let sqrt_rho = matrix::sqrt_psd(rho.matrix())?;
    let herm = &sqrt_rho * spin_flip(rho) * &sqrt_rho;
    let mut mu: Vec<f64> = matrix::hermitian_eigenvalues(&herm)
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect();
    mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let raw = mu[0] - mu[1] - mu[2] - mu[3];
    Ok(MeasureEstimate {
        measure: MeasureId::Concurrence,
        kind: EstimateKind::ExactClosedForm,
        value: raw.max(0.0),
        raw,
        source: BoundSource::Wootters,
    })
}
