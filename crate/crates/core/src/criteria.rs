//! Separability criteria as (value, threshold, verdict) triples: PPT,
//! CCNR (realignment), and the correlation-matrix criterion in its trace
//! and Hilbert-Schmidt norm forms.

use serde::{Deserialize, Serialize};

use crate::bloch;
use crate::error::{Error, Result};
use crate::matrix;
use crate::state::DensityMatrix;

/// Margin above which a criterion declares entanglement. The criteria are
/// sufficient-only; a strict-inequality reading avoids float-noise false
/// positives on borderline states.
pub const DETECTION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionId {
    #[serde(rename = "PPT")]
    Ppt,
    #[serde(rename = "CCNR")]
    Ccnr,
    #[serde(rename = "CM_TRACE")]
    CmTrace,
    #[serde(rename = "CM_HS")]
    CmHs,
}

impl std::fmt::Display for CriterionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CriterionId::Ppt => "PPT",
            CriterionId::Ccnr => "CCNR",
            CriterionId::CmTrace => "CM_TRACE",
            CriterionId::CmHs => "CM_HS",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: CriterionId,
    pub value: f64,
    pub threshold: f64,
    pub margin: f64,
    pub entangled: bool,
}

impl CriterionReport {
    fn new(criterion: CriterionId, value: f64, threshold: f64, detection_tol: f64) -> Self {
        let margin = value - threshold;
        CriterionReport {
            criterion,
            value,
            threshold,
            margin,
            entangled: margin > detection_tol,
        }
    }
}

/// Separability bound of the CM criterion: √(MN(M−1)(N−1)/4).
pub fn cm_threshold(m: usize, n: usize) -> f64 {
    let (m, n) = (m as f64, n as f64);
    (m * n * (m - 1.0) * (n - 1.0) / 4.0).sqrt()
}

pub fn ppt_report_with_tol(rho: &DensityMatrix, detection_tol: f64) -> Result<CriterionReport> {
    let value = matrix::trace_norm(&rho.partial_transpose_a())?;
    Ok(CriterionReport::new(CriterionId::Ppt, value, 1.0, detection_tol))
}

pub fn ccnr_report_with_tol(rho: &DensityMatrix, detection_tol: f64) -> Result<CriterionReport> {
    let value = matrix::trace_norm(&rho.realign())?;
    Ok(CriterionReport::new(CriterionId::Ccnr, value, 1.0, detection_tol))
}

pub fn cm_report_with_tol(rho: &DensityMatrix, detection_tol: f64) -> Result<CriterionReport> {
    let b = bloch::decompose(rho)?;
    let value = b.correlation_trace_norm()?;
    let threshold = cm_threshold(rho.dim_a(), rho.dim_b());
    Ok(CriterionReport::new(CriterionId::CmTrace, value, threshold, detection_tol))
}

pub fn cm_hs_report_with_tol(rho: &DensityMatrix, detection_tol: f64) -> Result<CriterionReport> {
    let b = bloch::decompose(rho)?;
    let value = b.correlation_hs_norm();
    let threshold = cm_threshold(rho.dim_a(), rho.dim_b());
    Ok(CriterionReport::new(CriterionId::CmHs, value, threshold, detection_tol))
}

pub fn ppt_report(rho: &DensityMatrix) -> Result<CriterionReport> {
    ppt_report_with_tol(rho, DETECTION_TOLERANCE)
}

pub fn ccnr_report(rho: &DensityMatrix) -> Result<CriterionReport> {
    ccnr_report_with_tol(rho, DETECTION_TOLERANCE)
}

pub fn cm_report(rho: &DensityMatrix) -> Result<CriterionReport> {
    cm_report_with_tol(rho, DETECTION_TOLERANCE)
}

pub fn cm_hs_report(rho: &DensityMatrix) -> Result<CriterionReport> {
    cm_hs_report_with_tol(rho, DETECTION_TOLERANCE)
}

/// All four criteria in the fixed order PPT, CCNR, CM_TRACE, CM_HS.
/// Per-criterion failures are labeled and do not abort the rest.
pub fn full_report_with_tol(
    rho: &DensityMatrix,
    detection_tol: f64,
) -> Vec<(CriterionId, Result<CriterionReport>)> {
    vec![
        (CriterionId::Ppt, ppt_report_with_tol(rho, detection_tol)),
        (CriterionId::Ccnr, ccnr_report_with_tol(rho, detection_tol)),
        (CriterionId::CmTrace, cm_report_with_tol(rho, detection_tol)),
        (CriterionId::CmHs, cm_hs_report_with_tol(rho, detection_tol)),
    ]
}

pub fn full_report(rho: &DensityMatrix) -> Vec<(CriterionId, Result<CriterionReport>)> {
    full_report_with_tol(rho, DETECTION_TOLERANCE)
}

/// Convenience: full report with every criterion required to succeed.
pub fn full_report_strict(rho: &DensityMatrix) -> Result<Vec<CriterionReport>> {
    full_report(rho)
        .into_iter()
        .map(|(id, r)| r.map_err(|e| Error::Numerical(format!("{id}: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::CVector;
    use crate::state::PureState;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use rand::SeedableRng;

    fn bell() -> DensityMatrix {
        let s = 1.0 / 2.0f64.sqrt();
        let c = Complex64::new;
        PureState::new(
            2,
            2,
            CVector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]),
        )
        .unwrap()
        .density()
    }

    #[test]
    fn bell_detected_by_all() {
        let rho = bell();
        let ppt = ppt_report(&rho).unwrap();
        assert_abs_diff_eq!(ppt.value, 2.0, epsilon = 1e-10);
        assert!(ppt.entangled);

        let cm = cm_report(&rho).unwrap();
        assert_abs_diff_eq!(cm.value, 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(cm.threshold, 1.0, epsilon = 1e-14);
        assert!(cm.entangled);

        let hs = cm_hs_report(&rho).unwrap();
        assert_abs_diff_eq!(hs.value, 3.0f64.sqrt(), epsilon = 1e-10);
        assert!(hs.entangled);
    }

    #[test]
    fn maximally_mixed_undetected() {
        let rho = DensityMatrix::maximally_mixed(3, 4);
        let ccnr = ccnr_report(&rho).unwrap();
        assert_abs_diff_eq!(ccnr.value, 1.0 / 12.0f64.sqrt(), epsilon = 1e-10);
        for (_, rep) in full_report(&rho) {
            assert!(!rep.unwrap().entangled);
        }
    }

    #[test]
    fn separable_mixture_not_flagged() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let rho = crate::states::random_separable_with_rng(3, 3, 10, &mut rng).unwrap();
            for (id, rep) in full_report(&rho) {
                let rep = rep.unwrap();
                assert!(!rep.entangled, "{id} false positive: margin {}", rep.margin);
            }
        }
    }

    #[test]
    fn pure_product_cm_hs_margin_is_zero() {
        let mut amps = CVector::zeros(12);
        amps[0] = Complex64::new(1.0, 0.0);
        let rho = PureState::new(3, 4, amps).unwrap().density();
        let hs = cm_hs_report(&rho).unwrap();
        assert_abs_diff_eq!(hs.value, hs.threshold, epsilon = 1e-10);
        assert!(!hs.entangled);
    }

    #[test]
    fn cm_hs_never_exceeds_cm_trace() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let rho = crate::states::random_mixed_with_rng(3, 3, 4, &mut rng).unwrap();
            let cm = cm_report(&rho).unwrap();
            let hs = cm_hs_report(&rho).unwrap();
            assert!(hs.value <= cm.value + 1e-12);
        }
    }

    #[test]
    fn report_order_is_fixed() {
        let rho = DensityMatrix::maximally_mixed(2, 2);
        let ids: Vec<CriterionId> = full_report(&rho).into_iter().map(|(id, _)| id).collect();
        assert_eq!(
            ids,
            vec![CriterionId::Ppt, CriterionId::Ccnr, CriterionId::CmTrace, CriterionId::CmHs]
        );
    }
}
