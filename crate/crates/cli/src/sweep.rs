//! White-noise threshold sweeps: for each criterion, the minimal p at
//! which the margin of ρ(p) = p·ρ + (1−p)·I/(MN) crosses zero.

use entkit::criteria::{self, CriterionId};
use entkit::error::Result;
use entkit::state::DensityMatrix;
use entkit::states;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub criterion: CriterionId,
    /// Minimal detecting p, or None when the criterion never fires in [0,1].
    pub threshold_p: Option<f64>,
    /// Set when the criterion value is not monotone on the pre-scan grid
    /// (bisection assumes a unique crossing).
    pub monotonicity_warning: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub state: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub resolution: usize,
    pub bisect_tol: f64,
    pub entries: Vec<SweepEntry>,
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

fn margin_at(
    base: &DensityMatrix,
    p: f64,
    id: CriterionId,
    detection_tol: f64,
) -> Result<f64> {
    let mix = states::white_noise_mix(base, p)?.mixed;
    let report = match id {
        CriterionId::Ppt => criteria::ppt_report_with_tol(&mix, detection_tol)?,
        CriterionId::Ccnr => criteria::ccnr_report_with_tol(&mix, detection_tol)?,
        CriterionId::CmTrace => criteria::cm_report_with_tol(&mix, detection_tol)?,
        CriterionId::CmHs => criteria::cm_hs_report_with_tol(&mix, detection_tol)?,
    };
    Ok(report.margin)
}

/// Pre-scans a grid of `resolution` intervals to bracket the first margin
/// crossing, then bisects it to `bisect_tol`.
pub fn sweep_criterion(
    base: &DensityMatrix,
    id: CriterionId,
    resolution: usize,
    bisect_tol: f64,
    detection_tol: f64,
) -> Result<SweepEntry> {
    let mut margins = Vec::with_capacity(resolution + 1);
    for i in 0..=resolution {
        let p = i as f64 / resolution as f64;
        margins.push(margin_at(base, p, id, detection_tol)?);
    }
    // the criterion value (hence margin) should grow with p on an entangled base
    let monotonicity_warning = margins.windows(2).any(|w| w[1] < w[0] - 1e-9);

    let crossing = margins.iter().position(|&m| m > detection_tol);
    let threshold_p = match crossing {
        None => None,
        Some(0) => Some(0.0),
        Some(i) => {
            let mut lo = (i - 1) as f64 / resolution as f64;
            let mut hi = i as f64 / resolution as f64;
            while hi - lo > bisect_tol {
                let mid = 0.5 * (lo + hi);
                if margin_at(base, mid, id, detection_tol)? > detection_tol {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            Some(0.5 * (lo + hi))
        }
    };

    Ok(SweepEntry { criterion: id, threshold_p, monotonicity_warning })
}

impl SweepDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sweep serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("criterion,threshold_p,monotonicity_warning\n");
        for e in &self.entries {
            let p = e
                .threshold_p
                .map(|p| format!("{p:.17e}"))
                .unwrap_or_else(|| "never".into());
            out.push_str(&format!("{},{p},{}\n", e.criterion, e.monotonicity_warning));
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "noise sweep on {} ({}x{}), grid 1/{}, bisection tol {:.1e}\n",
            self.state, self.dim_a, self.dim_b, self.resolution, self.bisect_tol
        );
        for e in &self.entries {
            match e.threshold_p {
                Some(p) => out.push_str(&format!("  {:<8} detects for p >= {:.6}\n", e.criterion.to_string(), p)),
                None => out.push_str(&format!("  {:<8} never detects in [0,1]\n", e.criterion.to_string())),
            }
            if e.monotonicity_warning {
                out.push_str("           warning: value not monotone on the grid; crossing may not be unique\n");
            }
        }
        out.push_str(&format!("version: {}\n", self.version));
        if let Some(ts) = &self.timestamp {
            out.push_str(&format!("timestamp: {ts}\n"));
        }
        out
    }
}
