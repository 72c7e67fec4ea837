//! Machine-readable analysis documents and their text/JSON/CSV renderings.

use entkit::criteria::{CriterionId, CriterionReport};
use entkit::measures::MeasureEstimate;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionEntry {
    pub criterion: CriterionId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<CriterionReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FnfSummary {
    pub converged: bool,
    pub iterations: usize,
    pub residual: f64,
    pub criteria: Vec<CriterionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDocument {
    /// State name or input file path.
    pub state: String,
    pub dim_a: usize,
    pub dim_b: usize,
    pub criteria: Vec<CriterionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measures: Vec<MeasureEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fnf: Option<FnfSummary>,
    pub version: String,
    /// RFC 3339 UTC timestamp; suppressed under --deterministic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

/// 17 significant digits: enough for exact f64 round-trip in every format.
fn num(v: f64) -> String {
    format!("{v:.17e}")
}

impl AnalysisDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,id,field,value\n");
        let crit_rows = |section: &str, entries: &[CriterionEntry], out: &mut String| {
            for e in entries {
                match (&e.report, &e.error) {
                    (Some(r), _) => {
                        out.push_str(&format!("{section},{},value,{}\n", e.criterion, num(r.value)));
                        out.push_str(&format!(
                            "{section},{},threshold,{}\n",
                            e.criterion,
                            num(r.threshold)
                        ));
                        out.push_str(&format!("{section},{},margin,{}\n", e.criterion, num(r.margin)));
                        out.push_str(&format!(
                            "{section},{},entangled,{}\n",
                            e.criterion, r.entangled
                        ));
                    }
                    (None, Some(err)) => {
                        out.push_str(&format!("{section},{},error,\"{}\"\n", e.criterion, err));
                    }
                    (None, None) => {}
                }
            }
        };
        out.push_str(&format!("meta,state,name,\"{}\"\n", self.state));
        out.push_str(&format!("meta,dims,dim_a,{}\n", self.dim_a));
        out.push_str(&format!("meta,dims,dim_b,{}\n", self.dim_b));
        crit_rows("criterion", &self.criteria, &mut out);
        for m in &self.measures {
            out.push_str(&format!("measure,{},value,{}\n", m.source, num(m.value)));
            out.push_str(&format!("measure,{},raw,{}\n", m.source, num(m.raw)));
        }
        if let Some(f) = &self.fnf {
            out.push_str(&format!("fnf,state,converged,{}\n", f.converged));
            out.push_str(&format!("fnf,state,iterations,{}\n", f.iterations));
            out.push_str(&format!("fnf,state,residual,{}\n", num(f.residual)));
            crit_rows("fnf_criterion", &f.criteria, &mut out);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("state: {} ({}x{})\n", self.state, self.dim_a, self.dim_b));
        let crit_block = |entries: &[CriterionEntry], out: &mut String| {
            for e in entries {
                match (&e.report, &e.error) {
                    (Some(r), _) => out.push_str(&format!(
                        "  {:<8} value {:>18.12}  threshold {:>18.12}  margin {:>+12.6e}  {}\n",
                        e.criterion.to_string(),
                        r.value,
                        r.threshold,
                        r.margin,
                        if r.entangled { "ENTANGLED" } else { "undetected" }
                    )),
                    (None, Some(err)) => {
                        out.push_str(&format!("  {:<8} FAILED: {}\n", e.criterion.to_string(), err))
                    }
                    (None, None) => {}
                }
            }
        };
        out.push_str("criteria:\n");
        crit_block(&self.criteria, &mut out);
        if !self.measures.is_empty() {
            out.push_str("measures:\n");
            for m in &self.measures {
                out.push_str(&format!(
                    "  {:<16} {:?} {:?} value {:.12} (raw {:.12})\n",
                    m.source.to_string(),
                    m.measure,
                    m.kind,
                    m.value,
                    m.raw
                ));
            }
        }
        if let Some(f) = &self.fnf {
            out.push_str(&format!(
                "filter normal form: converged={} iterations={} residual={:.6e}\n",
                f.converged, f.iterations, f.residual
            ));
            crit_block(&f.criteria, &mut out);
        }
        out.push_str(&format!("version: {}\n", self.version));
        if let Some(ts) = &self.timestamp {
            out.push_str(&format!("timestamp: {ts}\n"));
        }
        out
    }
}
