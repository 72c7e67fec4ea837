//! Detection and quantification of entanglement in bipartite quantum
//! states of arbitrary finite dimensions M×N.
//!
//! The crate evaluates the PPT (partial transpose), CCNR (realignment) and
//! correlation-matrix separability criteria, brings states to their filter
//! normal form by iterative local filtering, constructs the GenTiles2
//! bound entangled states, and computes concurrence/tangle values and
//! bounds, including the two-qubit MNB measure.

pub mod bloch;
pub mod criteria;
pub mod error;
pub mod fileio;
pub mod fnf;
pub mod matrix;
pub mod measures;
pub mod state;
pub mod states;

pub use bloch::{decompose, su_generators, BlochDecomposition, GeneratorBasis};
pub use criteria::{full_report, CriterionId, CriterionReport};
pub use error::{Error, Result};
pub use fileio::StateFile;
pub use fnf::{apply_filter, filter_normal_form, FilterResult, FnfOptions};
pub use matrix::{hs_norm, kron, trace_norm, CMatrix, CVector};
pub use measures::{BoundSource, EstimateKind, MeasureEstimate, MeasureId};
pub use state::{DensityMatrix, PureState, Tolerances};
pub use states::{gentiles2_state, gentiles2_upb, max_entangled, white_noise_mix};
