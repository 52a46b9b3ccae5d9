//! Mixed-state diagnostics: symmetry audits, anomaly phases, fidelity order
//! parameters, modular data, ground-space counting, and the extremal-point
//! analysis of decohered states.
//!
//! Everything here reduces to exact linear algebra on one of the three
//! density-state representations. Residuals are trace norms, never Frobenius
//! surrogates, evaluated through Gram reductions so that ensemble and
//! classical states never materialize full matrices.

mod anomaly;
mod extremal;
mod gsd;
mod norms;
mod record;
mod smatrix;
mod swssb;
mod symmetry;

pub use anomaly::{anomaly_phase, AnomalyReport};
pub use extremal::{
    canonical_regions, extremal_analysis, extremal_state, sector_marginals,
    streamed_annular_cmi, streamed_flat_mixture_cmi, AnnularChecks, ConvexSample,
    ExtremalReport, MarginalCheck, RegionHistogram, MATERIALIZE_CAP,
};
pub use gsd::{
    brute_force_gsd, brute_force_gsd_with_limit, enumeration_limit, GsdCount, DEFAULT_MAX_CONFIGS,
};
pub use norms::{trace_norm_outer, trace_norm_signed};
pub use record::{DiagnosticRecord, Verdict};
pub use smatrix::{s_matrix, ModularData, SMATRIX_TOL};
pub use swssb::{swssb_fidelity, SwssbReport};
pub use symmetry::{
    audit_symmetries, check_strong, check_weak, AuditEntry, AuditFamily, RibbonOp, StrongReport,
    SymmetryVerdict, WeakReport, SYMMETRY_TOL,
};

/// Whether heavy kernels fan out across threads. The parallel arm exists
/// only with the `parallel` feature; without it both arms run sequentially
/// so call sites never need to care.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Execution {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}
