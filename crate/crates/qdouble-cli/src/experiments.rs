//! One function per experiment. Each returns a `DiagnosticRecord`; errors
//! are folded into the record so a single bad experiment cannot take down
//! the rest of the run.

use crate::config::{pick_class, pick_irrep, ribbon_by_name, ChannelKind, Experiment, Resolved};
use anyhow::Result;
use num_complex::Complex64;
use qdouble::channels::{apply_x_channel, apply_z_channel};
use qdouble::diagnostics::{
    audit_symmetries, brute_force_gsd, extremal_analysis, s_matrix, streamed_annular_cmi,
    streamed_flat_mixture_cmi, swssb_fidelity, AuditFamily, DiagnosticRecord, Execution,
    SymmetryVerdict, Verdict, SMATRIX_TOL, SYMMETRY_TOL,
};
use qdouble::group::{count_torus_gsd, fusion_table};
use qdouble::operators::ground_state;
use qdouble::states::DensityState;
use qdouble::QdError;
use serde_json::{json, Value};
use std::time::Instant;

const FUSION_TOL: f64 = 1e-9;
const TRACE_DRIFT_TOL: f64 = 1e-10;
const EM_ROW_TOL: f64 = 1e-10;
const ANOMALY_TOL: f64 = 1e-9;
const CHARACTER_ZERO_TOL: f64 = 1e-10;
const SWSSB_RANGE_TOL: f64 = 1e-9;
const CMI_TOL: f64 = 1e-10;
const CONVEXITY_TOL: f64 = 1e-9;
const OVERLAP_TOL: f64 = 1e-10;
/// Largest ground-state support on which the undecohered fidelity contrast
/// is still worth a dense eigendecomposition.
const PURE_CONTRAST_CAP: usize = 512;

pub fn run(exp: Experiment, r: &Resolved) -> DiagnosticRecord {
    let started = Instant::now();
    let mut rec = body(exp, r).unwrap_or_else(|err| failure_record(exp, r, &err));
    rec.runtime_ms = started.elapsed().as_millis() as u64;
    rec
}

fn body(exp: Experiment, r: &Resolved) -> Result<DiagnosticRecord> {
    match exp {
        Experiment::Gsd => gsd(r),
        Experiment::Smatrix => smatrix(r),
        Experiment::Fusion => fusion(r),
        Experiment::Decohere => decohere(r),
        Experiment::SymmetryAudit => symmetry_audit(r),
        Experiment::Anomaly => anomaly(r),
        Experiment::Swssb => swssb(r),
        Experiment::CmiProfile => cmi_profile(r),
        Experiment::Extremal => extremal(r),
    }
}

fn failure_record(exp: Experiment, r: &Resolved, err: &anyhow::Error) -> DiagnosticRecord {
    let mut rec = base(exp, r, 0.0);
    rec.verdict = match err.downcast_ref::<QdError>() {
        Some(QdError::Capacity { .. }) | Some(QdError::Budget { .. }) => Verdict::Capacity,
        Some(QdError::NotUnitary { .. }) => Verdict::Fail,
        _ => Verdict::Error,
    };
    rec.value("error", format!("{err:#}"));
    match err.downcast_ref::<QdError>() {
        Some(QdError::Budget { needed, limit }) => {
            rec.value("needed_configurations", needed.to_string());
            rec.value("budget_limit", *limit);
        }
        Some(QdError::Capacity { dim, cap, advice }) => {
            rec.value("needed_dimension", *dim);
            rec.value("dimension_cap", *cap);
            rec.value("advice", advice.clone());
        }
        Some(QdError::NotUnitary { deviation }) => {
            rec.gated_residual("unitarity", *deviation, SMATRIX_TOL);
        }
        _ => {}
    }
    rec
}

fn base(exp: Experiment, r: &Resolved, tolerance: f64) -> DiagnosticRecord {
    let rec = DiagnosticRecord::new(exp.name(), tolerance)
        .input("group", r.group.name())
        .input("lattice", r.lattice_spec.label());
    rec
}

fn channel_inputs(rec: DiagnosticRecord, r: &Resolved) -> DiagnosticRecord {
    let kind = match r.channel.kind {
        ChannelKind::Z => "z",
        ChannelKind::X => "x",
    };
    rec.input("channel", kind).input("edges", r.channel.edges.describe())
}

fn c64(v: Complex64) -> Value {
    json!([v.re, v.im])
}

/// Ground state of the trivial holonomy sector, decohered by the
/// configured channel.
fn decohered_ground(r: &Resolved) -> Result<DensityState> {
    let psi = ground_state(&r.group, &r.lat, 0, 0)?;
    let rho = DensityState::from_pure(&psi)?;
    let edges = r.channel.edges.resolve(&r.lat)?;
    Ok(match r.channel.kind {
        ChannelKind::Z => apply_z_channel(&r.group, &rho, &edges)?,
        ChannelKind::X => apply_x_channel(&r.group, &rho, &edges)?,
    })
}

fn gsd(r: &Resolved) -> Result<DiagnosticRecord> {
    let mut rec = base(Experiment::Gsd, r, 0.0);
    let formula = count_torus_gsd(&r.group);
    rec.value("formula", formula);
    let brute = brute_force_gsd(&r.group, &r.lat)?;
    rec.value("brute_orbits", brute.orbits);
    rec.value("flat_configurations", brute.flat_configs);
    rec.value("commuting_pairs", brute.commuting_pairs);
    rec.gated_residual("formula_vs_enumeration", formula.abs_diff(brute.orbits) as f64, 0.0);
    Ok(rec)
}

fn smatrix(r: &Resolved) -> Result<DiagnosticRecord> {
    let mut rec = base(Experiment::Smatrix, r, SMATRIX_TOL);
    let md = s_matrix(&r.group)?;
    rec.value("dim", md.dim());
    let labels: Vec<Value> = md.anyons.iter().map(|a| Value::from(a.label.clone())).collect();
    rec.value("anyons", labels);
    let dims: Vec<Value> = md.anyons.iter().map(|a| Value::from(a.quantum_dim)).collect();
    rec.value("quantum_dims", dims);
    let rows: Vec<Value> = (0..md.dim())
        .map(|i| Value::Array((0..md.dim()).map(|j| c64(md.entry(i, j))).collect()))
        .collect();
    rec.value("matrix", rows);
    rec.gated_residual("unitarity", md.unitarity_defect, SMATRIX_TOL);
    rec.gated_residual("symmetry", md.symmetry_defect, EM_ROW_TOL);
    rec.gated_residual("electric_magnetic_row", md.em_defect, EM_ROW_TOL);
    Ok(rec)
}

fn fusion(r: &Resolved) -> Result<DiagnosticRecord> {
    let mut rec = base(Experiment::Fusion, r, FUSION_TOL);
    let irreps = r.group.irreps()?;
    let table = fusion_table(&r.group, &irreps)?;
    rec.value("labels", table.labels.clone());
    let n: Vec<Value> = table
        .n
        .iter()
        .map(|row| {
            Value::Array(row.iter().map(|cell| json!(cell.iter().copied().collect::<Vec<usize>>())).collect())
        })
        .collect();
    rec.value("multiplicities", n);
    rec.gated_residual("integer_rounding", table.max_residual, FUSION_TOL);
    Ok(rec)
}

fn decohere(r: &Resolved) -> Result<DiagnosticRecord> {
    let mut rec = channel_inputs(base(Experiment::Decohere, r, TRACE_DRIFT_TOL), r);
    let psi = ground_state(&r.group, &r.lat, 0, 0)?;
    let rho0 = DensityState::from_pure(&psi)?;
    rec.value("purity_before", rho0.purity());
    rec.value("support_before", rho0.support_size());
    let rho = decohered_ground(r)?;
    rec.value("purity_after", rho.purity());
    rec.value("support_after", rho.support_size());
    rec.value("entropy_after", rho.entropy()?);
    rec.gated_residual("trace_drift", (rho.trace() - 1.0).abs(), TRACE_DRIFT_TOL);
    Ok(rec)
}

fn symmetry_audit(r: &Resolved) -> Result<DiagnosticRecord> {
    let tol = r.tolerances.symmetry.unwrap_or(SYMMETRY_TOL);
    let mut rec = channel_inputs(base(Experiment::SymmetryAudit, r, tol), r);
    let rho = decohered_ground(r)?;
    let family = AuditFamily::standard(&r.lat);
    let entries = audit_symmetries(&r.group, &r.lat, &rho, &family, Execution::default())?;
    let mut rows = Vec::new();
    let mut counts = [0usize; 3];
    let mut conforming = 0.0f64;
    for e in &entries {
        let verdict = match e.verdict {
            SymmetryVerdict::Strong => "strong",
            SymmetryVerdict::Weak => "weak",
            SymmetryVerdict::Broken => "broken",
        };
        counts[match e.verdict {
            SymmetryVerdict::Strong => 0,
            SymmetryVerdict::Weak => 1,
            SymmetryVerdict::Broken => 2,
        }] += 1;
        match e.verdict {
            SymmetryVerdict::Strong => conforming = conforming.max(e.strong.residual),
            SymmetryVerdict::Weak => {
                if let Some(w) = &e.weak {
                    conforming = conforming.max(w.residual);
                }
            }
            SymmetryVerdict::Broken => {}
        }
        rows.push(json!({
            "operator": e.operator,
            "ribbon": e.ribbon,
            "verdict": verdict,
            "eigenvalue": [e.strong.eigenvalue.re, e.strong.eigenvalue.im],
            "strong_residual": e.strong.residual,
            "weak_normalized": e.weak.as_ref().map(|w| w.normalized),
            "weak_residual": e.weak.as_ref().map(|w| w.residual),
        }));
    }
    rec.value("entries", rows);
    rec.value(
        "counts",
        json!({"strong": counts[0], "weak": counts[1], "broken": counts[2]}),
    );
    rec.gated_residual("max_conforming_residual", conforming, tol);
    Ok(rec)
}

fn anomaly(r: &Resolved) -> Result<DiagnosticRecord> {
    let tol = r.tolerances.anomaly.unwrap_or(ANOMALY_TOL);
    let ir = pick_irrep(&r.group, r.anomaly.irrep.as_deref())?;
    let class = pick_class(&r.group, r.anomaly.class.as_deref())?;
    let xi_name = r.anomaly.xi.as_deref().unwrap_or("rect(1,1,1x1)");
    let eta_name = r.anomaly.eta.as_deref().unwrap_or("open((0,0)-(1,1))");
    let mut rec = channel_inputs(base(Experiment::Anomaly, r, tol), r)
        .input("irrep", ir.label.clone())
        .input("class", format!("[{}]", r.group.label(class.representative)))
        .input("xi", xi_name)
        .input("eta", eta_name);
    let xi = ribbon_by_name(&r.lat, xi_name)?;
    let eta = ribbon_by_name(&r.lat, eta_name)?;
    let rho = decohered_ground(r)?;
    let report = qdouble::diagnostics::anomaly_phase(&r.group, &r.lat, &rho, &ir, &class, &xi, &eta)?;
    rec.value("electric_before", c64(report.electric_before));
    rec.value("electric_after", c64(report.electric_after));
    rec.value("dressed_trace", report.dressed_trace);
    rec.value("expected_character", c64(report.expected));
    rec.value("character_zero", report.character_zero);
    match report.phase {
        Some(phase) => {
            rec.value("phase", c64(phase));
            rec.gated_residual("phase_vs_character", (phase - report.expected).norm(), tol);
        }
        None => {
            rec.value("phase", Value::Null);
            rec.gated_residual(
                "electric_after_magnitude",
                report.electric_after.norm(),
                CHARACTER_ZERO_TOL,
            );
        }
    }
    Ok(rec)
}

fn swssb(r: &Resolved) -> Result<DiagnosticRecord> {
    let class = pick_class(&r.group, r.swssb.class.as_deref())?;
    let eta_name = r.swssb.eta.as_deref().unwrap_or("open((0,0)-(1,1))");
    let mut rec = channel_inputs(base(Experiment::Swssb, r, SWSSB_RANGE_TOL), r)
        .input("class", format!("[{}]", r.group.label(class.representative)))
        .input("eta", eta_name);
    let eta = ribbon_by_name(&r.lat, eta_name)?;
    let rho = decohered_ground(r)?;
    let decohered = swssb_fidelity(&r.group, &r.lat, &rho, &class, &eta)?;
    rec.value("fidelity", decohered.fidelity);
    rec.value("dressed_trace", decohered.dressed_trace);
    let psi = ground_state(&r.group, &r.lat, 0, 0)?;
    if psi.num_terms() <= PURE_CONTRAST_CAP {
        let pure = swssb_fidelity(&r.group, &r.lat, &DensityState::from_pure(&psi)?, &class, &eta)?;
        rec.value("pure_fidelity", pure.fidelity);
        rec.value("contrast", decohered.fidelity - pure.fidelity);
    } else {
        rec.value("pure_fidelity", Value::Null);
        rec.value(
            "contrast_note",
            format!("pure contrast skipped: support {} > {PURE_CONTRAST_CAP}", psi.num_terms()),
        );
    }
    let range_excess = (decohered.fidelity - 1.0).max(-decohered.fidelity).max(0.0);
    rec.gated_residual("fidelity_range", range_excess, SWSSB_RANGE_TOL);
    Ok(rec)
}

fn cmi_profile(r: &Resolved) -> Result<DiagnosticRecord> {
    let tol = r.tolerances.cmi.unwrap_or(CMI_TOL);
    let mut rec = base(Experiment::CmiProfile, r, tol);
    rec.value("buffer_rows", 2);
    rec.value("vacuous", r.lat.ly() == 3);
    // Fixed-holonomy sectors may hold genuine A:C correlation through the
    // torus winding, so their CMIs are reported but not gated; the Markov
    // property belongs to the pooled flat mixture.
    let mut rows = Vec::new();
    let mut most_negative: f64 = 0.0;
    for (a, b) in r.group.pair_orbit_representatives() {
        let cmi = streamed_annular_cmi(&r.group, &r.lat, a, b, Execution::default())?;
        most_negative = most_negative.min(cmi);
        rows.push(json!({
            "sector": [r.group.label(a), r.group.label(b)],
            "cmi": cmi,
        }));
    }
    rec.value("sectors", rows);
    let mixture = streamed_flat_mixture_cmi(&r.group, &r.lat, Execution::default())?;
    rec.value("mixture_cmi", mixture);
    rec.gated_residual("mixture_cmi", mixture.abs(), tol);
    rec.gated_residual("sector_cmi_negativity", -most_negative, SWSSB_RANGE_TOL);
    Ok(rec)
}

fn extremal(r: &Resolved) -> Result<DiagnosticRecord> {
    let tol = r.tolerances.overlap.unwrap_or(OVERLAP_TOL);
    let mut rec = base(Experiment::Extremal, r, tol);
    let report = extremal_analysis(&r.group, &r.lat)?;
    rec.value("points", report.sector_reps.len());
    let sectors: Vec<Value> = report
        .sector_reps
        .iter()
        .map(|&(a, b)| json!([r.group.label(a), r.group.label(b)]))
        .collect();
    rec.value("sectors", sectors);
    rec.gated_residual("overlap_vs_identity", report.overlap_defect, tol);
    let marginals: Vec<Value> = report
        .marginals
        .iter()
        .map(|m| json!({"region": m.region, "edges": m.edges, "deviation": m.deviation}))
        .collect();
    rec.value("marginals", marginals);
    let worst_marginal = report.marginals.iter().map(|m| m.deviation).fold(0.0, f64::max);
    rec.gated_residual("marginal_agreement", worst_marginal, tol);
    match &report.annular {
        Some(annular) => {
            rec.value("annular_vacuous", annular.vacuous);
            rec.value("mixture_cmi", annular.mixture_cmi);
            rec.value("sector_cmi", annular.sector_cmi.clone());
            rec.gated_residual("mixture_cmi", annular.mixture_cmi.abs(), CMI_TOL);
            let excess = annular
                .convexity
                .iter()
                .map(|s| s.mixed - s.bound)
                .fold(0.0, f64::max);
            rec.gated_residual("convexity_excess", excess, CONVEXITY_TOL);
        }
        None => {
            rec.value("annular_vacuous", Value::Null);
        }
    }
    Ok(rec)
}
