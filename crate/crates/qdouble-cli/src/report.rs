//! Report envelopes and where they go: one JSON file per experiment when
//! an output directory is set, otherwise a single JSON array on stdout.

use crate::config::{Experiment, Resolved, SCHEMA_VERSION};
use anyhow::{Context, Result};
use qdouble::diagnostics::{DiagnosticRecord, Verdict};
use serde::Serialize;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

/// Everything in here is deterministic for a fixed config except
/// `timestamp_unix_ms` and the record's `runtime_ms`.
#[derive(Serialize)]
pub struct Envelope<'a> {
    pub schema_version: u32,
    pub timestamp_unix_ms: u64,
    pub group: &'a str,
    pub lattice: String,
    pub record: &'a DiagnosticRecord,
}

fn envelope<'a>(r: &'a Resolved, record: &'a DiagnosticRecord) -> Envelope<'a> {
    Envelope {
        schema_version: SCHEMA_VERSION,
        timestamp_unix_ms: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0),
        group: r.group.name(),
        lattice: r.lattice_spec.label(),
        record,
    }
}

/// Run every configured experiment. Experiments execute concurrently;
/// results come back in config order so report writing stays serial and
/// deterministic.
pub fn run_all(r: &Resolved) -> Vec<(Experiment, DiagnosticRecord)> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = r
            .experiments
            .iter()
            .map(|&exp| scope.spawn(move || (exp, crate::experiments::run(exp, r))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("experiment thread panicked")).collect()
    })
}

pub fn write_reports(
    r: &Resolved,
    records: &[(Experiment, DiagnosticRecord)],
    out_dir: Option<&Path>,
) -> Result<()> {
    match out_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating report directory {}", dir.display()))?;
            for (exp, record) in records {
                let path = dir.join(format!("{}.json", exp.name()));
                let text = serde_json::to_string_pretty(&envelope(r, record))?;
                std::fs::write(&path, text + "\n")
                    .with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => {
            let all: Vec<Envelope> =
                records.iter().map(|(_, record)| envelope(r, record)).collect();
            println!("{}", serde_json::to_string_pretty(&all)?);
        }
    }
    Ok(())
}

/// 0 when everything passed, 1 when any invariant failed or errored,
/// 2 when the only problems were capacity refusals.
pub fn exit_code(records: &[(Experiment, DiagnosticRecord)]) -> i32 {
    let mut capacity = false;
    for (_, record) in records {
        match record.verdict {
            Verdict::Pass => {}
            Verdict::Capacity => capacity = true,
            Verdict::Fail | Verdict::Error => return 1,
        }
    }
    if capacity {
        2
    } else {
        0
    }
}
