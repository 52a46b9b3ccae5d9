//! Aligned-column text rendering of the record values, for reading runs
//! without a JSON tool at hand. The tables are derived from the same
//! record the JSON report carries, never recomputed.

use crate::config::Experiment;
use qdouble::diagnostics::DiagnosticRecord;
use serde_json::Value;

struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Table {
        Table { rows: vec![header.iter().map(|s| s.to_string()).collect()] }
    }

    fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }

    fn render(&self) -> String {
        let cols = self.rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut widths = vec![0usize; cols];
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &self.rows {
            let mut line = String::new();
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    line.push_str("  ");
                }
                line.push_str(cell);
                if i + 1 < row.len() {
                    for _ in cell.len()..widths[i] {
                        line.push(' ');
                    }
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

fn fmt_complex(pair: &Value) -> String {
    let re = pair[0].as_f64().unwrap_or(f64::NAN);
    let im = pair[1].as_f64().unwrap_or(f64::NAN);
    if im.abs() < 5e-5 {
        format!("{re:+.4}")
    } else {
        format!("{re:+.4}{im:+.4}i")
    }
}

fn strings(v: Option<&Value>) -> Vec<String> {
    v.and_then(Value::as_array)
        .map(|a| a.iter().map(|x| x.as_str().unwrap_or("?").to_string()).collect())
        .unwrap_or_default()
}

pub fn print_tables(exp: Experiment, rec: &DiagnosticRecord) {
    println!("== {} ==", rec.name);
    match exp {
        Experiment::Smatrix => smatrix_table(rec),
        Experiment::Fusion => fusion_table(rec),
        Experiment::SymmetryAudit => audit_table(rec),
        Experiment::CmiProfile => cmi_table(rec),
        Experiment::Extremal => extremal_table(rec),
        _ => plain_values(rec),
    }
    if !rec.residuals.is_empty() {
        let mut t = Table::new(&["residual", "value", "tolerance"]);
        for (k, v) in &rec.residuals {
            t.row(vec![k.clone(), format!("{v:.3e}"), format!("{:.1e}", rec.tolerance)]);
        }
        print!("{}", t.render());
    }
    println!("verdict: {:?} ({} ms)", rec.verdict, rec.runtime_ms);
    println!();
}

fn plain_values(rec: &DiagnosticRecord) {
    let mut t = Table::new(&["value", ""]);
    for (k, v) in &rec.values {
        let text = match v {
            Value::Array(_) | Value::Object(_) => continue,
            other => other.to_string(),
        };
        t.row(vec![k.clone(), text]);
    }
    print!("{}", t.render());
}

fn smatrix_table(rec: &DiagnosticRecord) {
    let anyons = strings(rec.values.get("anyons"));
    let Some(matrix) = rec.values.get("matrix").and_then(Value::as_array) else { return };
    let mut t = Table::new(&[]);
    let mut header = vec![String::new()];
    header.extend(anyons.iter().cloned());
    t.row(header);
    for (i, row) in matrix.iter().enumerate() {
        let mut cells = vec![anyons.get(i).cloned().unwrap_or_default()];
        if let Some(entries) = row.as_array() {
            cells.extend(entries.iter().map(fmt_complex));
        }
        t.row(cells);
    }
    print!("{}", t.render());
}

fn fusion_table(rec: &DiagnosticRecord) {
    let labels = strings(rec.values.get("labels"));
    let Some(n) = rec.values.get("multiplicities").and_then(Value::as_array) else { return };
    let mut t = Table::new(&[]);
    let mut header = vec!["⊗".to_string()];
    header.extend(labels.iter().cloned());
    t.row(header);
    for (a, row) in n.iter().enumerate() {
        let mut cells = vec![labels.get(a).cloned().unwrap_or_default()];
        for cell in row.as_array().into_iter().flatten() {
            let mut parts = Vec::new();
            for (c, mult) in cell.as_array().into_iter().flatten().enumerate() {
                match mult.as_u64().unwrap_or(0) {
                    0 => {}
                    1 => parts.push(labels[c].clone()),
                    m => parts.push(format!("{m}{}", labels[c])),
                }
            }
            cells.push(parts.join("+"));
        }
        t.row(cells);
    }
    print!("{}", t.render());
}

fn audit_table(rec: &DiagnosticRecord) {
    let Some(entries) = rec.values.get("entries").and_then(Value::as_array) else { return };
    let mut t = Table::new(&["operator", "ribbon", "verdict", "eigenvalue", "residual"]);
    for e in entries {
        let residual = match e["verdict"].as_str() {
            Some("weak") => e["weak_residual"].as_f64(),
            _ => e["strong_residual"].as_f64(),
        }
        .unwrap_or(f64::NAN);
        t.row(vec![
            e["operator"].as_str().unwrap_or("?").into(),
            e["ribbon"].as_str().unwrap_or("?").into(),
            e["verdict"].as_str().unwrap_or("?").into(),
            fmt_complex(&e["eigenvalue"]),
            format!("{residual:.3e}"),
        ]);
    }
    print!("{}", t.render());
}

fn cmi_table(rec: &DiagnosticRecord) {
    let Some(sectors) = rec.values.get("sectors").and_then(Value::as_array) else { return };
    let mut t = Table::new(&["sector", "cmi"]);
    for s in sectors {
        let pair = strings(s.get("sector"));
        t.row(vec![format!("({})", pair.join(", ")), format!("{:.3e}", s["cmi"].as_f64().unwrap_or(f64::NAN))]);
    }
    print!("{}", t.render());
}

fn extremal_table(rec: &DiagnosticRecord) {
    if let Some(points) = rec.values.get("points") {
        println!("extremal points: {points}");
    }
    let Some(marginals) = rec.values.get("marginals").and_then(Value::as_array) else { return };
    let mut t = Table::new(&["region", "edges", "max deviation"]);
    for m in marginals {
        t.row(vec![
            m["region"].as_str().unwrap_or("?").into(),
            m["edges"].to_string(),
            format!("{:.3e}", m["deviation"].as_f64().unwrap_or(f64::NAN)),
        ]);
    }
    print!("{}", t.render());
}
