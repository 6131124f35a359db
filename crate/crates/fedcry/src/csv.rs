//! CSV artifacts with deterministic formatting.
//!
//! All floating-point fields print with 9 significant digits so reruns
//! produce byte-identical files.

use std::fmt::Write as _;
use std::path::Path;

use crate::dataset::LabeledExample;
use crate::error::{Error, Result};
use crate::federation::RoundRecord;
use crate::metrics::MetricsReport;

/// Fixed-precision float formatting: 9 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.8e}")
}

/// Write a feature table: header `f0..f{D-1},label`, one row per example.
pub fn write_features_csv(path: &Path, examples: &[LabeledExample]) -> Result<()> {
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = examples[0].features.len();
    let mut text = String::new();
    for i in 0..dim {
        let _ = write!(text, "f{i},");
    }
    text.push_str("label\n");
    for ex in examples {
        if ex.features.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: ex.features.len() });
        }
        for v in &ex.features {
            let _ = write!(text, "{},", fmt_f64(*v));
        }
        let _ = writeln!(text, "{}", ex.label);
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Read a feature table written by [`write_features_csv`].
pub fn read_features_csv(path: &Path) -> Result<Vec<LabeledExample>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { row: 0, msg: "empty file".into() })?;
    let columns: Vec<&str> = header.split(',').collect();
    if columns.len() < 2 || columns.last() != Some(&"label") {
        return Err(Error::Parse { row: 0, msg: "header must end with `label`".into() });
    }
    let dim = columns.len() - 1;
    let mut examples = Vec::new();
    for (row, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(Error::Parse {
                row,
                msg: format!("expected {} fields, found {}", dim + 1, fields.len()),
            });
        }
        let mut features = Vec::with_capacity(dim);
        for f in &fields[..dim] {
            let v: f64 = f
                .parse()
                .map_err(|e| Error::Parse { row, msg: format!("bad float {f:?}: {e}") })?;
            if !v.is_finite() {
                return Err(Error::Parse { row, msg: format!("non-finite feature {f:?}") });
            }
            features.push(v);
        }
        let label: i8 = fields[dim]
            .parse()
            .map_err(|e| Error::Parse { row, msg: format!("bad label {:?}: {e}", fields[dim]) })?;
        if !matches!(label, -1 | 1) {
            return Err(Error::Parse { row, msg: format!("label {label} not in {{-1, 1}}") });
        }
        examples.push(LabeledExample { features, label, source_id: format!("row{row}") });
    }
    if examples.is_empty() {
        return Err(Error::Parse { row: 1, msg: "no data rows".into() });
    }
    Ok(examples)
}

/// Write the per-round federation history:
/// `round,selected_ids,train_loss,avg_train_accuracy` with the ids
/// joined by `;`.
pub fn write_history_csv(path: &Path, records: &[RoundRecord]) -> Result<()> {
    let mut text = String::from("round,selected_ids,train_loss,avg_train_accuracy\n");
    for r in records {
        let ids = r
            .selected_ids
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            text,
            "{},{},{},{}",
            r.round,
            ids,
            fmt_f64(r.train_loss),
            fmt_f64(r.avg_train_accuracy)
        );
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Write a per-epoch loss trace: `epoch,loss`.
pub fn write_loss_csv(path: &Path, trace: &[f64]) -> Result<()> {
    let mut text = String::from("epoch,loss\n");
    for (epoch, loss) in trace.iter().enumerate() {
        let _ = writeln!(text, "{},{}", epoch, fmt_f64(*loss));
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// Write a one-line metrics CSV.
pub fn write_metrics_csv(path: &Path, report: &MetricsReport) -> Result<()> {
    let text = format!(
        "sensitivity,specificity,uar,accuracy\n{},{},{},{}\n",
        fmt_f64(report.sensitivity),
        fmt_f64(report.specificity),
        fmt_f64(report.uar),
        fmt_f64(report.accuracy)
    );
    std::fs::write(path, text)?;
    Ok(())
}
