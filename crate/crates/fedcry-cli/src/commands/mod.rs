//! Subcommand implementations.

pub mod diagnose;
pub mod eval;
pub mod features;
pub mod synth;
pub mod train;

use std::path::{Path, PathBuf};

use fedcry::csv as fcsv;
use fedcry::dataset::LabeledExample;
use fedcry::features::MfccConfig;
use fedcry::forest::{self, FeatureSelector};
use fedcry::metrics::{self, MetricsReport};
use fedcry::svm::{self, SvmModel};

use crate::{AppError, Context, MfccArgs};

pub fn ensure_out_dir(ctx: &Context) -> Result<(), AppError> {
    std::fs::create_dir_all(&ctx.out)
        .map_err(|e| AppError::Data(format!("cannot create {}: {e}", ctx.out.display())))
}

pub fn out_path(ctx: &Context, name: &str) -> PathBuf {
    ctx.out.join(name)
}

pub fn resolve_mfcc(ctx: &Context, args: &MfccArgs) -> Result<MfccConfig, AppError> {
    let d = MfccConfig::default();
    Ok(MfccConfig {
        frame_ms: ctx.config.resolve(args.frame_ms, "frame-ms", d.frame_ms)?,
        hop_ms: ctx.config.resolve(args.hop_ms, "hop-ms", d.hop_ms)?,
        n_mels: ctx.config.resolve(args.n_mels, "n-mels", d.n_mels)?,
        n_coeffs: ctx.config.resolve(args.n_coeffs, "n-coeffs", d.n_coeffs)?,
        fmin_hz: ctx.config.resolve(args.fmin_hz, "fmin-hz", d.fmin_hz)?,
        fmax_hz: ctx.config.resolve(args.fmax_hz, "fmax-hz", d.fmax_hz)?,
        log_floor: ctx.config.resolve(args.log_floor, "log-floor", d.log_floor)?,
    })
}

/// Score a model on labeled examples.
pub fn report_for(model: &SvmModel, examples: &[LabeledExample]) -> Result<MetricsReport, AppError> {
    let mut predictions = Vec::with_capacity(examples.len());
    let mut labels = Vec::with_capacity(examples.len());
    for ex in examples {
        predictions.push(svm::predict(model, &ex.features)?.0);
        labels.push(ex.label);
    }
    Ok(metrics::metrics(&metrics::confusion(&predictions, &labels)?)?)
}

/// Reduce every example through a fitted selector.
pub fn reduce_examples(
    examples: &[LabeledExample],
    selector: &FeatureSelector,
) -> Result<Vec<LabeledExample>, AppError> {
    examples
        .iter()
        .map(|ex| {
            Ok(LabeledExample {
                features: forest::apply_selector(&ex.features, selector)?,
                label: ex.label,
                source_id: ex.source_id.clone(),
            })
        })
        .collect()
}

/// Write the test metrics JSON + one-line CSV and the train metrics JSON.
pub fn write_metric_artifacts(
    ctx: &Context,
    test: &MetricsReport,
    train: &MetricsReport,
) -> Result<(), AppError> {
    write_json(&out_path(ctx, "metrics.json"), test)?;
    write_json(&out_path(ctx, "train_metrics.json"), train)?;
    fcsv::write_metrics_csv(&out_path(ctx, "metrics.csv"), test)?;
    Ok(())
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<(), AppError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
