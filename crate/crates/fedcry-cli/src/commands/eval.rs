//! `eval`: score a trained model against a labeled feature table.

use fedcry::csv as fcsv;
use fedcry::svm::ModelFile;

use crate::{AppError, Context, EvalArgs};

use super::{ensure_out_dir, out_path, reduce_examples, report_for, write_json};

pub fn run(ctx: &Context, args: &EvalArgs) -> Result<(), AppError> {
    let model_file = ModelFile::load(&args.model)?;
    let model = model_file.model();
    let mut examples = fcsv::read_features_csv(&args.features)?;

    let width = examples[0].features.len();
    let model_dim = model.feature_dim();
    if width != model_dim {
        // a full-width table can still be evaluated through the embedded
        // selector
        match &model_file.feature_selector {
            Some(selector)
                if selector.selected_indices.len() == model_dim
                    && width == selector.importances.len() =>
            {
                examples = reduce_examples(&examples, selector)?;
            }
            _ => {
                return Err(AppError::Data(format!(
                    "feature table has {width} columns but the model expects {model_dim}"
                )));
            }
        }
    }

    let report = report_for(&model, &examples)?;
    ensure_out_dir(ctx)?;
    write_json(&out_path(ctx, "metrics.json"), &report)?;
    fcsv::write_metrics_csv(&out_path(ctx, "metrics.csv"), &report)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
