//! `features`: MFCC extraction from a corpus directory to a CSV table.

use fedcry::audio::AudioClip;
use fedcry::csv as fcsv;
use fedcry::dataset;
use fedcry::features;
use fedcry::forest::FeatureSelector;

use crate::{AppError, Context, FeaturesArgs};

use super::{ensure_out_dir, out_path, reduce_examples, resolve_mfcc};

pub fn run(ctx: &Context, args: &FeaturesArgs) -> Result<(), AppError> {
    let cfg = resolve_mfcc(ctx, &args.mfcc)?;
    let corpus = dataset::load_corpus(&args.corpus, AudioClip::CANONICAL_RATE_HZ)?;
    for (path, reason) in &corpus.skipped {
        eprintln!("skipped {}: {reason}", path.display());
    }
    if corpus.items.is_empty() {
        return Err(AppError::Data(format!(
            "no usable WAV files under {}",
            args.corpus.display()
        )));
    }
    let mut examples = features::extract_features(&corpus.items, &cfg)?;
    if let Some(selector_path) = &args.selector {
        let selector: FeatureSelector =
            serde_json::from_str(&std::fs::read_to_string(selector_path)?)?;
        examples = reduce_examples(&examples, &selector)?;
    }
    ensure_out_dir(ctx)?;
    let out = out_path(ctx, "features.csv");
    fcsv::write_features_csv(&out, &examples)?;
    if ctx.verbose {
        eprintln!(
            "features: {} clips, {} columns",
            examples.len(),
            examples[0].features.len()
        );
    }
    println!(
        "features: {} ({} rows, {} feature columns)",
        out.display(),
        examples.len(),
        examples[0].features.len()
    );
    Ok(())
}
