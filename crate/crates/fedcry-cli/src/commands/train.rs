//! `train-central` and `train-fed`.
//!
//! Both commands share the same data preparation: read the feature
//! table, make a seeded stratified split, and optionally fit a
//! random-forest selector on the train split only. The centralized
//! trainer uses the same round-0 seed stream as federation, so a
//! one-silo, one-round federated run reproduces it bit-for-bit.

use fedcry::csv as fcsv;
use fedcry::dataset::{self, LabeledExample};
use fedcry::federation::{self, FedConfig, PartitionStrategy};
use fedcry::forest::{self, FeatureSelector, ForestConfig};
use fedcry::rng::{self, tag};
use fedcry::svm::{self, ModelFile, SvmModel, TrainConfig};

use crate::{AppError, Context, PartitionArg, TrainCentralArgs, TrainFedArgs, TrainParamArgs};

use super::{ensure_out_dir, out_path, reduce_examples, report_for, write_json, write_metric_artifacts};

struct Prepared {
    train: Vec<LabeledExample>,
    test: Vec<LabeledExample>,
    selector: Option<FeatureSelector>,
    train_cfg: TrainConfig,
}

fn prepare(
    ctx: &Context,
    features: &std::path::Path,
    params: &TrainParamArgs,
) -> Result<Prepared, AppError> {
    let d = TrainConfig::default();
    let train_cfg = TrainConfig {
        epochs: d.epochs,
        batch_size: ctx.config.resolve(params.batch_size, "batch-size", d.batch_size)?,
        alpha: ctx.config.resolve(params.alpha, "alpha", d.alpha)?,
        beta1: ctx.config.resolve(params.beta1, "beta1", d.beta1)?,
        beta2: ctx.config.resolve(params.beta2, "beta2", d.beta2)?,
        epsilon: ctx.config.resolve(params.epsilon, "epsilon", d.epsilon)?,
        lambda: ctx.config.resolve(params.lambda, "lambda", d.lambda)?,
        seed: 0,
    };
    let test_fraction = ctx.config.resolve(params.test_fraction, "test-fraction", 0.2)?;
    let select_k = ctx.config.resolve_opt(params.select_k, "select-k")?;
    if params.selector_out.is_some() && select_k.is_none() {
        return Err(AppError::Usage("--selector-out requires --select-k".into()));
    }

    let examples = fcsv::read_features_csv(features)?;
    let (mut train, mut test) = dataset::split(&examples, test_fraction, true, ctx.seed)?;
    if ctx.verbose {
        eprintln!("train: {} examples, test: {}", train.len(), test.len());
    }

    let selector = match select_k {
        Some(k) => {
            let x: Vec<Vec<f64>> = train.iter().map(|e| e.features.clone()).collect();
            let y: Vec<i8> = train.iter().map(|e| e.label).collect();
            let forest_cfg = ForestConfig {
                seed: rng::child_seed(ctx.seed, tag::FOREST, 0),
                ..ForestConfig::default()
            };
            let rf = forest::train_random_forest(&x, &y, &forest_cfg)?;
            let selector = forest::select_features(&rf, k)?;
            train = reduce_examples(&train, &selector)?;
            test = reduce_examples(&test, &selector)?;
            if let Some(path) = &params.selector_out {
                if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(parent)?;
                }
                write_json(path, &selector)?;
            }
            Some(selector)
        }
        None => None,
    };
    Ok(Prepared { train, test, selector, train_cfg })
}

pub fn run_central(ctx: &Context, args: &TrainCentralArgs) -> Result<(), AppError> {
    let mut prepared = prepare(ctx, &args.features, &args.params)?;
    prepared.train_cfg.epochs = ctx.config.resolve(args.epochs, "epochs", 5)?;
    // round-0 stream of the federated schedule, so a matched single-silo
    // federation reproduces this run exactly
    prepared.train_cfg.seed = rng::child_seed(ctx.seed, tag::ROUND_TRAIN, 0);

    let dim = prepared.train[0].features.len();
    let start = SvmModel::zeros(dim, prepared.train_cfg.lambda);
    let (model, trace) = svm::train_local(&start, &prepared.train, &prepared.train_cfg)?;

    ensure_out_dir(ctx)?;
    ModelFile::new(&model, prepared.selector.clone()).save(&out_path(ctx, "model.json"))?;
    fcsv::write_loss_csv(&out_path(ctx, "loss.csv"), &trace)?;
    let test_report = report_for(&model, &prepared.test)?;
    let train_report = report_for(&model, &prepared.train)?;
    write_metric_artifacts(ctx, &test_report, &train_report)?;
    println!(
        "model: {}, test accuracy: {}, test uar: {}",
        out_path(ctx, "model.json").display(),
        fcsv::fmt_f64(test_report.accuracy),
        fcsv::fmt_f64(test_report.uar)
    );
    Ok(())
}

pub fn run_fed(ctx: &Context, args: &TrainFedArgs) -> Result<(), AppError> {
    let prepared = prepare(ctx, &args.features, &args.params)?;
    let d = FedConfig::default();
    let partition = match ctx
        .config
        .resolve(args.partition.map(partition_name), "partition", "iid-equal".to_string())?
        .as_str()
    {
        "iid-equal" => PartitionStrategy::IidEqual,
        "dirichlet" => PartitionStrategy::Dirichlet(ctx.config.resolve(
            args.dirichlet_alpha,
            "dirichlet-alpha",
            0.5,
        )?),
        other => {
            return Err(AppError::Usage(format!(
                "partition {other:?} not one of iid-equal, dirichlet"
            )))
        }
    };
    let cfg = FedConfig {
        num_silos: ctx.config.resolve(args.num_silos, "num-silos", d.num_silos)?,
        rounds: ctx.config.resolve(args.rounds, "rounds", d.rounds)?,
        local_epochs: ctx.config.resolve(args.local_epochs, "local-epochs", d.local_epochs)?,
        client_fraction: ctx.config.resolve(
            args.client_fraction,
            "client-fraction",
            d.client_fraction,
        )?,
        partition,
        seed: ctx.seed,
        train: prepared.train_cfg.clone(),
        early_stop: ctx.config.resolve_flag(args.early_stop, "early-stop")?,
    };

    let (model, history) = federation::run_federated_training(&prepared.train, &cfg)?;

    ensure_out_dir(ctx)?;
    ModelFile::new(&model, prepared.selector.clone()).save(&out_path(ctx, "model.json"))?;
    fcsv::write_history_csv(&out_path(ctx, "history.csv"), &history)?;
    let test_report = report_for(&model, &prepared.test)?;
    let train_report = report_for(&model, &prepared.train)?;
    write_metric_artifacts(ctx, &test_report, &train_report)?;
    let final_acc = history.last().map(|r| r.avg_train_accuracy);
    println!(
        "model: {}, rounds: {}, final avg train accuracy: {}, test accuracy: {}",
        out_path(ctx, "model.json").display(),
        history.len(),
        final_acc.map_or_else(|| "n/a".into(), fcsv::fmt_f64),
        fcsv::fmt_f64(test_report.accuracy)
    );
    Ok(())
}

fn partition_name(p: PartitionArg) -> String {
    match p {
        PartitionArg::IidEqual => "iid-equal".to_string(),
        PartitionArg::Dirichlet => "dirichlet".to_string(),
    }
}
