//! Linear SVM with hinge loss and L2 regularization, trained by Adam.
//!
//! Features are augmented with a constant 1 so the bias is the last
//! weight and the unaugmented formulas hold verbatim; the bias is
//! regularized with the rest. Labels are -1 (normal) and +1 (asphyxia);
//! a zero score predicts the positive class so ties favor sensitivity.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataset::{Label, LabeledExample};
use crate::error::{Error, Result};
use crate::forest::FeatureSelector;
use crate::rng::{self, tag};

/// Weights of length `D + 1`; index `D` is the bias paired with the
/// constant-1 augmented feature.
#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub lambda: f64,
}

impl SvmModel {
    /// Zero model for `feature_dim` unaugmented features.
    pub fn zeros(feature_dim: usize, lambda: f64) -> Self {
        Self { weights: vec![0.0; feature_dim + 1], lambda }
    }

    pub fn feature_dim(&self) -> usize {
        self.weights.len() - 1
    }

    /// Raw decision value `w . [x, 1]`.
    pub fn score(&self, x: &[f64]) -> Result<f64> {
        if x.len() + 1 != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len() - 1,
                got: x.len(),
            });
        }
        let dot: f64 = self.weights[..x.len()].iter().zip(x).map(|(w, v)| w * v).sum();
        Ok(dot + self.weights[x.len()])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 5,
            batch_size: 32,
            alpha: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            lambda: 1e-3,
            seed: 0,
        }
    }
}

/// Adam optimizer state; `t` counts completed steps.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub t: u64,
    pub alpha: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(dim: usize, cfg: &TrainConfig) -> Self {
        Self {
            m: vec![0.0; dim],
            v: vec![0.0; dim],
            t: 0,
            alpha: cfg.alpha,
            beta1: cfg.beta1,
            beta2: cfg.beta2,
            epsilon: cfg.epsilon,
        }
    }
}

/// Objective values recorded after each epoch.
pub type LossTrace = Vec<f64>;

fn check_label(y: Label) -> Result<f64> {
    match y {
        1 => Ok(1.0),
        -1 => Ok(-1.0),
        other => Err(Error::InvalidLabel(other)),
    }
}

/// Hinge loss `max(0, 1 - y * w.x~)` for one example.
pub fn hinge_loss(model: &SvmModel, x: &[f64], y: Label) -> Result<f64> {
    let yf = check_label(y)?;
    Ok((1.0 - yf * model.score(x)?).max(0.0))
}

/// Regularized empirical risk `(lambda/2)||w||^2 + mean hinge`.
///
/// The bias weight is included in the norm.
pub fn objective(model: &SvmModel, data: &[LabeledExample]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let norm_sq: f64 = model.weights.iter().map(|w| w * w).sum();
    let mut total = 0.0;
    for ex in data {
        total += hinge_loss(model, &ex.features, ex.label)?;
    }
    Ok(model.lambda / 2.0 * norm_sq + total / data.len() as f64)
}

/// Mini-batch subgradient of the objective: `lambda*w` plus the mean of
/// `-y * x~` over examples with an active hinge (`y * w.x~ < 1`,
/// strictly, so the kink contributes zero).
pub fn subgradient(model: &SvmModel, batch: &[LabeledExample]) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = model.weights.len();
    let mut acc = vec![0.0; dim];
    for ex in batch {
        let yf = check_label(ex.label)?;
        let score = model.score(&ex.features)?;
        if yf * score < 1.0 {
            for (a, &xi) in acc.iter_mut().zip(&ex.features) {
                *a -= yf * xi;
            }
            acc[dim - 1] -= yf;
        }
    }
    let inv = 1.0 / batch.len() as f64;
    Ok(model
        .weights
        .iter()
        .zip(&acc)
        .map(|(w, a)| model.lambda * w + a * inv)
        .collect())
}

/// One Adam update; increments `t`, then applies the bias-corrected
/// moment estimates.
pub fn adam_step(state: &mut AdamState, weights: &mut [f64], grad: &[f64]) -> Result<()> {
    if grad.len() != weights.len() || state.m.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: weights.len(), got: grad.len() });
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFiniteGradient);
    }
    state.t += 1;
    let bias1 = 1.0 - state.beta1.powi(state.t as i32);
    let bias2 = 1.0 - state.beta2.powi(state.t as i32);
    for i in 0..weights.len() {
        let g = grad[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        let m_hat = state.m[i] / bias1;
        let v_hat = state.v[i] / bias2;
        weights[i] -= state.alpha * m_hat / (v_hat.sqrt() + state.epsilon);
    }
    Ok(())
}

/// Train for `cfg.epochs` passes of shuffled mini-batches.
///
/// Each epoch shuffles with its own stream of `cfg.seed`; Adam state
/// persists across epochs within this call. The trace holds the
/// full-dataset objective after each epoch.
pub fn train_local(
    model: &SvmModel,
    data: &[LabeledExample],
    cfg: &TrainConfig,
) -> Result<(SvmModel, LossTrace)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if cfg.batch_size == 0 {
        return Err(Error::InvalidConfig("batch_size must be at least 1".into()));
    }
    let dim = model.weights.len();
    for ex in data {
        if ex.features.len() + 1 != dim {
            return Err(Error::DimensionMismatch { expected: dim - 1, got: ex.features.len() });
        }
    }
    let mut current = SvmModel { weights: model.weights.clone(), lambda: cfg.lambda };
    let mut state = AdamState::new(dim, cfg);
    let mut trace = Vec::with_capacity(cfg.epochs);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut batch: Vec<LabeledExample> = Vec::with_capacity(cfg.batch_size);
    for epoch in 0..cfg.epochs {
        let mut rng = rng::stream(cfg.seed, tag::EPOCH_SHUFFLE, epoch as u64);
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i].clone()));
            let grad = subgradient(&current, &batch)?;
            adam_step(&mut state, &mut current.weights, &grad)?;
        }
        trace.push(objective(&current, data)?);
    }
    Ok((current, trace))
}

/// Predicted label and raw score; a zero score maps to +1 (asphyxia).
pub fn predict(model: &SvmModel, x: &[f64]) -> Result<(Label, f64)> {
    let score = model.score(x)?;
    Ok((if score >= 0.0 { 1 } else { -1 }, score))
}

/// Fraction of examples whose predicted label matches.
pub fn accuracy(model: &SvmModel, data: &[LabeledExample]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut correct = 0usize;
    for ex in data {
        if predict(model, &ex.features)?.0 == ex.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

/// On-disk model format; the selector travels with the weights so
/// inference can reduce features the same way training did.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelFile {
    pub weights: Vec<f64>,
    pub lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feature_selector: Option<FeatureSelector>,
    pub label_map: LabelMap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelMap {
    #[serde(rename = "+1")]
    pub positive: String,
    #[serde(rename = "-1")]
    pub negative: String,
}

impl Default for LabelMap {
    fn default() -> Self {
        Self { positive: "asphyxia".into(), negative: "normal".into() }
    }
}

impl ModelFile {
    pub fn new(model: &SvmModel, feature_selector: Option<FeatureSelector>) -> Self {
        Self {
            weights: model.weights.clone(),
            lambda: model.lambda,
            feature_selector,
            label_map: LabelMap::default(),
        }
    }

    pub fn model(&self) -> SvmModel {
        SvmModel { weights: self.weights.clone(), lambda: self.lambda }
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
