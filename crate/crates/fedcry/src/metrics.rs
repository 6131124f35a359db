//! Confusion matrix and the evaluation metrics reported per run:
//! sensitivity (asphyxia recall), specificity (normal recall), their
//! unweighted mean (UAR), and plain accuracy.

use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};

/// Counts with the positive class being asphyxia (+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub sensitivity: f64,
    pub specificity: f64,
    pub uar: f64,
    pub accuracy: f64,
}

/// Count predictions against reference labels.
pub fn confusion(predictions: &[Label], labels: &[Label]) -> Result<ConfusionMatrix> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), got: predictions.len() });
    }
    if predictions.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        if !matches!(p, -1 | 1) {
            return Err(Error::InvalidLabel(p));
        }
        if !matches!(y, -1 | 1) {
            return Err(Error::InvalidLabel(y));
        }
        match (y, p) {
            (1, 1) => cm.true_pos += 1,
            (1, -1) => cm.false_neg += 1,
            (-1, 1) => cm.false_pos += 1,
            (-1, -1) => cm.true_neg += 1,
            _ => unreachable!(),
        }
    }
    Ok(cm)
}

/// Per-class recalls and their summaries.
///
/// `uar` is exactly the mean of sensitivity and specificity, which makes
/// it invariant to class imbalance.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    let positives = cm.true_pos + cm.false_neg;
    let negatives = cm.true_neg + cm.false_pos;
    if positives == 0 {
        return Err(Error::UndefinedMetric("asphyxia"));
    }
    if negatives == 0 {
        return Err(Error::UndefinedMetric("normal"));
    }
    let sensitivity = cm.true_pos as f64 / positives as f64;
    let specificity = cm.true_neg as f64 / negatives as f64;
    Ok(MetricsReport {
        sensitivity,
        specificity,
        uar: (sensitivity + specificity) / 2.0,
        accuracy: (cm.true_pos + cm.true_neg) as f64 / cm.total() as f64,
    })
}
