//! Random-forest feature ranking and selection.
//!
//! CART trees with Gini splits over bootstrap samples, grown from
//! per-tree RNG streams so the forest is reproducible (and could be grown
//! in parallel without changing the result). Feature importance is mean
//! impurity decrease, normalized to sum to 1.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::rng::{self, tag};

#[derive(Debug, Clone, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Features considered per split; `None` means `ceil(sqrt(D))`.
    pub features_per_split: Option<usize>,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { n_trees: 100, max_depth: 8, min_samples_leaf: 2, features_per_split: None, seed: 0 }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf(Label),
    Split { feature: usize, threshold: f64, left: Box<Node>, right: Box<Node> },
}

impl Node {
    fn predict(&self, x: &[f64]) -> Label {
        match self {
            Node::Leaf(label) => *label,
            Node::Split { feature, threshold, left, right } => {
                if x[*feature] <= *threshold {
                    left.predict(x)
                } else {
                    right.predict(x)
                }
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<Node>,
    /// Normalized mean-impurity-decrease importances, one per feature.
    importances: Vec<f64>,
    n_features: usize,
}

impl RandomForest {
    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_trees(&self) -> usize {
        self.trees.len()
    }

    /// Majority vote over trees; ties resolve to the positive class.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, got: x.len() });
        }
        let positive = self.trees.iter().filter(|t| t.predict(x) == 1).count();
        Ok(if 2 * positive >= self.trees.len() { 1 } else { -1 })
    }

    pub fn feature_importances(&self) -> &[f64] {
        &self.importances
    }
}

/// Train a forest of CART trees on rows `x` with labels in `{-1, +1}`.
pub fn train_random_forest(
    x: &[Vec<f64>],
    y: &[Label],
    cfg: &ForestConfig,
) -> Result<RandomForest> {
    if x.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    let d = x[0].len();
    for row in x {
        if row.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: row.len() });
        }
    }
    if let Some(&bad) = y.iter().find(|l| !matches!(**l, -1 | 1)) {
        return Err(Error::InvalidLabel(bad));
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(Error::DegenerateLabels);
    }
    if cfg.n_trees == 0 || cfg.max_depth == 0 || cfg.min_samples_leaf == 0 {
        return Err(Error::InvalidConfig("forest config fields must be positive".into()));
    }
    let mtry = cfg
        .features_per_split
        .unwrap_or_else(|| (d as f64).sqrt().ceil() as usize)
        .clamp(1, d);

    let n = x.len();
    let mut trees = Vec::with_capacity(cfg.n_trees);
    let mut importance_sum = vec![0.0; d];
    for t in 0..cfg.n_trees {
        let mut rng = rng::stream(cfg.seed, tag::FOREST, t as u64);
        let mut indices: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
        let mut importance = vec![0.0; d];
        let grower = Grower { x, y, cfg, mtry, n_total: n };
        let root = grower.grow(&mut indices, 0, &mut rng, &mut importance);
        trees.push(root);
        for (acc, v) in importance_sum.iter_mut().zip(&importance) {
            *acc += v;
        }
    }

    let total: f64 = importance_sum.iter().sum();
    let importances = if total > 0.0 {
        importance_sum.iter().map(|v| v / total).collect()
    } else {
        vec![1.0 / d as f64; d]
    };
    Ok(RandomForest { trees, importances, n_features: d })
}

struct Grower<'a> {
    x: &'a [Vec<f64>],
    y: &'a [Label],
    cfg: &'a ForestConfig,
    mtry: usize,
    n_total: usize,
}

impl Grower<'_> {
    fn grow(
        &self,
        indices: &mut [usize],
        depth: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
        importance: &mut [f64],
    ) -> Node {
        let n = indices.len();
        let n_pos = indices.iter().filter(|&&i| self.y[i] == 1).count();
        let node_gini = gini(n_pos, n);
        let pure = n_pos == 0 || n_pos == n;
        if pure || depth >= self.cfg.max_depth || n < 2 * self.cfg.min_samples_leaf {
            return Node::Leaf(majority(n_pos, n));
        }

        let d = self.x[0].len();
        let candidates = rand::seq::index::sample(rng, d, self.mtry);
        let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, gain)
        for feature in candidates {
            indices.sort_by(|&a, &b| {
                self.x[a][feature].partial_cmp(&self.x[b][feature]).unwrap()
            });
            let mut left_pos = 0usize;
            for split in 1..n {
                if self.y[indices[split - 1]] == 1 {
                    left_pos += 1;
                }
                let prev = self.x[indices[split - 1]][feature];
                let cur = self.x[indices[split]][feature];
                if prev >= cur {
                    continue;
                }
                if split < self.cfg.min_samples_leaf || n - split < self.cfg.min_samples_leaf {
                    continue;
                }
                let right_pos = n_pos - left_pos;
                let weighted = (split as f64 * gini(left_pos, split)
                    + (n - split) as f64 * gini(right_pos, n - split))
                    / n as f64;
                let gain = node_gini - weighted;
                if best.map_or(gain > 0.0, |(_, _, g)| gain > g) {
                    best = Some((feature, (prev + cur) / 2.0, gain));
                }
            }
        }

        let Some((feature, threshold, gain)) = best else {
            return Node::Leaf(majority(n_pos, n));
        };
        importance[feature] += (n as f64 / self.n_total as f64) * gain;

        let mid = partition(indices, |i| self.x[i][feature] <= threshold);
        let (left_idx, right_idx) = indices.split_at_mut(mid);
        let left = self.grow(left_idx, depth + 1, rng, importance);
        let right = self.grow(right_idx, depth + 1, rng, importance);
        Node::Split { feature, threshold, left: Box::new(left), right: Box::new(right) }
    }
}

fn gini(n_pos: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let p = n_pos as f64 / n as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

fn majority(n_pos: usize, n: usize) -> Label {
    if 2 * n_pos >= n {
        1
    } else {
        -1
    }
}

/// Stable in-place partition; returns the size of the `true` side.
fn partition(indices: &mut [usize], pred: impl Fn(usize) -> bool) -> usize {
    let mut left: Vec<usize> = Vec::with_capacity(indices.len());
    let mut right: Vec<usize> = Vec::new();
    for &i in indices.iter() {
        if pred(i) {
            left.push(i);
        } else {
            right.push(i);
        }
    }
    let mid = left.len();
    indices[..mid].copy_from_slice(&left);
    indices[mid..].copy_from_slice(&right);
    mid
}

/// Indices of the most informative features plus the full importance
/// profile. Serialized to JSON for reuse at inference time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSelector {
    pub selected_indices: Vec<usize>,
    pub importances: Vec<f64>,
}

/// Pick the top-`k` features by importance, ties broken by lower index.
pub fn select_features(forest: &RandomForest, k: usize) -> Result<FeatureSelector> {
    let d = forest.n_features;
    if k == 0 || k > d {
        return Err(Error::InvalidK { k, max: d });
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        forest.importances[b]
            .partial_cmp(&forest.importances[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut selected: Vec<usize> = order[..k].to_vec();
    selected.sort_unstable();
    Ok(FeatureSelector { selected_indices: selected, importances: forest.importances.clone() })
}

/// Gather the selected components of `v`, in index order.
pub fn apply_selector(v: &[f64], selector: &FeatureSelector) -> Result<Vec<f64>> {
    let needed = selector.selected_indices.last().map_or(0, |i| i + 1);
    if v.len() < needed {
        return Err(Error::DimensionMismatch { expected: needed, got: v.len() });
    }
    Ok(selector.selected_indices.iter().map(|&i| v[i]).collect())
}
