//! Cross-silo FedAvg simulation.
//!
//! A federation partitions one dataset across virtual silos, then runs
//! communication rounds: selected clients locally train the shared model
//! (fresh Adam state each round) and the server aggregates full weight
//! vectors by data-size-weighted averaging. Per-round streams derive
//! from `(seed, round)`, so clients holding identical data produce
//! identical updates and a single-silo federation reproduces centralized
//! training bit-for-bit.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::dataset::{Label, LabeledExample};
use crate::error::{Error, Result};
use crate::rng::{self, tag};
use crate::svm::{self, SvmModel, TrainConfig};

/// One virtual client holding a private shard of the dataset.
#[derive(Debug, Clone)]
pub struct Silo {
    pub id: usize,
    pub data: Vec<LabeledExample>,
}

impl Silo {
    /// Local dataset size `n_k`.
    pub fn n_k(&self) -> usize {
        self.data.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PartitionStrategy {
    /// Shuffled equal shards; the remainder is spread one-each to the
    /// first silos.
    IidEqual,
    /// Per-class proportions over silos drawn from a symmetric
    /// Dirichlet with the given concentration.
    Dirichlet(f64),
}

#[derive(Debug, Clone)]
pub struct FedConfig {
    pub num_silos: usize,
    pub rounds: usize,
    pub local_epochs: usize,
    /// Fraction of silos selected each round, in (0, 1].
    pub client_fraction: f64,
    pub partition: PartitionStrategy,
    pub seed: u64,
    pub train: TrainConfig,
    /// Stop early once the round loss improves by less than 1e-6 for 5
    /// consecutive rounds. Off by default: the reference experiment runs
    /// a fixed number of rounds.
    pub early_stop: bool,
}

impl Default for FedConfig {
    fn default() -> Self {
        Self {
            num_silos: 10,
            rounds: 50,
            local_epochs: 5,
            client_fraction: 1.0,
            partition: PartitionStrategy::IidEqual,
            seed: 0,
            train: TrainConfig::default(),
            early_stop: false,
        }
    }
}

const EARLY_STOP_TOL: f64 = 1e-6;
const EARLY_STOP_PATIENCE: usize = 5;

/// Snapshot of one communication round.
#[derive(Debug, Clone)]
pub struct RoundRecord {
    pub round: usize,
    pub selected_ids: Vec<usize>,
    pub global_weights: Vec<f64>,
    /// Regularized empirical risk of the new global model over the union
    /// of all silo data.
    pub train_loss: f64,
    /// Unweighted mean of per-silo accuracies of the new global model.
    pub avg_train_accuracy: f64,
}

/// A client's contribution to one aggregation.
#[derive(Debug, Clone)]
pub struct ClientUpdate {
    pub silo_id: usize,
    pub weights: Vec<f64>,
    pub n_k: usize,
}

/// Split a dataset into disjoint, covering silos.
pub fn partition_dataset(
    data: &[LabeledExample],
    num_silos: usize,
    strategy: PartitionStrategy,
    seed: u64,
) -> Result<Vec<Silo>> {
    if num_silos == 0 {
        return Err(Error::InvalidConfig("need at least one silo".into()));
    }
    if data.len() < num_silos {
        return Err(Error::NotEnoughData { have: data.len(), silos: num_silos });
    }
    if num_silos == 1 {
        // A lone silo keeps the dataset order so single-silo federation
        // is bit-identical to centralized training.
        return Ok(vec![Silo { id: 0, data: data.to_vec() }]);
    }
    let mut rng = rng::stream(seed, tag::PARTITION, 0);
    match strategy {
        PartitionStrategy::IidEqual => {
            let mut order: Vec<usize> = (0..data.len()).collect();
            order.shuffle(&mut rng);
            let base = data.len() / num_silos;
            let remainder = data.len() % num_silos;
            let mut silos = Vec::with_capacity(num_silos);
            let mut cursor = 0;
            for id in 0..num_silos {
                let take = base + usize::from(id < remainder);
                let shard = order[cursor..cursor + take]
                    .iter()
                    .map(|&i| data[i].clone())
                    .collect();
                cursor += take;
                silos.push(Silo { id, data: shard });
            }
            Ok(silos)
        }
        PartitionStrategy::Dirichlet(alpha) => {
            if !alpha.is_finite() || alpha <= 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "dirichlet concentration {alpha} must be positive"
                )));
            }
            let gamma = Gamma::new(alpha, 1.0)
                .map_err(|e| Error::InvalidConfig(format!("dirichlet: {e}")))?;
            let mut shards: Vec<Vec<LabeledExample>> = vec![Vec::new(); num_silos];
            let mut classes: Vec<Label> = data.iter().map(|e| e.label).collect();
            classes.sort_unstable();
            classes.dedup();
            for class in classes {
                let mut members: Vec<usize> = (0..data.len())
                    .filter(|&i| data[i].label == class)
                    .collect();
                members.shuffle(&mut rng);
                // Dirichlet draw over silos via normalized gamma samples.
                let mut props: Vec<f64> =
                    (0..num_silos).map(|_| gamma.sample(&mut rng).max(1e-12)).collect();
                let total: f64 = props.iter().sum();
                for p in &mut props {
                    *p /= total;
                }
                let mut cursor = 0usize;
                let mut cum = 0.0;
                for (silo, &p) in props.iter().enumerate() {
                    cum += p;
                    let end = if silo + 1 == num_silos {
                        members.len()
                    } else {
                        ((cum * members.len() as f64).round() as usize).min(members.len())
                    };
                    for &i in &members[cursor..end.max(cursor)] {
                        shards[silo].push(data[i].clone());
                    }
                    cursor = end.max(cursor);
                }
            }
            // Repair empties by moving one example from the largest silo.
            while let Some(empty) = shards.iter().position(Vec::is_empty) {
                let largest = (0..shards.len())
                    .max_by_key(|&i| shards[i].len())
                    .expect("at least one silo");
                let moved = shards[largest].pop().expect("largest silo is non-empty");
                shards[empty].push(moved);
            }
            Ok(shards
                .into_iter()
                .enumerate()
                .map(|(id, data)| Silo { id, data })
                .collect())
        }
    }
}

/// Uniform sample of `max(1, ceil(fraction * num_silos))` distinct
/// silos, returned in id order.
pub fn select_clients<'a, R: Rng>(
    silos: &'a [Silo],
    fraction: f64,
    round_rng: &mut R,
) -> Vec<&'a Silo> {
    let count = ((fraction * silos.len() as f64).ceil() as usize).clamp(1, silos.len());
    if count == silos.len() {
        let mut all: Vec<&Silo> = silos.iter().collect();
        all.sort_by_key(|s| s.id);
        return all;
    }
    let picked = rand::seq::index::sample(round_rng, silos.len(), count);
    let mut chosen: Vec<&Silo> = picked.iter().map(|i| &silos[i]).collect();
    chosen.sort_by_key(|s| s.id);
    chosen
}

/// Data-size-weighted mean of client weights:
/// `w_glob = sum_k (n_k / n) w_k` with `n` the total over the selected
/// clients, accumulated in ascending silo-id order.
///
/// Computed as deviations from the lowest-id client so that identical
/// inputs aggregate to exactly themselves.
pub fn aggregate(updates: &[ClientUpdate]) -> Result<Vec<f64>> {
    if updates.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = updates[0].weights.len();
    for u in updates {
        if u.weights.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: u.weights.len() });
        }
    }
    let mut order: Vec<usize> = (0..updates.len()).collect();
    order.sort_by_key(|&i| updates[i].silo_id);
    let n: f64 = updates.iter().map(|u| u.n_k as f64).sum();
    let base = &updates[order[0]].weights;
    let mut out = base.clone();
    for &i in &order[1..] {
        let u = &updates[i];
        let coeff = u.n_k as f64 / n;
        for (o, (w, b)) in out.iter_mut().zip(u.weights.iter().zip(base)) {
            *o += coeff * (w - b);
        }
    }
    Ok(out)
}

/// One communication round: select clients, train locally from the
/// global weights with fresh Adam state, aggregate, and score the new
/// global model over every silo.
pub fn run_round(
    global_weights: &[f64],
    silos: &[Silo],
    cfg: &FedConfig,
    round: usize,
) -> Result<(Vec<f64>, RoundRecord)> {
    if silos.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut selection_rng = rng::stream(cfg.seed, tag::CLIENT_SELECT, round as u64);
    let selected = select_clients(silos, cfg.client_fraction, &mut selection_rng);
    let round_cfg = TrainConfig {
        epochs: cfg.local_epochs,
        seed: rng::child_seed(cfg.seed, tag::ROUND_TRAIN, round as u64),
        ..cfg.train.clone()
    };
    let start = SvmModel { weights: global_weights.to_vec(), lambda: cfg.train.lambda };
    let mut updates = Vec::with_capacity(selected.len());
    for silo in &selected {
        let (local, _) = svm::train_local(&start, &silo.data, &round_cfg)?;
        updates.push(ClientUpdate { silo_id: silo.id, weights: local.weights, n_k: silo.n_k() });
    }
    let new_global = aggregate(&updates)?;

    let new_model = SvmModel { weights: new_global.clone(), lambda: cfg.train.lambda };
    let record = RoundRecord {
        round,
        selected_ids: selected.iter().map(|s| s.id).collect(),
        global_weights: new_global.clone(),
        train_loss: federation_loss(&new_model, silos)?,
        avg_train_accuracy: mean_silo_accuracy(&new_model, silos)?,
    };
    Ok((new_global, record))
}

/// Objective of `model` over the union of all silo data, iterated in
/// silo-id order.
fn federation_loss(model: &SvmModel, silos: &[Silo]) -> Result<f64> {
    let mut order: Vec<usize> = (0..silos.len()).collect();
    order.sort_by_key(|&i| silos[i].id);
    let mut total_hinge = 0.0;
    let mut count = 0usize;
    for &i in &order {
        for ex in &silos[i].data {
            total_hinge += svm::hinge_loss(model, &ex.features, ex.label)?;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::EmptyDataset);
    }
    let norm_sq: f64 = model.weights.iter().map(|w| w * w).sum();
    Ok(model.lambda / 2.0 * norm_sq + total_hinge / count as f64)
}

fn mean_silo_accuracy(model: &SvmModel, silos: &[Silo]) -> Result<f64> {
    let mut total = 0.0;
    for silo in silos {
        total += svm::accuracy(model, &silo.data)?;
    }
    Ok(total / silos.len() as f64)
}

/// Full federated run: partition once, start from zero weights, iterate
/// rounds, and return the final model with the per-round history.
pub fn run_federated_training(
    data: &[LabeledExample],
    cfg: &FedConfig,
) -> Result<(SvmModel, Vec<RoundRecord>)> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let dim = data[0].features.len();
    for ex in data {
        if ex.features.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: ex.features.len() });
        }
    }
    if !(cfg.client_fraction > 0.0 && cfg.client_fraction <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "client fraction {} outside (0, 1]",
            cfg.client_fraction
        )));
    }
    let silos = partition_dataset(data, cfg.num_silos, cfg.partition, cfg.seed)?;
    let mut weights = vec![0.0; dim + 1];
    let mut history: Vec<RoundRecord> = Vec::with_capacity(cfg.rounds);
    let mut stall = 0usize;
    for round in 0..cfg.rounds {
        let (next, record) = run_round(&weights, &silos, cfg, round)?;
        weights = next;
        if cfg.early_stop {
            let improved = match history.last() {
                Some(prev) => prev.train_loss - record.train_loss >= EARLY_STOP_TOL,
                None => true,
            };
            stall = if improved { 0 } else { stall + 1 };
            history.push(record);
            if stall >= EARLY_STOP_PATIENCE {
                break;
            }
        } else {
            history.push(record);
        }
    }
    Ok((SvmModel { weights, lambda: cfg.train.lambda }, history))
}
