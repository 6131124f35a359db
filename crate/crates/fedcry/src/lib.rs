//! Infant-cry classification pipeline with a federated training simulator.
//!
//! The crate covers the full desk-scale path from raw audio to a trained
//! classifier:
//!
//! * [`audio`] — resampling, Butterworth band-pass filtering, energy VAD,
//!   tanh soft-clipping and room-impulse-response reverberation;
//! * [`features`] — MFCC extraction (40 coefficients per 1 s clip);
//! * [`forest`] — random-forest feature ranking and selection;
//! * [`svm`] — linear SVM with hinge loss trained by Adam;
//! * [`federation`] — cross-silo FedAvg simulation with per-round metrics;
//! * [`dataset`] — WAV corpus ingestion, synthetic corpus generation,
//!   augmentation and stratified splitting;
//! * [`metrics`] — confusion matrix, sensitivity/specificity/UAR/accuracy.
//!
//! Everything randomized takes an explicit seed and is reproducible
//! bit-for-bit; see [`rng`] for how streams are derived.

pub mod audio;
pub mod csv;
pub mod dataset;
pub mod error;
pub mod features;
pub mod federation;
pub mod forest;
pub mod metrics;
pub mod rng;
pub mod svm;
pub mod wav;

pub use audio::AudioClip;
pub use dataset::{CorpusItem, Label, LabeledExample, ASPHYXIA, NORMAL};
pub use error::{Error, Result};
pub use features::MfccConfig;
pub use forest::FeatureSelector;
pub use metrics::{ConfusionMatrix, MetricsReport};
pub use svm::{SvmModel, TrainConfig};
