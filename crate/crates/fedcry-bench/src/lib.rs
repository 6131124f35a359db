//! Shared input builders for the benchmark targets.

use fedcry::dataset::{self, LabeledExample, SynthConfig};
use fedcry::features::{self, MfccConfig};
use fedcry::AudioClip;

/// One synthetic cry clip at the canonical rate.
pub fn bench_clip(seed: u64) -> AudioClip {
    let cfg = SynthConfig { n_normal: 1, n_asphyxia: 0, seed, ..SynthConfig::default() };
    dataset::generate_synthetic_corpus(&cfg)
        .expect("valid config")
        .remove(0)
        .item
        .clip
}

/// A labeled MFCC feature set of `n_per_class * 2` examples.
pub fn bench_features(n_per_class: usize, seed: u64) -> Vec<LabeledExample> {
    let cfg = SynthConfig {
        n_normal: n_per_class,
        n_asphyxia: n_per_class,
        seed,
        ..SynthConfig::default()
    };
    let items: Vec<_> = dataset::generate_synthetic_corpus(&cfg)
        .expect("valid config")
        .into_iter()
        .map(|s| s.item)
        .collect();
    features::extract_features(&items, &MfccConfig::default()).expect("feature extraction")
}
