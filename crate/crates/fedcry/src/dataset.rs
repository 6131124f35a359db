//! Corpus handling: WAV ingestion, synthetic cry generation,
//! augmentation orchestration, and stratified splitting.
//!
//! The synthetic generator is a stand-in corpus whose labels are true by
//! construction: the two classes occupy disjoint fundamental-frequency
//! bands and the positive class carries added noise. It makes desk-scale
//! end-to-end runs possible without any restricted audio.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::audio::{self, AudioClip, RirFilter};
use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::rng::{self, tag};

/// Class label: +1 asphyxia (positive), -1 normal.
pub type Label = i8;

pub const ASPHYXIA: Label = 1;
pub const NORMAL: Label = -1;

/// Folder names used by the corpus directory layout.
pub const CLASS_DIRS: [(&str, Label); 2] = [("asphyxia", ASPHYXIA), ("normal", NORMAL)];

/// One labeled audio clip with provenance.
#[derive(Debug, Clone)]
pub struct CorpusItem {
    pub clip: AudioClip,
    pub label: Label,
    pub source_id: String,
}

/// One labeled feature vector with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledExample {
    pub features: FeatureVector,
    pub label: Label,
    pub source_id: String,
}

/// Corpus read result: usable items plus per-file skips.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub items: Vec<CorpusItem>,
    pub skipped: Vec<(PathBuf, String)>,
}

/// Load `<root>/normal/*.wav` and `<root>/asphyxia/*.wav`.
///
/// Clips are resampled to `target_rate_hz`; files appear in
/// lexicographic path order. Unreadable or malformed files are skipped
/// and reported rather than aborting the load.
pub fn load_corpus(root: &Path, target_rate_hz: u32) -> Result<LoadedCorpus> {
    // surface a missing root as an error instead of an empty corpus
    std::fs::read_dir(root)?;
    let mut items = Vec::new();
    let mut skipped = Vec::new();
    for (class, label) in CLASS_DIRS {
        let dir = root.join(class);
        if !dir.is_dir() {
            continue;
        }
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| {
                p.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("wav"))
            })
            .collect();
        files.sort();
        for path in files {
            match crate::wav::read_wav(&path).and_then(|c| audio::resample(&c, target_rate_hz)) {
                Ok(clip) => {
                    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
                    items.push(CorpusItem {
                        clip,
                        label,
                        source_id: format!("{class}/{name}"),
                    });
                }
                Err(e) => skipped.push((path, e.to_string())),
            }
        }
    }
    Ok(LoadedCorpus { items, skipped })
}

/// Parameters of the synthetic two-class corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub n_normal: usize,
    pub n_asphyxia: usize,
    pub duration_ms: u32,
    pub sample_rate_hz: u32,
    /// Fundamental-frequency band of the normal class, Hz.
    pub normal_f0_hz: (f64, f64),
    /// Fundamental-frequency band of the asphyxia class, Hz.
    pub asphyxia_f0_hz: (f64, f64),
    /// Noise level mixed into asphyxia clips, dB relative to signal RMS.
    pub asphyxia_noise_db: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_normal: 200,
            n_asphyxia: 200,
            duration_ms: 1_000,
            sample_rate_hz: 16_000,
            normal_f0_hz: (350.0, 550.0),
            asphyxia_f0_hz: (650.0, 900.0),
            asphyxia_noise_db: -15.0,
            seed: 0,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<()> {
        let (nl, nh) = self.normal_f0_hz;
        let (al, ah) = self.asphyxia_f0_hz;
        if !(nl > 0.0 && nl < nh && al > 0.0 && al < ah) {
            return Err(Error::InvalidConfig("f0 bands must be positive and ordered".into()));
        }
        if nh >= al && ah >= nl {
            // overlapping bands would break the constructed separation
            if nl < ah && al < nh {
                return Err(Error::InvalidConfig("class f0 bands must not overlap".into()));
            }
        }
        if self.duration_ms == 0 {
            return Err(Error::InvalidConfig("duration must be positive".into()));
        }
        Ok(())
    }
}

/// A generated clip together with the draw that produced it.
#[derive(Debug, Clone)]
pub struct SyntheticClip {
    pub item: CorpusItem,
    pub f0_hz: f64,
    pub clip_seed: u64,
}

/// Generate the synthetic corpus: normal clips first, then asphyxia,
/// each deterministic under `cfg.seed`.
pub fn generate_synthetic_corpus(cfg: &SynthConfig) -> Result<Vec<SyntheticClip>> {
    cfg.validate()?;
    let mut out = Vec::with_capacity(cfg.n_normal + cfg.n_asphyxia);
    for i in 0..cfg.n_normal {
        out.push(synth_clip(cfg, NORMAL, i, i as u64));
    }
    for i in 0..cfg.n_asphyxia {
        out.push(synth_clip(cfg, ASPHYXIA, i, (cfg.n_normal + i) as u64));
    }
    Ok(out)
}

fn synth_clip(cfg: &SynthConfig, label: Label, index: usize, global_index: u64) -> SyntheticClip {
    let clip_seed = rng::child_seed(cfg.seed, tag::SYNTH, global_index);
    let mut rng = rng::stream(clip_seed, tag::SYNTH, 1);
    let band = if label == ASPHYXIA { cfg.asphyxia_f0_hz } else { cfg.normal_f0_hz };
    // Keep the +-3% vibrato excursion inside the class band.
    let lo = band.0 * 1.04;
    let hi = band.1 * 0.96;
    let f0 = lo + (hi - lo) * rng.random::<f64>();
    let vib_rate = 1.5 + 1.5 * rng.random::<f64>();
    let vib_phase = std::f64::consts::TAU * rng.random::<f64>();
    let start_phase = std::f64::consts::TAU * rng.random::<f64>();
    let amp = 0.5 + 0.4 * rng.random::<f64>();

    let rate = cfg.sample_rate_hz as f64;
    let n = (cfg.duration_ms as f64 / 1000.0 * rate).round() as usize;
    let mut samples = Vec::with_capacity(n);
    let mut phase = start_phase;
    for i in 0..n {
        let t = i as f64 / rate;
        let f_inst = f0 * (1.0 + 0.03 * (std::f64::consts::TAU * vib_rate * t + vib_phase).sin());
        phase += std::f64::consts::TAU * f_inst / rate;
        let mut s = 0.0;
        for h in 1..=4u32 {
            s += (phase * h as f64).sin() / h as f64;
        }
        let envelope = (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).sin().sqrt();
        samples.push(envelope * s);
    }
    let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs())).max(1e-12);
    for s in &mut samples {
        *s *= amp / peak;
    }
    if label == ASPHYXIA {
        let signal_rms = audio::rms(&samples);
        let noise_rms = signal_rms * 10f64.powf(cfg.asphyxia_noise_db / 20.0);
        for s in samples.iter_mut() {
            let z: f64 = rng.sample(StandardNormal);
            *s += noise_rms * z;
        }
        let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        if peak > 0.99 {
            for s in &mut samples {
                *s *= 0.99 / peak;
            }
        }
    }
    let class = if label == ASPHYXIA { "asphyxia" } else { "normal" };
    SyntheticClip {
        item: CorpusItem {
            clip: AudioClip { samples, sample_rate_hz: cfg.sample_rate_hz },
            label,
            source_id: format!("{class}_{index:03}"),
        },
        f0_hz: f0,
        clip_seed,
    }
}

/// Bootstrap a corpus to three times its size: every original plus one
/// tanh-distorted copy and one reverberated copy, labels preserved.
///
/// Distortion gains are drawn per clip from `tanh_gain_range`; RIRs come
/// round-robin from `rir_bank`. Provenance is chained in `source_id`.
pub fn augment_dataset(
    items: &[CorpusItem],
    tanh_gain_range: (f64, f64),
    rir_bank: &[RirFilter],
    seed: u64,
) -> Result<Vec<CorpusItem>> {
    if items.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if rir_bank.is_empty() {
        return Err(Error::MissingRir);
    }
    let (g_lo, g_hi) = tanh_gain_range;
    if !(g_lo > 0.0 && g_lo <= g_hi) {
        return Err(Error::InvalidGain(g_lo));
    }
    let mut out = Vec::with_capacity(items.len() * 3);
    out.extend(items.iter().cloned());
    for (i, item) in items.iter().enumerate() {
        let mut rng = rng::stream(seed, tag::AUGMENT, i as u64);
        let gain = g_lo + (g_hi - g_lo) * rng.random::<f64>();
        let distorted = audio::tanh_distortion(&item.clip, gain)?;
        out.push(CorpusItem {
            clip: distorted,
            label: item.label,
            source_id: format!("{}#tanh{gain:.3}", item.source_id),
        });
    }
    for (i, item) in items.iter().enumerate() {
        let bank_idx = i % rir_bank.len();
        let reverbed = audio::convolve_rir(&item.clip, &rir_bank[bank_idx])?;
        out.push(CorpusItem {
            clip: reverbed,
            label: item.label,
            source_id: format!("{}#rir{bank_idx}", item.source_id),
        });
    }
    Ok(out)
}

/// Split into disjoint train/test sets covering the input.
///
/// The test size is `round(test_fraction * n)`. A stratified split
/// allocates per-class test counts by largest remainder, keeping class
/// ratios within one example of the global ratio; a class with a single
/// example lands on one side only.
pub fn split(
    examples: &[LabeledExample],
    test_fraction: f64,
    stratified: bool,
    seed: u64,
) -> Result<(Vec<LabeledExample>, Vec<LabeledExample>)> {
    if examples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "test fraction {test_fraction} outside (0, 1)"
        )));
    }
    let n = examples.len();
    let n_test = (test_fraction * n as f64).round() as usize;
    if n_test == 0 || n_test == n {
        return Err(Error::Stratify(format!(
            "fraction {test_fraction} of {n} examples leaves one side empty"
        )));
    }
    let mut rng = rng::stream(seed, tag::SPLIT, 0);
    if !stratified {
        let mut order: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let test: Vec<LabeledExample> = order[..n_test].iter().map(|&i| examples[i].clone()).collect();
        let train: Vec<LabeledExample> =
            order[n_test..].iter().map(|&i| examples[i].clone()).collect();
        return Ok((train, test));
    }

    let mut classes: Vec<Label> = examples.iter().map(|e| e.label).collect();
    classes.sort_unstable();
    classes.dedup();
    let mut per_class: Vec<Vec<usize>> = classes
        .iter()
        .map(|&c| (0..n).filter(|&i| examples[i].label == c).collect())
        .collect();
    for members in &mut per_class {
        rand::seq::SliceRandom::shuffle(members.as_mut_slice(), &mut rng);
    }
    // Largest-remainder allocation of test counts across classes.
    let ideals: Vec<f64> = per_class.iter().map(|m| test_fraction * m.len() as f64).collect();
    let mut counts: Vec<usize> = ideals.iter().map(|v| v.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = ideals[a] - ideals[a].floor();
        let fb = ideals[b] - ideals[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    for idx in 0..n_test.saturating_sub(assigned) {
        let class = order[idx % order.len()];
        if counts[class] < per_class[class].len() {
            counts[class] += 1;
        }
    }
    let mut train = Vec::with_capacity(n - n_test);
    let mut test = Vec::with_capacity(n_test);
    for (members, &take) in per_class.iter().zip(&counts) {
        for (pos, &i) in members.iter().enumerate() {
            if pos < take {
                test.push(examples[i].clone());
            } else {
                train.push(examples[i].clone());
            }
        }
    }
    Ok((train, test))
}
