//! `diagnose`: the single-recording inference chain.
//!
//! load → resample to 16 kHz → voice-activity detection → Butterworth
//! band-pass on each voiced segment → 1000 ms windows (tail windows of
//! at least 500 ms are zero-padded, shorter tails dropped) → MFCC →
//! optional selector → per-window prediction → majority verdict. The
//! verdict is asphyxia when the positive-window fraction reaches the
//! threshold, so an exact tie favors sensitivity.

use serde::Serialize;

use fedcry::audio::{self, AudioClip, FilterSpec, VadConfig};
use fedcry::features;
use fedcry::forest;
use fedcry::svm::{self, ModelFile};
use fedcry::wav;

use crate::{AppError, Context, DiagnoseArgs};

use super::resolve_mfcc;

#[derive(Serialize)]
struct WindowReport {
    start_ms: u64,
    label: String,
    score: f64,
}

#[derive(Serialize)]
struct DiagnosisReport {
    file: String,
    windows: Vec<WindowReport>,
    verdict: String,
    positive_window_fraction: f64,
}

#[derive(Serialize)]
struct NoVoiceReport {
    file: String,
    error: &'static str,
}

pub fn run(ctx: &Context, args: &DiagnoseArgs) -> Result<(), AppError> {
    let vad = VadConfig {
        frame_ms: ctx.config.resolve(args.vad_frame_ms, "vad-frame-ms", 30.0)?,
        energy_threshold_db: ctx.config.resolve(
            args.vad_threshold_db,
            "vad-threshold-db",
            -25.0,
        )?,
        hangover_frames: ctx.config.resolve(args.vad_hangover, "vad-hangover", 3)?,
    };
    let spec_default = FilterSpec::default();
    let filter_spec = FilterSpec {
        low_cut_hz: ctx.config.resolve(args.low_cut_hz, "low-cut-hz", spec_default.low_cut_hz)?,
        high_cut_hz: ctx.config.resolve(
            args.high_cut_hz,
            "high-cut-hz",
            spec_default.high_cut_hz,
        )?,
        order: ctx.config.resolve(args.filter_order, "filter-order", spec_default.order)?,
    };
    let threshold = ctx.config.resolve(args.threshold, "threshold", 0.5)?;
    let mfcc_cfg = resolve_mfcc(ctx, &args.mfcc)?;

    let model_file = ModelFile::load(&args.model)?;
    let model = model_file.model();

    let rate = AudioClip::CANONICAL_RATE_HZ;
    let clip = audio::resample(&wav::read_wav(&args.wav)?, rate)?;
    let segments = audio::detect_voice_activity(&clip, &vad)?;
    let sections = audio::design_butterworth_bandpass(&filter_spec, rate)?;

    let window_len = rate as usize; // 1000 ms
    let min_tail = window_len / 2; // 500 ms
    let mut windows = Vec::new();
    for &(seg_start, seg_end) in &segments {
        let segment = AudioClip {
            samples: clip.samples[seg_start..seg_end].to_vec(),
            sample_rate_hz: rate,
        };
        let filtered = audio::apply_filter(&segment, &sections);
        let mut offset = 0;
        while offset < filtered.len() {
            let remaining = filtered.len() - offset;
            if remaining < min_tail {
                break;
            }
            let take = remaining.min(window_len);
            let mut samples = filtered.samples[offset..offset + take].to_vec();
            samples.resize(window_len, 0.0);
            let window = AudioClip { samples, sample_rate_hz: rate };
            let mut feats = features::mfcc(&window, &mfcc_cfg)?;
            if let Some(selector) = &model_file.feature_selector {
                feats = forest::apply_selector(&feats, selector)?;
            }
            let (label, score) = svm::predict(&model, &feats)?;
            windows.push(WindowReport {
                start_ms: ((seg_start + offset) as u64 * 1000) / rate as u64,
                label: if label == 1 {
                    model_file.label_map.positive.clone()
                } else {
                    model_file.label_map.negative.clone()
                },
                score,
            });
            offset += window_len;
        }
    }

    if windows.is_empty() {
        let report = NoVoiceReport {
            file: args.wav.display().to_string(),
            error: "NoVoiceDetected",
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Err(AppError::Data("no voiced segments detected".into()));
    }

    let positive = windows.iter().filter(|w| w.label == model_file.label_map.positive).count();
    let fraction = positive as f64 / windows.len() as f64;
    let verdict = if fraction >= threshold {
        model_file.label_map.positive.clone()
    } else {
        model_file.label_map.negative.clone()
    };
    let report = DiagnosisReport {
        file: args.wav.display().to_string(),
        windows,
        verdict,
        positive_window_fraction: fraction,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
